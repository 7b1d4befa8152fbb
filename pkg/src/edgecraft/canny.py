"""Five-stage Canny pipeline: blur, gradient, thinning, thresholds, tracking.

The edge-class map uses EDGE_NONE / EDGE_WEAK / EDGE_STRONG codes; the
final edge map is a plain boolean array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters import gaussian_blur
from .gradients import SOBEL, GradientField, first_order_gradient
from .validation import (ABSOLUTE, RATIO_OF_MAX, check_image,
                         check_nonnegative_plane, check_positive,
                         check_threshold_mode)

EDGE_NONE = np.uint8(0)
EDGE_WEAK = np.uint8(1)
EDGE_STRONG = np.uint8(2)

TRANSITIVE = "transitive"  # follow weak chains all the way to a strong seed
ONE_HOP = "one_hop"        # keep a weak pixel only if a strong one touches it
CONNECTIVITY_MODES = (TRANSITIVE, ONE_HOP)


@dataclass(frozen=True)
class CannyParams:
    """Blur width plus the two thresholds and how to interpret them.

    In "ratio" mode low/high multiply the maximum magnitude that
    survives non-maximum suppression; in "absolute" mode they are used
    as-is. 0 < low < high always.
    """
    sigma: float = 1.0
    low: float = 0.1
    high: float = 0.3
    threshold_mode: str = RATIO_OF_MAX
    connectivity: str = TRANSITIVE

    def __post_init__(self):
        check_positive(self.sigma, "sigma")
        check_threshold_mode(self.threshold_mode)
        if not (0.0 < self.low < self.high):
            raise ValueError(f"thresholds must satisfy 0 < low < high, "
                             f"got low={self.low}, high={self.high}")
        if self.connectivity not in CONNECTIVITY_MODES:
            raise ValueError(f"unknown connectivity {self.connectivity!r}; "
                             f"expected one of {CONNECTIVITY_MODES}")


# Step along the quantized gradient direction, (dx, dy) per bin:
# 0 deg, 45 deg, 90 deg, 135 deg. y grows downward.
_DIRECTION_STEPS = ((1, 0), (1, 1), (0, 1), (-1, 1))


def _shifted(plane: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """plane sampled at (x + dx, y + dy) with out-of-range reading 0."""
    h, w = plane.shape
    out = np.zeros_like(plane)
    src_x = slice(max(dx, 0), w + min(dx, 0))
    src_y = slice(max(dy, 0), h + min(dy, 0))
    dst_x = slice(max(-dx, 0), w + min(-dx, 0))
    dst_y = slice(max(-dy, 0), h + min(-dy, 0))
    out[dst_y, dst_x] = plane[src_y, src_x]
    return out


def non_maximum_suppression(fld: GradientField) -> np.ndarray:
    """Zero every magnitude that is not >= both neighbors along its
    gradient direction, quantized to the nearest of 0/45/90/135 degrees.

    Ties keep the pixel; strict comparison would erase plateau edges
    entirely. Neighbors outside the image read 0.
    """
    magnitude = fld.magnitude
    bins = np.rint(np.mod(fld.orientation, np.pi) / (np.pi / 4)).astype(np.int64) % 4
    keep = np.zeros(magnitude.shape, dtype=bool)
    for b, (dx, dy) in enumerate(_DIRECTION_STEPS):
        ahead = _shifted(magnitude, dx, dy)
        behind = _shifted(magnitude, -dx, -dy)
        keep |= (bins == b) & (magnitude >= ahead) & (magnitude >= behind)
    return np.where(keep, magnitude, 0.0)


def effective_thresholds(plane: np.ndarray, params: CannyParams) -> tuple[float, float]:
    if params.threshold_mode == ABSOLUTE:
        return params.low, params.high
    peak = float(plane.max())
    if peak <= 0.0:
        # No signal anywhere: scaling thresholds by a zero maximum would
        # classify the whole plane strong, so treat everything as none.
        return np.inf, np.inf
    return params.low * peak, params.high * peak


def double_threshold(plane: np.ndarray, params: CannyParams) -> np.ndarray:
    """Partition magnitudes into none (< low), strong (>= high), weak."""
    plane = check_nonnegative_plane(plane)
    low, high = effective_thresholds(plane, params)
    classes = np.full(plane.shape, EDGE_WEAK, dtype=np.uint8)
    classes[plane < low] = EDGE_NONE
    classes[plane >= high] = EDGE_STRONG
    return classes


def _dilate8(mask: np.ndarray) -> np.ndarray:
    out = mask.copy()
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx or dy:
                out |= _shifted(mask, dx, dy).astype(bool)
    return out


def hysteresis(classes: np.ndarray, connectivity: str = TRANSITIVE) -> np.ndarray:
    """Keep strong pixels and the weak ones connected to them.

    Transitive mode flood-fills from strong seeds through 8-adjacent
    weak chains; one-hop mode keeps only weak pixels directly touching
    a strong one.
    """
    classes = np.asarray(classes)
    strong = classes == EDGE_STRONG
    weak = classes == EDGE_WEAK
    if connectivity == ONE_HOP:
        return strong | (weak & _dilate8(strong))
    if connectivity != TRANSITIVE:
        raise ValueError(f"unknown connectivity {connectivity!r}; "
                         f"expected one of {CONNECTIVITY_MODES}")
    passable = strong | weak
    reached = strong
    while True:
        grown = _dilate8(reached) & passable
        if np.array_equal(grown, reached):
            return reached
        reached = grown


def canny(image: np.ndarray, params: CannyParams = CannyParams()) -> np.ndarray:
    """Full pipeline: Gaussian blur, Sobel gradient, NMS, double
    threshold, hysteresis tracking. Returns a boolean edge map."""
    image = check_image(image)
    blurred = gaussian_blur(image, params.sigma)
    fld = first_order_gradient(blurred, SOBEL)
    thin = non_maximum_suppression(fld)
    classes = double_threshold(thin, params)
    return hysteresis(classes, params.connectivity)
