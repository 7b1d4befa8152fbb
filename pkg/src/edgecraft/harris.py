"""Harris corner detection: structure tensor, response map, peak picking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .filters import gaussian_smooth
from .gradients import SOBEL, GradientField, first_order_gradient
from .validation import (ABSOLUTE, REPLICATE, check_coord_in_bounds,
                         check_image, check_plane, check_positive,
                         check_positive_int, check_threshold_mode)


@dataclass(frozen=True)
class TensorField:
    """Gaussian-windowed second-moment products of the gradient.

    Per pixel the symmetric matrix [[ixx, ixy], [ixy, iyy]] is positive
    semidefinite up to float noise.
    """
    ixx: np.ndarray
    ixy: np.ndarray
    iyy: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.ixx.shape


class Corner(NamedTuple):
    x: int
    y: int
    response: float


@dataclass(frozen=True)
class HarrisParams:
    """Response constant, tensor window width, and corner selection rules."""
    k: float = 0.04
    window_sigma: float = 1.0
    threshold: float = 0.01
    threshold_mode: str = "ratio"
    nms_radius: int = 1

    def __post_init__(self):
        if not (0.0 < self.k < 0.25):
            raise ValueError(f"k must lie in (0, 0.25), got {self.k}")
        check_positive(self.window_sigma, "window_sigma")
        check_threshold_mode(self.threshold_mode)
        check_positive_int(self.nms_radius, "nms_radius")


def structure_tensor(fld: GradientField, window_sigma: float) -> TensorField:
    """Smooth the gradient outer products with a shared Gaussian window."""
    check_positive(window_sigma, "window_sigma")
    ixx = gaussian_smooth(fld.gx * fld.gx, window_sigma, REPLICATE)
    ixy = gaussian_smooth(fld.gx * fld.gy, window_sigma, REPLICATE)
    iyy = gaussian_smooth(fld.gy * fld.gy, window_sigma, REPLICATE)
    return TensorField(ixx=ixx, ixy=ixy, iyy=iyy)


def tensor_eigenvalues(tensor: TensorField, coord) -> tuple[float, float]:
    """Closed-form eigenvalues of the 2x2 tensor at (x, y), largest first."""
    x, y = check_coord_in_bounds(coord, tensor.shape)
    ixx = float(tensor.ixx[y, x])
    ixy = float(tensor.ixy[y, x])
    iyy = float(tensor.iyy[y, x])
    trace = ixx + iyy
    delta = np.hypot(ixx - iyy, 2.0 * ixy)
    return (trace + delta) / 2.0, (trace - delta) / 2.0


def harris_response(tensor: TensorField, k: float = 0.04,
                    plus_trace: bool = False) -> np.ndarray:
    """Corner response det - k * trace^2, without eigendecomposition.

    plus_trace flips the sign of the trace term (det + k * trace^2);
    with it, strong straight edges also maximize the response, so it
    exists for comparison only and is never the default.
    """
    if not (0.0 < k < 0.25):
        raise ValueError(f"k must lie in (0, 0.25), got {k}")
    det = tensor.ixx * tensor.iyy - tensor.ixy * tensor.ixy
    trace = tensor.ixx + tensor.iyy
    term = k * trace * trace
    return det + term if plus_trace else det - term


def _effective_threshold(response: np.ndarray, params: HarrisParams) -> float:
    if params.threshold_mode == ABSOLUTE:
        return params.threshold
    peak = float(response.max())
    if peak <= 0.0:
        # Nothing responds positively: no corner can exist at any
        # positive ratio, so disable candidacy outright.
        return np.inf
    return params.threshold * peak


def detect_corners(response: np.ndarray,
                   params: HarrisParams = HarrisParams()) -> list[Corner]:
    """Threshold the response, then keep candidates that beat every other
    candidate in their Chebyshev neighborhood.

    Equal responses break toward the smaller row-major coordinate, which
    survives. Result is sorted by descending response, then row-major.
    """
    response = check_plane(response, "response")
    threshold = _effective_threshold(response, params)
    h, w = response.shape
    r = params.nms_radius
    candidate = response >= threshold
    coords = np.argwhere(candidate)
    survivors: list[Corner] = []
    for y, x in coords:
        value = response[y, x]
        rank = y * w + x
        wins = True
        for ny in range(max(y - r, 0), min(y + r + 1, h)):
            for nx in range(max(x - r, 0), min(x + r + 1, w)):
                if (ny == y and nx == x) or not candidate[ny, nx]:
                    continue
                other = response[ny, nx]
                if other > value or (other == value and ny * w + nx < rank):
                    wins = False
                    break
            if not wins:
                break
        if wins:
            survivors.append(Corner(int(x), int(y), float(value)))
    survivors.sort(key=lambda c: (-c.response, c.y, c.x))
    return survivors


def harris_corners(image: np.ndarray,
                   params: HarrisParams = HarrisParams()) -> list[Corner]:
    """Image-to-corners convenience: Sobel gradient, windowed tensor,
    response, then thresholded non-maximal suppression."""
    image = check_image(image)
    fld = first_order_gradient(image, SOBEL)
    tensor = structure_tensor(fld, params.window_sigma)
    response = harris_response(tensor, params.k)
    return detect_corners(response, params)
