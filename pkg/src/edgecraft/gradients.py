"""First- and second-order differential operators and the gradient field.

Convolution here is correlation (no kernel flip): kernels are slid
templates, so the weight at cell (i, j) multiplies the pixel at
(x + j - anchor_x, y + i - anchor_y). x is the column index growing
rightward, y the row index growing downward. The "horizontal" kernel of
each operator pair is the one responding to vertical edges and feeds gx.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .raster import pad
from .validation import (REPLICATE, check_border_policy, check_plane,
                         check_same_shape)

PREWITT = "prewitt"
SOBEL = "sobel"
ROBERTS = "roberts"
FIRST_ORDER_KINDS = (PREWITT, SOBEL, ROBERTS)

FOUR = "four"
EIGHT = "eight"
LAPLACIAN_CONNECTIVITY = (FOUR, EIGHT)


@dataclass(frozen=True)
class Kernel:
    """A correlation template: weight grid plus the anchor cell."""
    weights: np.ndarray
    anchor: tuple[int, int] = None  # (x, y) inside the grid; default center

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.ndim != 2 or weights.size == 0:
            raise ValueError(f"kernel weights must be a non-empty 2D grid, "
                             f"got shape {weights.shape}")
        if not np.all(np.isfinite(weights)):
            raise ValueError("kernel weights must be finite")
        object.__setattr__(self, "weights", weights)
        anchor = self.anchor
        if anchor is None:
            anchor = (weights.shape[1] // 2, weights.shape[0] // 2)
        ax, ay = int(anchor[0]), int(anchor[1])
        if not (0 <= ax < weights.shape[1] and 0 <= ay < weights.shape[0]):
            raise ValueError(f"anchor {anchor} outside kernel of shape "
                             f"{weights.shape}")
        object.__setattr__(self, "anchor", (ax, ay))

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]


# Operator templates, each pair ordered (gx, gy).
PREWITT_GX = Kernel([[-1, 0, 1], [-1, 0, 1], [-1, 0, 1]])
PREWITT_GY = Kernel([[1, 1, 1], [0, 0, 0], [-1, -1, -1]])
SOBEL_GX = Kernel([[1, 0, -1], [2, 0, -2], [1, 0, -1]])
SOBEL_GY = Kernel([[1, 2, 1], [0, 0, 0], [-1, -2, -1]])
ROBERTS_GX = Kernel([[1, 0], [0, -1]], anchor=(0, 0))
ROBERTS_GY = Kernel([[0, -1], [1, 0]], anchor=(0, 0))
LAPLACIAN_FOUR = Kernel([[0, -1, 0], [-1, 4, -1], [0, -1, 0]])
LAPLACIAN_EIGHT = Kernel([[-1, -1, -1], [-1, 8, -1], [-1, -1, -1]])

FIRST_ORDER_KERNELS = {
    PREWITT: (PREWITT_GX, PREWITT_GY),
    SOBEL: (SOBEL_GX, SOBEL_GY),
    ROBERTS: (ROBERTS_GX, ROBERTS_GY),
}


@dataclass(frozen=True)
class GradientField:
    """Per-pixel first derivatives with their polar decomposition.

    magnitude is sqrt(gx^2 + gy^2); orientation is the two-argument
    arctangent of (gy, gx) in (-pi, pi], 0 where both derivatives vanish.
    """
    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray = field(repr=False)
    orientation: np.ndarray = field(repr=False)

    @classmethod
    def from_derivatives(cls, gx: np.ndarray, gy: np.ndarray) -> "GradientField":
        gx = check_plane(gx, "gx")
        gy = check_plane(gy, "gy")
        check_same_shape(gx, gy, "gx", "gy")
        magnitude = np.hypot(gx, gy)
        # + 0.0 canonicalizes -0.0 so the angle stays inside (-pi, pi].
        orientation = np.arctan2(gy + 0.0, gx + 0.0)
        return cls(gx=gx, gy=gy, magnitude=magnitude, orientation=orientation)

    @property
    def shape(self) -> tuple[int, int]:
        return self.gx.shape


def convolve2d(image: np.ndarray, kernel: Kernel,
               policy: str = REPLICATE) -> np.ndarray:
    """Correlate a plane with a kernel under a border policy.

    Accumulates one shifted view per kernel cell in row-major cell order,
    which reproduces the per-pixel loop bit for bit.
    """
    image = check_plane(image, "image")
    check_border_policy(policy)
    ax, ay = kernel.anchor
    h, w = image.shape
    padded = pad(image, ay, kernel.rows - 1 - ay, ax, kernel.cols - 1 - ax, policy)
    out = np.zeros_like(image)
    for i in range(kernel.rows):
        for j in range(kernel.cols):
            weight = kernel.weights[i, j]
            if weight != 0.0:
                out += weight * padded[i:i + h, j:j + w]
    return out


def _check_min_size(image: np.ndarray, kernel: Kernel, name: str) -> None:
    if image.shape[0] < kernel.rows or image.shape[1] < kernel.cols:
        raise ValueError(f"image of shape {image.shape} is smaller than the "
                         f"{kernel.rows}x{kernel.cols} {name} kernel")


def first_order_gradient(image: np.ndarray, kind: str = SOBEL,
                         policy: str = REPLICATE) -> GradientField:
    """Apply a first-order operator pair and derive magnitude/orientation."""
    image = check_plane(image, "image")
    if kind not in FIRST_ORDER_KERNELS:
        raise ValueError(f"unknown first-order operator {kind!r}; "
                         f"expected one of {FIRST_ORDER_KINDS}")
    kx, ky = FIRST_ORDER_KERNELS[kind]
    _check_min_size(image, kx, kind)
    gx = convolve2d(image, kx, policy)
    gy = convolve2d(image, ky, policy)
    return GradientField.from_derivatives(gx, gy)


def laplacian(image: np.ndarray, connectivity: str = FOUR,
              policy: str = REPLICATE) -> np.ndarray:
    """Second derivative via the 4- or 8-neighbor template."""
    image = check_plane(image, "image")
    if connectivity == FOUR:
        kernel = LAPLACIAN_FOUR
    elif connectivity == EIGHT:
        kernel = LAPLACIAN_EIGHT
    else:
        raise ValueError(f"unknown connectivity {connectivity!r}; "
                         f"expected one of {LAPLACIAN_CONNECTIVITY}")
    _check_min_size(image, kernel, "laplacian")
    return convolve2d(image, kernel, policy)
