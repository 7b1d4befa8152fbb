"""Noise suppression filters applied before differentiation.

All filters preserve image dimensions, default to replicate borders
(zero padding would manufacture dark rims), and are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import pad
from .validation import (REPLICATE, check_border_policy, check_image,
                         check_plane, check_positive, check_positive_int)

# Guards the Wiener gain denominator where the local variance vanishes.
VARIANCE_EPS = 1e-12

MEAN = "mean"
MEDIAN = "median"
GAUSSIAN = "gaussian"
WIENER = "wiener"
HYBRID = "hybrid"
FILTER_KINDS = (MEAN, MEDIAN, GAUSSIAN, WIENER, HYBRID)


@dataclass(frozen=True)
class FilterSpec:
    """A named filter plus its parameters, as used by the CLI and pipeline.

    noise_variance None means estimate it from the mean local variance.
    """
    kind: str
    radius: int = 1
    sigma: float = 1.0
    noise_variance: float | None = None

    def __post_init__(self):
        if self.kind not in FILTER_KINDS:
            raise ValueError(f"unknown filter kind {self.kind!r}; "
                             f"expected one of {FILTER_KINDS}")
        check_positive_int(self.radius, "radius")
        if self.kind == GAUSSIAN:
            check_positive(self.sigma, "sigma")
        if self.noise_variance is not None and self.noise_variance < 0:
            raise ValueError("noise_variance must be >= 0")


def _window_views(plane: np.ndarray, radius: int, policy: str):
    """Yield the (2r+1)^2 shifted full-size views of the padded plane.

    Row-major window order so accumulation matches a per-pixel loop
    over the window bit for bit.
    """
    h, w = plane.shape
    padded = pad(plane, radius, radius, radius, radius, policy)
    for dy in range(2 * radius + 1):
        for dx in range(2 * radius + 1):
            yield padded[dy:dy + h, dx:dx + w]


def _window_sum(plane: np.ndarray, radius: int, policy: str) -> np.ndarray:
    acc = np.zeros_like(plane)
    for view in _window_views(plane, radius, policy):
        acc += view
    return acc


def mean_filter(image: np.ndarray, radius: int, policy: str = REPLICATE) -> np.ndarray:
    """Arithmetic mean over the (2r+1)x(2r+1) window around each pixel."""
    image = check_image(image)
    radius = check_positive_int(radius, "radius")
    check_border_policy(policy)
    n = (2 * radius + 1) ** 2
    return np.clip(_window_sum(image, radius, policy) / n, 0.0, 1.0)


def median_filter(image: np.ndarray, radius: int, policy: str = REPLICATE) -> np.ndarray:
    """Window median; the window has an odd pixel count so it is exact."""
    image = check_image(image)
    radius = check_positive_int(radius, "radius")
    check_border_policy(policy)
    stack = np.stack(list(_window_views(image, radius, policy)), axis=0)
    return np.median(stack, axis=0)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 2D Gaussian with half-width ceil(3*sigma)."""
    sigma = check_positive(sigma, "sigma")
    half = int(np.ceil(3.0 * sigma))
    grid = np.arange(-half, half + 1, dtype=np.float64)
    xx, yy = np.meshgrid(grid, grid)
    weights = np.exp(-(xx * xx + yy * yy) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def gaussian_smooth(plane: np.ndarray, sigma: float,
                    policy: str = REPLICATE) -> np.ndarray:
    """Gaussian smoothing of an arbitrary signed plane (no range clamp)."""
    plane = check_plane(plane)
    check_border_policy(policy)
    kernel = gaussian_kernel(sigma)
    half = kernel.shape[0] // 2
    h, w = plane.shape
    padded = pad(plane, half, half, half, half, policy)
    acc = np.zeros_like(plane)
    for dy in range(kernel.shape[0]):
        for dx in range(kernel.shape[1]):
            acc += kernel[dy, dx] * padded[dy:dy + h, dx:dx + w]
    return acc


def gaussian_blur(image: np.ndarray, sigma: float,
                  policy: str = REPLICATE) -> np.ndarray:
    """Gaussian blur of an intensity image."""
    image = check_image(image)
    return np.clip(gaussian_smooth(image, sigma, policy), 0.0, 1.0)


def adaptive_wiener_filter(image: np.ndarray, radius: int,
                           noise_variance: float | None = None) -> np.ndarray:
    """Local mean/variance Wiener smoother.

    Each pixel moves toward the window mean by a gain of
    max(0, v - n) / v where v is the local variance and n the noise
    variance; n defaults to the mean of all local variances.
    """
    image = check_image(image)
    radius = check_positive_int(radius, "radius")
    if noise_variance is not None and noise_variance < 0:
        raise ValueError("noise_variance must be >= 0")
    n_pix = (2 * radius + 1) ** 2
    mean = _window_sum(image, radius, REPLICATE) / n_pix
    mean_sq = _window_sum(image * image, radius, REPLICATE) / n_pix
    variance = np.maximum(mean_sq - mean * mean, 0.0)
    noise = float(variance.mean()) if noise_variance is None else float(noise_variance)
    gain = np.maximum(variance - noise, 0.0) / np.maximum(variance, VARIANCE_EPS)
    # Unit gain passes the input through bit-exact instead of via mean +
    # (input - mean), which reassociates and can drift by an ulp.
    out = np.where(gain == 1.0, image, mean + gain * (image - mean))
    return np.clip(out, 0.0, 1.0)


def hybrid_filter(image: np.ndarray, radius: int) -> np.ndarray:
    """Median pass to kill impulses, then auto-noise Wiener smoothing."""
    return adaptive_wiener_filter(median_filter(image, radius), radius, None)


def apply_filter(image: np.ndarray, spec: FilterSpec,
                 policy: str = REPLICATE) -> np.ndarray:
    if spec.kind == MEAN:
        return mean_filter(image, spec.radius, policy)
    if spec.kind == MEDIAN:
        return median_filter(image, spec.radius, policy)
    if spec.kind == GAUSSIAN:
        return gaussian_blur(image, spec.sigma, policy)
    if spec.kind == WIENER:
        return adaptive_wiener_filter(image, spec.radius, spec.noise_variance)
    return hybrid_filter(image, spec.radius)
