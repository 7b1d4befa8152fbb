"""Input validation helpers shared by every stage of the toolkit."""

from __future__ import annotations

import numpy as np

# Border handling modes accepted everywhere a window leaves the image.
REPLICATE = "replicate"
REFLECT = "reflect"
ZERO = "zero"
BORDER_POLICIES = (REPLICATE, REFLECT, ZERO)

# Threshold interpretation modes shared by Canny, Harris, and peak finding.
ABSOLUTE = "absolute"
RATIO_OF_MAX = "ratio"
THRESHOLD_MODES = (ABSOLUTE, RATIO_OF_MAX)


def check_image(a, name: str = "image") -> np.ndarray:
    """Validate a grayscale intensity image: 2D, finite, values in [0, 1].

    Returns the array as float64 (no copy when already float64).
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite samples")
    if a.min() < 0.0 or a.max() > 1.0:
        raise ValueError(f"{name} samples must lie in [0, 1], "
                         f"got range [{a.min()}, {a.max()}]")
    return a


def check_plane(a, name: str = "plane") -> np.ndarray:
    """Validate a signed response plane: 2D and finite, any range."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def check_nonnegative_plane(a, name: str = "plane") -> np.ndarray:
    a = check_plane(a, name)
    if a.min() < 0.0:
        raise ValueError(f"{name} must be non-negative, min is {a.min()}")
    return a


def check_edge_map(a, name: str = "edges") -> np.ndarray:
    """Validate a binary edge map; returns a bool array."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2D, got shape {a.shape}")
    if a.dtype != np.bool_:
        if not np.isin(a, (0, 1)).all():
            raise ValueError(f"{name} must be boolean or 0/1 valued")
        a = a.astype(bool)
    return a


def check_same_shape(a: np.ndarray, b: np.ndarray, name_a: str, name_b: str) -> None:
    if a.shape != b.shape:
        raise ValueError(f"{name_a} shape {a.shape} != {name_b} shape {b.shape}")


def check_positive(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be finite and > 0, got {value}")
    return value


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_border_policy(policy: str) -> str:
    if policy not in BORDER_POLICIES:
        raise ValueError(f"unknown border policy {policy!r}; "
                         f"expected one of {BORDER_POLICIES}")
    return policy


def check_threshold_mode(mode: str) -> str:
    if mode not in THRESHOLD_MODES:
        raise ValueError(f"unknown threshold mode {mode!r}; "
                         f"expected one of {THRESHOLD_MODES}")
    return mode


def check_coord_in_bounds(coord, shape, name: str = "coord") -> tuple[int, int]:
    """Validate an (x, y) pixel coordinate against an array shape (h, w)."""
    x, y = int(coord[0]), int(coord[1])
    h, w = shape
    if not (0 <= x < w and 0 <= y < h):
        raise IndexError(f"{name} ({x}, {y}) outside image of size {w}x{h}")
    return x, y
