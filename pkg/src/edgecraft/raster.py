"""Raster access primitives: border-aware sampling and padding.

Images are plain 2D float64 numpy arrays in row-major order. Intensity
images keep samples in [0, 1]; derivative planes are unbounded but finite.
Coordinates are (x, y) with x the column and y the row, origin top-left,
y growing downward.
"""

from __future__ import annotations

import numpy as np

from .validation import (REFLECT, REPLICATE, ZERO, check_border_policy,
                         check_plane)

_NUMPY_PAD_MODE = {REPLICATE: "edge", REFLECT: "reflect", ZERO: "constant"}


def _fold_index(i: int, n: int, policy: str) -> int | None:
    """Map an arbitrary integer index onto [0, n); None means read 0.0."""
    if 0 <= i < n:
        return i
    if policy == ZERO:
        return None
    if policy == REPLICATE:
        return min(max(i, 0), n - 1)
    # Reflect mirrors about the border pixel without repeating it, so
    # index -1 reads 1 and index n reads n - 2. Period is 2n - 2.
    if n == 1:
        return 0
    period = 2 * n - 2
    i %= period
    return i if i < n else period - i


def sample(image: np.ndarray, coord, policy: str = REPLICATE) -> float:
    """Read one pixel at (x, y) under a border policy.

    Total for every integer coordinate: out-of-range reads follow the
    policy (clamp, mirror, or 0.0) instead of faulting.
    """
    image = check_plane(image, "image")
    check_border_policy(policy)
    x, y = int(coord[0]), int(coord[1])
    h, w = image.shape
    xi = _fold_index(x, w, policy)
    yi = _fold_index(y, h, policy)
    if xi is None or yi is None:
        return 0.0
    return float(image[yi, xi])


def pad(plane: np.ndarray, top: int, bottom: int, left: int, right: int,
        policy: str = REPLICATE) -> np.ndarray:
    """Pad a plane so window reads become plain slices.

    Matches sample() exactly for every in-pad coordinate, including pads
    wider than the plane itself.
    """
    check_border_policy(policy)
    if min(top, bottom, left, right) < 0:
        raise ValueError("pad widths must be non-negative")
    mode = _NUMPY_PAD_MODE[policy]
    kwargs = {"constant_values": 0.0} if policy == ZERO else {}
    return np.pad(plane, ((top, bottom), (left, right)), mode=mode, **kwargs)
