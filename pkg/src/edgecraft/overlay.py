"""Rasterize detected features onto an image for figure-style output.

Lines are clipped to the image rectangle then stepped with Bresenham;
circles use the integer midpoint algorithm; corners and shape instances
draw a 3x3 cross. Overlay pixels are set to intensity 1.0 and anything
falling outside the image is skipped silently.
"""

from __future__ import annotations

import math

import numpy as np

from .features import (CircleFeature, CornerFeature, LineFeature,
                       ShapeFeature)
from .validation import check_image


def _plot(image: np.ndarray, x: int, y: int) -> None:
    h, w = image.shape
    if 0 <= x < w and 0 <= y < h:
        image[y, x] = 1.0


def bresenham_line(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    """Integer line stepping between two endpoints, inclusive."""
    points = []
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            return points
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def clip_line_to_rect(rho: float, theta: float, width: int,
                      height: int) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """Clip x*cos(theta) + y*sin(theta) = rho to [0, w-1] x [0, h-1].

    Returns rounded endpoints, or None when the line misses the image.
    """
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    x0, y0 = rho * cos_t, rho * sin_t
    dx, dy = -sin_t, cos_t
    t_lo, t_hi = -math.inf, math.inf
    for p, q in ((-dx, x0 - 0.0), (dx, (width - 1) - x0),
                 (-dy, y0 - 0.0), (dy, (height - 1) - y0)):
        if p == 0.0:
            if q < 0.0:
                return None
            continue
        t = q / p
        if p < 0.0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
    if t_lo > t_hi:
        return None
    ax = int(round(x0 + t_lo * dx))
    ay = int(round(y0 + t_lo * dy))
    bx = int(round(x0 + t_hi * dx))
    by = int(round(y0 + t_hi * dy))
    return (ax, ay), (bx, by)


def midpoint_circle(cx: int, cy: int, r: int) -> list[tuple[int, int]]:
    """Pixel set of the integer midpoint circle algorithm (deduplicated,
    row-major order)."""
    if r <= 0:
        return [(cx, cy)]
    points = set()
    x, y = 0, r
    d = 1 - r
    while x <= y:
        for px, py in ((x, y), (y, x), (-x, y), (-y, x),
                       (x, -y), (y, -x), (-x, -y), (-y, -x)):
            points.add((cx + px, cy + py))
        x += 1
        if d < 0:
            d += 2 * x + 1
        else:
            y -= 1
            d += 2 * (x - y) + 1
    return sorted(points, key=lambda p: (p[1], p[0]))


def _draw_cross(image: np.ndarray, x: int, y: int) -> None:
    for px, py in ((x, y), (x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
        _plot(image, px, py)


def render_overlay(image: np.ndarray, features) -> np.ndarray:
    """Return a copy of the image with all features drawn at 1.0."""
    out = check_image(image).copy()
    h, w = out.shape
    for feature in features:
        if isinstance(feature, LineFeature):
            segment = clip_line_to_rect(feature.rho, feature.theta, w, h)
            if segment is None:
                continue
            (ax, ay), (bx, by) = segment
            for px, py in bresenham_line(ax, ay, bx, by):
                _plot(out, px, py)
        elif isinstance(feature, CircleFeature):
            cx = int(np.rint(feature.a))
            cy = int(np.rint(feature.b))
            for px, py in midpoint_circle(cx, cy, int(np.rint(feature.r))):
                _plot(out, px, py)
        elif isinstance(feature, (CornerFeature, ShapeFeature)):
            _draw_cross(out, int(feature.x), int(feature.y))
        else:
            raise TypeError(f"cannot render feature of type {type(feature)!r}")
    return out
