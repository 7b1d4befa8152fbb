"""Brute-force reference implementations the library is tested against.

Everything here is written as plain per-pixel loops with its own border
handling and rounding, independent of the package internals.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np


# --- border handling --------------------------------------------------------

def fold_index(i: int, n: int, policy: str) -> int | None:
    """Resolve an out-of-range index; None means the read is 0.0."""
    if 0 <= i < n:
        return i
    if policy == "zero":
        return None
    if policy == "replicate":
        return 0 if i < 0 else n - 1
    if n == 1:
        return 0
    # bounce between the walls until inside; mirrors about border pixels
    while not (0 <= i < n):
        if i < 0:
            i = -i
        else:
            i = 2 * (n - 1) - i
    return i


def sample_at(image: np.ndarray, x: int, y: int, policy: str) -> float:
    h, w = image.shape
    xi = fold_index(x, w, policy)
    yi = fold_index(y, h, policy)
    if xi is None or yi is None:
        return 0.0
    return float(image[yi, xi])


def window_values(image: np.ndarray, x: int, y: int, radius: int,
                  policy: str) -> list[float]:
    values = []
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            values.append(sample_at(image, x + dx, y + dy, policy))
    return values


# --- filters ----------------------------------------------------------------

def mean_filter_ref(image: np.ndarray, radius: int, policy: str) -> np.ndarray:
    h, w = image.shape
    n = (2 * radius + 1) ** 2
    out = np.zeros_like(image)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for v in window_values(image, x, y, radius, policy):
                acc += v
            out[y, x] = acc / n
    return out


def median_filter_ref(image: np.ndarray, radius: int, policy: str) -> np.ndarray:
    h, w = image.shape
    out = np.zeros_like(image)
    for y in range(h):
        for x in range(w):
            values = sorted(window_values(image, x, y, radius, policy))
            out[y, x] = values[len(values) // 2]
    return out


def gaussian_kernel_ref(sigma: float) -> np.ndarray:
    half = math.ceil(3.0 * sigma)
    size = 2 * half + 1
    weights = np.zeros((size, size))
    for i in range(size):
        for j in range(size):
            dy, dx = i - half, j - half
            weights[i, j] = math.exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def wiener_filter_ref(image: np.ndarray, radius: int,
                      noise_variance: float | None) -> np.ndarray:
    h, w = image.shape
    means = np.zeros_like(image)
    variances = np.zeros_like(image)
    for y in range(h):
        for x in range(w):
            values = window_values(image, x, y, radius, "replicate")
            mu = sum(values) / len(values)
            means[y, x] = mu
            variances[y, x] = sum(v * v for v in values) / len(values) - mu * mu
    variances = np.maximum(variances, 0.0)
    noise = variances.mean() if noise_variance is None else noise_variance
    out = np.zeros_like(image)
    for y in range(h):
        for x in range(w):
            v = variances[y, x]
            gain = max(0.0, v - noise) / max(v, 1e-12)
            out[y, x] = means[y, x] + gain * (image[y, x] - means[y, x])
    return out


# --- convolution ------------------------------------------------------------

def correlate_ref(image: np.ndarray, weights: np.ndarray, anchor: tuple[int, int],
                  policy: str) -> np.ndarray:
    """Five-loop correlation: out(x, y) = sum_ij w(i, j) * image(x + j - ax,
    y + i - ay) under the border policy."""
    h, w = image.shape
    rows, cols = weights.shape
    ax, ay = anchor
    out = np.zeros_like(image, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for i in range(rows):
                for j in range(cols):
                    acc += weights[i, j] * sample_at(image, x + j - ax,
                                                     y + i - ay, policy)
            out[y, x] = acc
    return out


# --- canny stages -----------------------------------------------------------

def nms_ref(magnitude: np.ndarray, orientation: np.ndarray) -> np.ndarray:
    directions = {0: (1, 0), 45: (1, 1), 90: (0, 1), 135: (-1, 1)}
    h, w = magnitude.shape
    out = np.zeros_like(magnitude)
    for y in range(h):
        for x in range(w):
            angle = math.degrees(orientation[y, x]) % 180.0
            best = min((0, 45, 90, 135, 180), key=lambda b: abs(angle - b)) % 180
            dx, dy = directions[best]
            m = magnitude[y, x]
            ahead = magnitude[y + dy, x + dx] \
                if 0 <= x + dx < w and 0 <= y + dy < h else 0.0
            behind = magnitude[y - dy, x - dx] \
                if 0 <= x - dx < w and 0 <= y - dy < h else 0.0
            out[y, x] = m if (m >= ahead and m >= behind) else 0.0
    return out


def reachable_from_strong(classes: np.ndarray) -> np.ndarray:
    """Exhaustive BFS flood fill: strong pixels plus the weak pixels
    connected to one through 8-adjacent weak/strong chains."""
    h, w = classes.shape
    out = np.zeros((h, w), dtype=bool)
    queue = deque((y, x) for y, x in np.argwhere(classes == 2))
    for y, x in queue:
        out[y, x] = True
    while queue:
        y, x = queue.popleft()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                ny, nx = y + dy, x + dx
                if (0 <= ny < h and 0 <= nx < w and not out[ny, nx]
                        and classes[ny, nx] in (1, 2)):
                    out[ny, nx] = True
                    queue.append((ny, nx))
    return out


# --- voting -----------------------------------------------------------------

def hough_line_votes_ref(edges: np.ndarray, theta_bins: int,
                         rho_step: float) -> np.ndarray:
    h, w = edges.shape
    diag = math.hypot(w - 1, h - 1)
    n_rho = round(2.0 * diag / rho_step) + 1
    counts = np.zeros((n_rho, theta_bins), dtype=np.int64)
    for y in range(h):
        for x in range(w):
            if not edges[y, x]:
                continue
            for t in range(theta_bins):
                theta = t * math.pi / theta_bins
                rho = x * math.cos(theta) + y * math.sin(theta)
                counts[round((rho + diag) / rho_step), t] += 1
    return counts


def hough_circle_votes_ref(edges: np.ndarray, radius: float,
                           theta_steps: int) -> np.ndarray:
    h, w = edges.shape
    counts = np.zeros((h, w), dtype=np.int64)
    for y in range(h):
        for x in range(w):
            if not edges[y, x]:
                continue
            for t in range(theta_steps):
                theta = 2.0 * math.pi * t / theta_steps
                a = round(x - radius * math.cos(theta))
                b = round(y - radius * math.sin(theta))
                if 0 <= a < w and 0 <= b < h:
                    counts[b, a] += 1
    return counts


def phase_bin_ref(angle: float, phi_bins: int) -> int:
    phase = angle % (2.0 * math.pi)
    return min(int(phase / (2.0 * math.pi / phi_bins)), phi_bins - 1)


def ght_votes_ref(scene_edges: np.ndarray, scene_orientation: np.ndarray,
                  table: dict[int, list[tuple[int, int]]],
                  phi_bins: int) -> np.ndarray:
    h, w = scene_edges.shape
    counts = np.zeros((h, w), dtype=np.int64)
    for y in range(h):
        for x in range(w):
            if not scene_edges[y, x]:
                continue
            b = phase_bin_ref(scene_orientation[y, x], phi_bins)
            for dx, dy in table.get(b, ()):
                vx, vy = x + dx, y + dy
                if 0 <= vx < w and 0 <= vy < h:
                    counts[vy, vx] += 1
    return counts


def strict_peaks_ref(counts: np.ndarray, threshold: int,
                     radius: int) -> list[tuple[int, int, int]]:
    """Exhaustive neighborhood-max scan with row-major tie survival."""
    n0, n1 = counts.shape
    peaks = []
    for i0 in range(n0):
        for i1 in range(n1):
            votes = counts[i0, i1]
            if votes < threshold:
                continue
            wins = True
            for j0 in range(max(0, i0 - radius), min(n0, i0 + radius + 1)):
                for j1 in range(max(0, i1 - radius), min(n1, i1 + radius + 1)):
                    if (j0, j1) == (i0, i1):
                        continue
                    other = counts[j0, j1]
                    if other > votes or (other == votes
                                         and (j0, j1) < (i0, i1)):
                        wins = False
            if wins:
                peaks.append((i0, i1, int(votes)))
    peaks.sort(key=lambda p: (-p[2], p[0], p[1]))
    return peaks


def suppress_corners_ref(response: np.ndarray, threshold: float,
                         radius: int) -> list[tuple[int, int, float]]:
    """Exhaustive pairwise suppression among above-threshold pixels."""
    h, w = response.shape
    candidates = [(y, x) for y in range(h) for x in range(w)
                  if response[y, x] >= threshold]
    out = []
    for y, x in candidates:
        value = response[y, x]
        wins = True
        for oy, ox in candidates:
            if (oy, ox) == (y, x) or max(abs(oy - y), abs(ox - x)) > radius:
                continue
            other = response[oy, ox]
            if other > value or (other == value and (oy, ox) < (y, x)):
                wins = False
        if wins:
            out.append((x, y, float(value)))
    out.sort(key=lambda c: (-c[2], c[1], c[0]))
    return out


# --- geometry ---------------------------------------------------------------

def midpoint_circle_ref(cx: int, cy: int, r: int) -> set[tuple[int, int]]:
    """Per-column nearest pixel in the first octant, mirrored 8 ways;
    equals the incremental midpoint rule y = floor(sqrt(r^2 - x^2) + 1/2)."""
    points = set()
    x = 0
    while True:
        y = math.floor(math.sqrt(r * r - x * x) + 0.5)
        if x > y:
            break
        for px, py in ((x, y), (y, x), (-x, y), (-y, x),
                       (x, -y), (y, -x), (-x, -y), (-y, -x)):
            points.add((cx + px, cy + py))
        x += 1
    return points
