"""Parametric boundary detection by accumulator voting.

Lines use the polar form x*cos(theta) + y*sin(theta) = rho with theta in
[0, pi) and signed rho, so every line has exactly one cell. Circles of a
fixed radius vote for their center over the image extent. Peaks are
strict local maxima above a vote threshold.

Voting may be split across worker threads (EDGECRAFT_THREADS); each
partition fills its own count grid and the grids are summed, so the
result is always identical to sequential voting.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .validation import (ABSOLUTE, check_edge_map, check_positive,
                         check_positive_int, check_threshold_mode)

THREADS_ENV_VAR = "EDGECRAFT_THREADS"


@dataclass(frozen=True)
class BinAxis:
    """Affine bin-to-value mapping: bin i represents origin + i * step."""
    origin: float
    step: float
    count: int

    def value(self, index: int) -> float:
        return self.origin + index * self.step

    def index(self, value: float) -> int:
        return int(np.rint((value - self.origin) / self.step))


@dataclass(frozen=True)
class Accumulator2D:
    """Integer vote grid over a two-parameter space."""
    counts: np.ndarray
    axis0: BinAxis
    axis1: BinAxis

    def __post_init__(self):
        if self.counts.shape != (self.axis0.count, self.axis1.count):
            raise ValueError(f"counts shape {self.counts.shape} does not match "
                             f"axes ({self.axis0.count}, {self.axis1.count})")

    @property
    def total_votes(self) -> int:
        return int(self.counts.sum())


class HoughPeak(NamedTuple):
    i0: int
    i1: int
    votes: int
    value0: float
    value1: float


class LineParam(NamedTuple):
    rho: float
    theta: float


class CircleParam(NamedTuple):
    a: float
    b: float
    r: float


def thread_count() -> int:
    """Worker cap from EDGECRAFT_THREADS; 0 or unset means sequential."""
    raw = os.environ.get(THREADS_ENV_VAR, "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"{THREADS_ENV_VAR} must be >= 0, got {n}")
    return n


def _partitioned_counts(n_items: int, shape: tuple[int, int],
                        fill: Callable[[slice, np.ndarray], None]) -> np.ndarray:
    """Run fill(chunk, grid) over pixel chunks and sum the grids.

    Integer grids are summed, so any partitioning gives the sequential
    result exactly.
    """
    workers = thread_count()
    if workers <= 1 or n_items == 0:
        counts = np.zeros(shape, dtype=np.int64)
        fill(slice(0, n_items), counts)
        return counts
    workers = min(workers, n_items)
    bounds = np.linspace(0, n_items, workers + 1, dtype=int)
    grids = [np.zeros(shape, dtype=np.int64) for _ in range(workers)]

    def run(i: int) -> None:
        fill(slice(bounds[i], bounds[i + 1]), grids[i])

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, range(workers)))
    return np.sum(grids, axis=0)


def hough_line_accumulate(edges: np.ndarray, theta_bins: int = 180,
                          rho_step: float = 1.0) -> Accumulator2D:
    """Vote every edge pixel into (rho, theta) cells.

    theta samples the bins' left edges k * pi / theta_bins; rho spans
    [-D, D] for the image diagonal D, rounded to the nearest bin. Every
    vote lands, so total votes = set pixels * theta_bins.
    """
    edges = check_edge_map(edges)
    theta_bins = check_positive_int(theta_bins, "theta_bins")
    rho_step = check_positive(rho_step, "rho_step")
    h, w = edges.shape
    diag = math.hypot(w - 1, h - 1)
    n_rho = int(np.rint(2.0 * diag / rho_step)) + 1
    rho_axis = BinAxis(-diag, rho_step, n_rho)
    theta_axis = BinAxis(0.0, math.pi / theta_bins, theta_bins)
    thetas = np.arange(theta_bins) * theta_axis.step
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)
    ys, xs = np.nonzero(edges)

    def fill(chunk: slice, grid: np.ndarray) -> None:
        cx, cy = xs[chunk], ys[chunk]
        for t in range(theta_bins):
            rho = cx * cos_t[t] + cy * sin_t[t]
            idx = np.rint((rho + diag) / rho_step).astype(np.int64)
            grid[:, t] += np.bincount(idx, minlength=n_rho)

    counts = _partitioned_counts(len(xs), (n_rho, theta_bins), fill)
    return Accumulator2D(counts=counts, axis0=rho_axis, axis1=theta_axis)


def hough_circle_accumulate(edges: np.ndarray, radius: float,
                            theta_steps: int = 360) -> Accumulator2D:
    """Vote each edge pixel for center candidates on its radius locus.

    Centers are binned at 1 px over the image extent (axis0 = row b,
    axis1 = column a); votes falling outside are discarded.
    """
    edges = check_edge_map(edges)
    radius = check_positive(radius, "radius")
    theta_steps = check_positive_int(theta_steps, "theta_steps", minimum=8)
    h, w = edges.shape
    thetas = np.arange(theta_steps) * (2.0 * math.pi / theta_steps)
    dx = radius * np.cos(thetas)
    dy = radius * np.sin(thetas)
    ys, xs = np.nonzero(edges)

    def fill(chunk: slice, grid: np.ndarray) -> None:
        cx, cy = xs[chunk], ys[chunk]
        flat = grid.reshape(-1)
        for t in range(theta_steps):
            a = np.rint(cx - dx[t]).astype(np.int64)
            b = np.rint(cy - dy[t]).astype(np.int64)
            ok = (a >= 0) & (a < w) & (b >= 0) & (b < h)
            if ok.any():
                flat += np.bincount(b[ok] * w + a[ok], minlength=h * w)

    counts = _partitioned_counts(len(xs), (h, w), fill)
    return Accumulator2D(counts=counts,
                         axis0=BinAxis(0.0, 1.0, h),
                         axis1=BinAxis(0.0, 1.0, w))


def find_peaks(acc: Accumulator2D, threshold: int,
               nms_radius: int = 1) -> list[HoughPeak]:
    """Cells at or above threshold that beat their Chebyshev neighborhood.

    A tie is broken toward the smaller row-major cell, which survives.
    Peaks come back sorted by descending votes, then row-major order.
    """
    threshold = check_positive_int(threshold, "threshold")
    check_positive_int(nms_radius, "nms_radius")
    counts = acc.counts
    n0, n1 = counts.shape
    peaks: list[HoughPeak] = []
    for i0, i1 in np.argwhere(counts >= threshold):
        votes = counts[i0, i1]
        rank = i0 * n1 + i1
        wins = True
        for j0 in range(max(i0 - nms_radius, 0), min(i0 + nms_radius + 1, n0)):
            for j1 in range(max(i1 - nms_radius, 0), min(i1 + nms_radius + 1, n1)):
                if j0 == i0 and j1 == i1:
                    continue
                other = counts[j0, j1]
                if other > votes or (other == votes and j0 * n1 + j1 < rank):
                    wins = False
                    break
            if not wins:
                break
        if wins:
            peaks.append(HoughPeak(int(i0), int(i1), int(votes),
                                   acc.axis0.value(int(i0)),
                                   acc.axis1.value(int(i1))))
    peaks.sort(key=lambda p: (-p.votes, p.i0, p.i1))
    return peaks


def effective_vote_threshold(acc: Accumulator2D, threshold: float,
                             mode: str = ABSOLUTE) -> int:
    """Turn an absolute or ratio-of-max threshold into a vote count >= 1."""
    check_threshold_mode(mode)
    if mode == ABSOLUTE:
        value = threshold
    else:
        if not (0.0 < threshold <= 1.0):
            raise ValueError(f"ratio threshold must lie in (0, 1], got {threshold}")
        value = threshold * float(acc.counts.max())
    return max(1, int(math.ceil(value)))


def decode_lines(peaks: list[HoughPeak], acc: Accumulator2D) -> list[LineParam]:
    """Map accumulator peaks back to their cell-center (rho, theta)."""
    out = []
    for p in peaks:
        if not (0 <= p.i0 < acc.axis0.count and 0 <= p.i1 < acc.axis1.count):
            raise ValueError(f"peak ({p.i0}, {p.i1}) outside accumulator "
                             f"{acc.counts.shape}")
        out.append(LineParam(acc.axis0.value(p.i0), acc.axis1.value(p.i1)))
    return out


def accumulator_image(acc: Accumulator2D) -> np.ndarray:
    """Votes scaled to [0, 1] by the maximum, for figure-style dumps."""
    peak = acc.counts.max()
    if peak <= 0:
        return np.zeros(acc.counts.shape, dtype=np.float64)
    return acc.counts.astype(np.float64) / float(peak)
