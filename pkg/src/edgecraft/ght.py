"""Generalized Hough transform: R-table shape models located by voting.

A model is a table of displacement vectors (reference point minus
boundary pixel) indexed by quantized gradient phase. Scene edge pixels
vote through the table; the translation of the shape shows up as the
vote maximum. Rotation and scale are out of scope: the table encodes
translation only.

The gradient phase must be computed identically for model and scene
(Sobel on the image the edges came from) or the bins will not align.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hough import Accumulator2D, BinAxis, _partitioned_counts, \
    effective_vote_threshold, find_peaks
from .validation import (check_edge_map, check_plane, check_positive_int,
                         check_same_shape, check_threshold_mode)


@dataclass(frozen=True)
class RTable:
    """Phase-quantized displacement table for one shape.

    table[b] holds every (dx, dy) whose source boundary pixel quantized
    to phase bin b; the total vector count equals the model's edge
    pixel count.
    """
    phi_bins: int
    table: tuple[tuple[tuple[int, int], ...], ...]
    reference_point: tuple[int, int]

    def __post_init__(self):
        check_positive_int(self.phi_bins, "phi_bins", minimum=4)
        if len(self.table) != self.phi_bins:
            raise ValueError(f"table has {len(self.table)} bins, "
                             f"expected {self.phi_bins}")

    @property
    def total_vectors(self) -> int:
        return sum(len(bin_vectors) for bin_vectors in self.table)


@dataclass(frozen=True)
class GhtParams:
    """Phase resolution plus peak selection rules."""
    phi_bins: int = 64
    threshold: float = 0.5
    threshold_mode: str = "ratio"
    nms_radius: int = 2

    def __post_init__(self):
        check_positive_int(self.phi_bins, "phi_bins", minimum=4)
        check_threshold_mode(self.threshold_mode)
        check_positive_int(self.nms_radius, "nms_radius")


def quantize_phase(orientation: np.ndarray, phi_bins: int,
                   mod_pi: bool = False) -> np.ndarray:
    """Quantize gradient angles into phi_bins equal sectors.

    Full [0, 2*pi) keeps contrast polarity; mod_pi folds opposite
    polarities together for contrast-invariant matching.
    """
    period = np.pi if mod_pi else 2.0 * np.pi
    phase = np.mod(orientation, period)
    bins = np.floor(phase / (period / phi_bins)).astype(np.int64)
    return np.clip(bins, 0, phi_bins - 1)


def build_rtable(model_edges: np.ndarray, model_orientation: np.ndarray,
                 reference_point, phi_bins: int = 64,
                 mod_pi: bool = False) -> RTable:
    """Store reference-minus-boundary vectors under each pixel's phase bin."""
    model_edges = check_edge_map(model_edges, "model_edges")
    model_orientation = check_plane(model_orientation, "model_orientation")
    check_same_shape(model_edges, model_orientation,
                     "model_edges", "model_orientation")
    check_positive_int(phi_bins, "phi_bins", minimum=4)
    ref_x, ref_y = int(reference_point[0]), int(reference_point[1])
    ys, xs = np.nonzero(model_edges)
    if len(xs) == 0:
        raise ValueError("model has no edge pixels; cannot build a shape table")
    bins = quantize_phase(model_orientation[ys, xs], phi_bins, mod_pi)
    table: list[list[tuple[int, int]]] = [[] for _ in range(phi_bins)]
    for x, y, b in zip(xs, ys, bins):
        table[b].append((ref_x - int(x), ref_y - int(y)))
    return RTable(phi_bins=phi_bins,
                  table=tuple(tuple(v) for v in table),
                  reference_point=(ref_x, ref_y))


def ght_accumulate(scene_edges: np.ndarray, scene_orientation: np.ndarray,
                   rtable: RTable, mod_pi: bool = False) -> Accumulator2D:
    """Vote each scene edge pixel through its phase bin's vector list.

    The accumulator covers the scene extent at 1 px (axis0 = row,
    axis1 = column); votes landing outside are discarded.
    """
    scene_edges = check_edge_map(scene_edges, "scene_edges")
    scene_orientation = check_plane(scene_orientation, "scene_orientation")
    check_same_shape(scene_edges, scene_orientation,
                     "scene_edges", "scene_orientation")
    h, w = scene_edges.shape
    ys, xs = np.nonzero(scene_edges)
    bins = quantize_phase(scene_orientation[ys, xs], rtable.phi_bins, mod_pi)

    def fill(chunk: slice, grid: np.ndarray) -> None:
        cx, cy, cb = xs[chunk], ys[chunk], bins[chunk]
        flat = grid.reshape(-1)
        for b in np.unique(cb):
            vectors = rtable.table[b]
            if not vectors:
                continue
            px, py = cx[cb == b], cy[cb == b]
            for dx, dy in vectors:
                vx, vy = px + dx, py + dy
                ok = (vx >= 0) & (vx < w) & (vy >= 0) & (vy < h)
                if ok.any():
                    flat += np.bincount(vy[ok] * w + vx[ok], minlength=h * w)

    counts = _partitioned_counts(len(xs), (h, w), fill)
    return Accumulator2D(counts=counts,
                         axis0=BinAxis(0.0, 1.0, h),
                         axis1=BinAxis(0.0, 1.0, w))


def locate_shape(acc: Accumulator2D,
                 params: GhtParams = GhtParams()) -> list[tuple[tuple[int, int], int]]:
    """Peak cells decoded to ((x, y), votes), best first."""
    votes_needed = effective_vote_threshold(acc, params.threshold,
                                            params.threshold_mode)
    peaks = find_peaks(acc, votes_needed, params.nms_radius)
    return [((p.i1, p.i0), p.votes) for p in peaks]


# --- text serialization -----------------------------------------------------

def rtable_to_text(rtable: RTable) -> str:
    """Line format: header `phi_bins N ref X Y`, then `bin dx dy` rows."""
    ref_x, ref_y = rtable.reference_point
    lines = [f"phi_bins {rtable.phi_bins} ref {ref_x} {ref_y}"]
    for b, vectors in enumerate(rtable.table):
        for dx, dy in vectors:
            lines.append(f"{b} {dx} {dy}")
    return "\n".join(lines) + "\n"


def rtable_from_text(text: str) -> RTable:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty shape table text")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "phi_bins" or head[2] != "ref":
        raise ValueError(f"bad shape table header: {lines[0]!r}")
    try:
        phi_bins = int(head[1])
        ref = (int(head[3]), int(head[4]))
    except ValueError:
        raise ValueError(f"bad shape table header: {lines[0]!r}") from None
    table: list[list[tuple[int, int]]] = [[] for _ in range(phi_bins)]
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"bad shape table row: {ln!r}")
        try:
            b, dx, dy = (int(p) for p in parts)
        except ValueError:
            raise ValueError(f"bad shape table row: {ln!r}") from None
        if not (0 <= b < phi_bins):
            raise ValueError(f"phase bin {b} outside [0, {phi_bins})")
        table[b].append((dx, dy))
    return RTable(phi_bins=phi_bins,
                  table=tuple(tuple(v) for v in table),
                  reference_point=ref)
