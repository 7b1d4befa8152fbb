import numpy as np
import pytest

import edgecraft as ec
from edgecraft.canny import (EDGE_NONE, EDGE_STRONG, EDGE_WEAK, CannyParams,
                             effective_thresholds)

import oracles
import synth


def field_from(gx, gy):
    return ec.GradientField.from_derivatives(np.asarray(gx, dtype=float),
                                             np.asarray(gy, dtype=float))


# --- non-maximum suppression -----------------------------------------------

def test_nms_zero_field_stays_zero():
    fld = field_from(np.zeros((4, 4)), np.zeros((4, 4)))
    assert np.all(ec.non_maximum_suppression(fld) == 0.0)


def test_nms_preserves_isolated_peak():
    gx = np.zeros((5, 5))
    gx[2, 2] = 0.8
    fld = field_from(gx, np.zeros((5, 5)))
    out = ec.non_maximum_suppression(fld)
    assert out[2, 2] == 0.8
    assert out.sum() == 0.8


def test_nms_row_profile_keeps_single_maximum():
    gx = np.array([[1.0, 2.0, 3.0, 2.0, 1.0]])
    fld = field_from(gx, np.zeros((1, 5)))
    out = ec.non_maximum_suppression(fld)
    # Interior pixels lose to a larger neighbor; borders compare against
    # an implicit 0 but still lose to their inner neighbor.
    assert np.array_equal(out, [[0.0, 0.0, 3.0, 0.0, 0.0]])


def test_nms_border_peak_survives_against_implicit_zero():
    gx = np.array([[3.0, 2.0, 1.0]])
    fld = field_from(gx, np.zeros((1, 3)))
    assert np.array_equal(ec.non_maximum_suppression(fld), [[3.0, 0.0, 0.0]])


def test_nms_plateau_tie_keeps_both():
    gx = np.array([[1.0, 2.0, 2.0, 1.0]])
    fld = field_from(gx, np.zeros((1, 4)))
    assert np.array_equal(ec.non_maximum_suppression(fld),
                          [[0.0, 2.0, 2.0, 0.0]])


def test_nms_matches_reference_on_random_fields(rng):
    for _ in range(10):
        fld = field_from(rng.normal(size=(9, 9)), rng.normal(size=(9, 9)))
        out = ec.non_maximum_suppression(fld)
        ref = oracles.nms_ref(fld.magnitude, fld.orientation)
        np.testing.assert_array_equal(out, ref)


def test_nms_diagonal_direction_uses_diagonal_neighbors():
    # gradient at 45 degrees: compare along (+1, +1) / (-1, -1)
    g = np.ones((5, 5))
    mag_pattern = np.zeros((5, 5))
    mag_pattern[2, 2] = 2.0
    mag_pattern[1, 1] = 3.0  # strictly larger neighbor along the diagonal
    gx = mag_pattern / np.sqrt(2)
    gy = mag_pattern / np.sqrt(2)
    gx[gx == 0] = g[gx == 0] * 1e-9 / np.sqrt(2)
    gy[gy == 0] = g[gy == 0] * 1e-9 / np.sqrt(2)
    fld = field_from(gx, gy)
    out = ec.non_maximum_suppression(fld)
    assert out[2, 2] == 0.0
    assert out[1, 1] > 0.0


# --- double threshold -------------------------------------------------------

def test_threshold_zero_plane_all_none():
    params = CannyParams(low=0.2, high=0.5, threshold_mode="absolute")
    classes = ec.double_threshold(np.zeros((4, 4)), params)
    assert np.all(classes == EDGE_NONE)


def test_threshold_absolute_partitions():
    plane = np.array([[0.1, 0.5, 0.9]])
    params = CannyParams(low=0.3, high=0.7, threshold_mode="absolute")
    classes = ec.double_threshold(plane, params)
    assert np.array_equal(classes, [[EDGE_NONE, EDGE_WEAK, EDGE_STRONG]])


def test_threshold_ratio_equals_scaled_absolute(rng):
    plane = np.abs(rng.normal(size=(8, 8)))
    ratio = CannyParams(low=0.1, high=0.3, threshold_mode="ratio")
    peak = plane.max()
    absolute = CannyParams(low=0.1 * peak, high=0.3 * peak,
                           threshold_mode="absolute")
    assert np.array_equal(ec.double_threshold(plane, ratio),
                          ec.double_threshold(plane, absolute))


def test_threshold_ratio_with_zero_peak_classifies_none():
    # A zero maximum would otherwise scale both cutoffs to 0 and promote
    # the whole plane to strong.
    params = CannyParams(low=0.1, high=0.3, threshold_mode="ratio")
    classes = ec.double_threshold(np.zeros((5, 5)), params)
    assert np.all(classes == EDGE_NONE)
    assert effective_thresholds(np.zeros((2, 2)), params) == (np.inf, np.inf)


def test_threshold_ordering_enforced():
    with pytest.raises(ValueError, match="low"):
        CannyParams(low=0.5, high=0.5)
    with pytest.raises(ValueError, match="low"):
        CannyParams(low=0.7, high=0.3)
    with pytest.raises(ValueError, match="low"):
        CannyParams(low=0.0, high=0.3)


# --- hysteresis -------------------------------------------------------------

def test_hysteresis_all_strong_all_set():
    classes = np.full((3, 4), EDGE_STRONG)
    assert np.all(ec.hysteresis(classes))


def test_hysteresis_lone_weak_cleared():
    classes = np.zeros((4, 4), dtype=np.uint8)
    classes[1, 2] = EDGE_WEAK
    assert not ec.hysteresis(classes).any()


def test_hysteresis_chain_follows_weak_pixels():
    classes = np.zeros((3, 6), dtype=np.uint8)
    classes[1, 0] = EDGE_STRONG
    classes[1, 1] = EDGE_WEAK
    classes[1, 2] = EDGE_WEAK
    classes[0, 5] = EDGE_WEAK  # isolated
    out = ec.hysteresis(classes)
    assert out[1, 0] and out[1, 1] and out[1, 2]
    assert not out[0, 5]
    np.testing.assert_array_equal(out, oracles.reachable_from_strong(classes))


def test_hysteresis_one_hop_stops_after_direct_neighbors():
    classes = np.zeros((3, 6), dtype=np.uint8)
    classes[1, 0] = EDGE_STRONG
    classes[1, 1] = EDGE_WEAK
    classes[1, 2] = EDGE_WEAK
    out = ec.hysteresis(classes, "one_hop")
    assert out[1, 0] and out[1, 1]
    assert not out[1, 2]


def test_hysteresis_matches_flood_oracle_on_random_maps(rng):
    for _ in range(10):
        classes = rng.integers(0, 3, size=(12, 12)).astype(np.uint8)
        np.testing.assert_array_equal(ec.hysteresis(classes),
                                      oracles.reachable_from_strong(classes))


# --- full pipeline ----------------------------------------------------------

def test_canny_constant_image_empty():
    for mode in ("ratio", "absolute"):
        params = CannyParams(sigma=1.0, low=0.1, high=0.3, threshold_mode=mode)
        assert not ec.canny(np.full((16, 16), 0.5), params).any()


def test_canny_step_gives_single_column():
    img = synth.step_image(64, 32)
    edges = ec.canny(img, CannyParams(sigma=1.0, low=0.1, high=0.3))
    assert np.array_equal(edges.sum(axis=1), np.ones(64))
    assert np.all(np.nonzero(edges)[1] == 32)


def test_canny_equals_stage_composition(rng):
    img = rng.random((24, 24))
    params = CannyParams(sigma=1.2, low=0.15, high=0.4)
    manual = ec.hysteresis(
        ec.double_threshold(
            ec.non_maximum_suppression(
                ec.first_order_gradient(ec.gaussian_blur(img, params.sigma),
                                        "sobel")),
            params),
        params.connectivity)
    np.testing.assert_array_equal(ec.canny(img, params), manual)


def test_canny_final_map_never_contains_none_pixels(rng):
    img = synth.noisy_constant(32, 0.5, 0.2, seed=7)
    params = CannyParams(sigma=1.0, low=0.1, high=0.25)
    blurred = ec.gaussian_blur(img, params.sigma)
    thin = ec.non_maximum_suppression(ec.first_order_gradient(blurred, "sobel"))
    classes = ec.double_threshold(thin, params)
    edges = ec.hysteresis(classes)
    assert not (edges & (classes == EDGE_NONE)).any()
    # every weak pixel in the final map is reachable from a strong one
    reachable = oracles.reachable_from_strong(classes)
    assert not (edges & ~reachable).any()


def test_canny_thinness_along_gradient_direction(rng):
    img = synth.noisy_constant(24, 0.5, 0.3, seed=3)
    fld = ec.first_order_gradient(ec.gaussian_blur(img, 1.0), "sobel")
    thin = ec.non_maximum_suppression(fld)
    steps = ((1, 0), (1, 1), (0, 1), (-1, 1))
    bins = np.rint(np.mod(fld.orientation, np.pi) / (np.pi / 4)).astype(int) % 4
    h, w = thin.shape
    for y, x in np.argwhere(thin > 0):
        dx, dy = steps[bins[y, x]]
        greater_set_neighbors = 0
        for sx, sy in ((dx, dy), (-dx, -dy)):
            nx, ny = x + sx, y + sy
            if 0 <= nx < w and 0 <= ny < h and thin[ny, nx] > 0 \
                    and fld.magnitude[ny, nx] > fld.magnitude[y, x]:
                greater_set_neighbors += 1
        assert greater_set_neighbors <= 1


def test_canny_raising_high_never_adds_pixels():
    img = synth.noisy_constant(32, 0.5, 0.3, seed=11)
    maps = []
    for high in (0.2, 0.3, 0.5, 0.7):
        params = CannyParams(sigma=1.0, low=0.1, high=high,
                             threshold_mode="ratio")
        maps.append(ec.canny(img, params))
    for looser, tighter in zip(maps, maps[1:]):
        assert not (tighter & ~looser).any()
