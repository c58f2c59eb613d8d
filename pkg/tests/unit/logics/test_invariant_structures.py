# coding: utf-8 -*-
"""Tests for the square_billiard.logics.invariant_structures module."""

import math

import numpy as np
import pytest
from numpy.random import default_rng

from square_billiard.exceptions import DomainError, InterpolationRangeError
from square_billiard.logics.bifurcation import solve_lambda2
from square_billiard.logics.core_maps import reduced_map_array
from square_billiard.logics.invariant_structures import (
    SigmaTable,
    delta_membership,
    delta_trapping_check,
    g_contract,
    g_power,
    graph_transform,
    graph_transform_function,
    h_lambda,
    h_lambda_values,
    h_prime_fixed_point,
    homoclinic_test,
    in_b,
    s_infinity_curve,
    s_lambda,
    sigma_curve,
    sigma_partial,
    sigma_values,
    sigma_zero,
    singular_preimages,
    stable_manifold_curve,
    stable_manifold_interval,
    theta_lambda,
    unstable_segments,
    zero_curve,
)
from square_billiard.models.curves import Curve


@pytest.mark.parametrize("lam", [0.3, 0.6218, 0.8736])
def test_stable_graph_passes_through_fixed_point(lam):
    evaluation = h_lambda(theta_lambda(lam), lam)
    assert evaluation.value == pytest.approx(s_lambda(lam), abs=1e-12)
    assert evaluation.tail_bound < 1e-13


def test_g_power_matches_iteration():
    lam, theta = 0.7, 0.3
    x = theta
    for k in range(1, 6):
        x = g_contract(x, lam)
        assert g_power(theta, k, lam) == pytest.approx(x, abs=1e-15)


@pytest.mark.parametrize("lam", [0.6, 0.75])
def test_stable_graph_is_graph_transform_fixed_point(lam):
    curve = stable_manifold_curve(lam, n_points=2048)
    grid = np.asarray(curve.grid)
    transformed = graph_transform_function(lambda t: h_lambda_values(t, lam), lam)(grid)
    np.testing.assert_allclose(transformed, curve.values, rtol=0.0, atol=1e-10)


def test_vectorized_stable_graph_matches_scalar():
    lam = 0.8
    grid = np.linspace(0.05, 1.2, 40)
    scalar = [h_lambda(t, lam).value for t in grid.tolist()]
    np.testing.assert_allclose(h_lambda_values(grid, lam), scalar, rtol=0.0, atol=1e-12)


@pytest.mark.parametrize("lam", [0.5, 0.8])
def test_stable_graph_slope_at_fixed_point(lam):
    fixed, step = theta_lambda(lam), 1e-6
    numeric = (h_lambda(fixed + step, lam).value - h_lambda(fixed - step, lam).value) / (2 * step)
    assert numeric == pytest.approx(h_prime_fixed_point(lam), rel=1e-5)


def test_stable_graph_rejects_bad_angle():
    with pytest.raises(DomainError):
        h_lambda(math.pi / 2, 0.5)
    with pytest.raises(DomainError):
        h_lambda_values(np.array([-0.1]), 0.5)


def test_stable_interval_keeps_graph_inside():
    lam = 0.75
    low, high = stable_manifold_interval(lam)
    assert low < theta_lambda(lam) < high
    curve = stable_manifold_curve(lam, n_points=256)
    assert all(0.0 < value < 1.0 for value in curve.values)


def test_graph_transform_from_zero_converges():
    lam = 0.6
    curve = zero_curve(2048)
    for _ in range(80):
        curve = graph_transform(curve, lam)
    assert curve.depth == 80
    grid = np.asarray(curve.grid)
    near = np.abs(grid - theta_lambda(lam)) < 0.1
    np.testing.assert_allclose(np.asarray(curve.values)[near], h_lambda_values(grid[near], lam), atol=1e-6)


def test_graph_transform_rejects_short_grid():
    curve = Curve(kind="GraphTransform", grid=[0.5, 0.6, 0.7], values=[0.0, 0.0, 0.0], depth=0)
    with pytest.raises(InterpolationRangeError):
        graph_transform(curve, 0.5)


def test_sigma_matches_direct_sum():
    lam = 0.75
    for theta in (0.0, 0.05, 0.1, 0.2):
        expected = 1.0 - float(np.tan(theta * lam ** np.arange(400)).sum())
        evaluation = sigma_curve(theta, lam)
        assert evaluation.value == pytest.approx(expected, abs=1e-12)
        assert evaluation.inside == (expected > 0.0)


def test_sigma_partials_decrease_to_sigma():
    lam = 0.6
    theta = np.linspace(0.01, 0.3, 30)
    sigma = sigma_values(theta, lam)
    assert sigma_partial(0.2, lam, 0) == 1.0
    previous = np.ones_like(theta)
    for n in range(1, 12):
        current = sigma_partial(theta, lam, n)
        assert np.all(current < previous)
        assert np.all(current > sigma)
        previous = current
    np.testing.assert_allclose(sigma_partial(theta, lam, 200), sigma, atol=1e-12)


def test_s_infinity_reaches_left_edge():
    lam = 0.8
    zero = sigma_zero(lam)
    assert sigma_curve(zero, lam).value == pytest.approx(0.0, abs=1e-12)
    curve = s_infinity_curve(lam, n_points=64)
    assert curve.values[0] == pytest.approx(1.0)
    assert curve.grid[-1] == pytest.approx(zero)


def test_sigma_table_matches_exact_membership():
    lam = 0.75
    table = SigmaTable(lam)
    rng = default_rng(5)
    s = rng.random(2000)
    theta = 0.6 * rng.random(2000)
    expected = [in_b(a, b, lam) for a, b in zip(s.tolist(), theta.tolist())]
    np.testing.assert_array_equal(table.in_b(s, theta), expected)


def test_b_flows_to_parabolic_line():
    lam = 0.75
    s, theta = 0.1, 0.05
    assert in_b(s, theta, lam)
    code = None
    for _ in range(200):
        s_arr, theta_arr, code = reduced_map_array(np.array([s]), np.array([theta]), lam)
        s, theta = float(s_arr[0]), float(theta_arr[0])
    assert code[0] == 1
    assert theta < 1e-20


def test_delta_membership_sectors():
    lam = 0.75
    fixed = theta_lambda(lam)
    below = fixed - 0.05
    above = fixed + 0.05
    assert delta_membership(h_lambda(below, lam).value + 0.05, below, lam)
    assert not delta_membership(h_lambda(below, lam).value - 0.05, below, lam)
    assert delta_membership(h_lambda(above, lam).value - 0.05, above, lam)
    assert not delta_membership(h_lambda(above, lam).value + 0.05, above, lam)


def test_delta_is_trapping_above_homoclinic_threshold():
    report = delta_trapping_check(0.9, 20_000, seed=3)
    assert report.n_samples == 20_000
    assert report.fraction == pytest.approx(1.0, abs=1e-4)


def test_delta_is_not_trapping_below_threshold():
    report = delta_trapping_check(0.7, 20_000, seed=3)
    assert report.fraction < 1.0


@pytest.mark.parametrize("lam, expected", [(0.8, True), (0.9, False)])
def test_homoclinic_test(lam, expected):
    verdict, first, second = homoclinic_test(lam)
    assert verdict is expected
    assert (first > 0.0 and second > 0.0) is expected


def test_homoclinic_transition_is_at_lambda2():
    lambda2 = solve_lambda2()
    checked = 0
    for lam in np.linspace(0.01, 0.99, 100).tolist():
        if abs(lam - lambda2) <= 2e-3:
            continue
        assert homoclinic_test(lam)[0] is (lam < lambda2), f"λ={lam}"
        checked += 1
    assert checked >= 99


def test_unstable_segments_first_images():
    lam = 0.75
    fixed = theta_lambda(lam)
    family = unstable_segments(lam, 1)
    assert len(family.at_depth(0)) == 1
    first = sorted((curve.values[0], curve.grid) for curve in family.at_depth(1))
    assert len(first) == 2
    assert first[0][0] == pytest.approx(lam * fixed)
    assert first[0][1] == pytest.approx([math.tan(fixed), 1.0])
    assert first[1][0] == pytest.approx(fixed)
    assert first[1][1] == pytest.approx([0.0, 1.0])


def test_unstable_segments_stay_inside():
    family = unstable_segments(0.8736, 6)
    for curve in family.curves:
        assert curve.is_horizontal
        assert 0.0 <= curve.grid[0] < curve.grid[1] <= 1.0 + 1e-12


def test_unstable_segments_depth_bounds():
    with pytest.raises(DomainError):
        unstable_segments(0.75, -1)
    with pytest.raises(DomainError):
        unstable_segments(0.75, 13)


def test_singular_preimages_map_onto_singular_line():
    lam = 0.75
    curves = singular_preimages(lam, 1, n_points=256)
    assert curves
    for curve in curves:
        assert curve.depth == 1
        s_img, theta_img, _ = reduced_map_array(np.asarray(curve.values), np.asarray(curve.grid), lam)
        np.testing.assert_allclose(s_img + np.tan(theta_img), 1.0, atol=1e-9)


def test_deeper_singular_preimages():
    curves = singular_preimages(0.75, 3, n_points=256)
    assert {curve.depth for curve in curves} <= {1, 2, 3}
    assert any(curve.depth == 2 for curve in curves)
