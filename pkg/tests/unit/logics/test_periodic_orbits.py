# coding: utf-8 -*-
"""Tests for the square_billiard.logics.periodic_orbits module."""

import math

import pytest

from square_billiard.exceptions import DomainError, ItineraryError
from square_billiard.logics.core_maps import reduced_map
from square_billiard.logics.invariant_structures import h_lambda, s_lambda, theta_lambda
from square_billiard.logics.periodic_orbits import (
    cn_threshold,
    compose_f2n_f1m,
    fixed_point_p,
    gamma,
    lifted_period,
    p_candidate,
    period2_orbit,
    periodic_stable_curve,
    periodic_stable_graph,
    q_candidate,
    search_fixed_points,
    sequences,
    solve_pn,
    solve_qn,
    unstable_extent,
    verify_cycle,
)
from square_billiard.models.orbit import OrbitNonexistence, PeriodicOrbitRecord
from square_billiard.models.points import ReducedPoint
from tests.lib.dataset import ACCEPT_TOL, C1_REFERENCE, LAMBDA1_REFERENCE, reduced_points


def _itinerary(point: ReducedPoint, lam: float, steps: int):
    digits, images = [], [point]
    for _ in range(steps):
        step = reduced_map(images[-1], lam)
        digits.append("1" if step.branch == "Reduced_M1" else "2")
        images.append(step.image)
    return "".join(digits), images


def _closes(record: PeriodicOrbitRecord, tol: float = 1e-9) -> bool:
    word, images = _itinerary(record.points[0], record.lam, record.period)
    return word == record.itinerary and max(
        abs(images[-1].s - record.points[0].s), abs(images[-1].theta - record.points[0].theta)
    ) < tol


def test_sequences_start_values():
    bundle = sequences(0.3, 0.7, 4)
    assert bundle.h[0] == 1.0
    assert bundle.gamma[0] == 1.0
    assert bundle.partial_sums[0] == pytest.approx(math.tan(0.3))
    assert bundle.h[1] == pytest.approx(1.0 - math.tan(0.3))
    assert bundle.gamma[1] == pytest.approx(1.0 / math.tan(0.3))
    assert len(bundle.h) == 5


def test_partial_stable_sums_converge():
    lam, theta = 0.6, 0.5
    assert sequences(theta, lam, 120).h[-1] == pytest.approx(h_lambda(theta, lam).value, abs=1e-10)


@pytest.mark.parametrize("n, m", [(0, 2), (1, 0), (1, 1), (2, 1), (3, 2), (4, 0)])
def test_closed_form_composition_matches_iteration(n, m):
    lam = 0.75
    s, theta = reduced_points(20_000, seed=101 + 10 * n + m)
    compared = 0
    for s0, t0 in zip(s.tolist(), theta.tolist()):
        point = ReducedPoint(s=s0, theta=t0)
        word, images = _itinerary(point, lam, n + m)
        if word != "1" * m + "2" * n or gamma(lam**m * t0, lam, n) >= 1e3:
            continue
        closed = compose_f2n_f1m(s0, t0, lam, n, m, validate=True)
        assert abs(closed.s - images[-1].s) < 1e-9
        assert abs(closed.theta - images[-1].theta) < 1e-12
        compared += 1
    assert compared > 0


def test_composition_validation_detects_wrong_branch():
    with pytest.raises(ItineraryError) as error:
        compose_f2n_f1m(0.9, 1.0, 0.6, 1, 1, validate=True)
    assert error.value.step == 0
    assert (error.value.expected, error.value.found) == ("1", "2")


def test_composition_rejects_negative_counts():
    with pytest.raises(DomainError):
        compose_f2n_f1m(0.5, 0.2, 0.6, -1, 0)


@pytest.mark.parametrize("lam", [0.3, 0.6218, 0.8736, 0.95])
def test_fixed_point(lam):
    record = fixed_point_p(lam)
    assert record.itinerary == "2"
    assert record.points[0].s == pytest.approx(s_lambda(lam), abs=1e-14)
    assert record.points[0].theta == pytest.approx(theta_lambda(lam), abs=1e-15)
    assert record.residual < 1e-11
    assert record.stability is not None and record.stability.kind == "Hyperbolic"


def test_fixed_point_lifts_to_period_four():
    assert lifted_period(fixed_point_p(0.75)) == 4


def test_perpendicular_bounce():
    record = period2_orbit(0.3, 0.7)
    assert record.stability is not None and record.stability.kind == "Parabolic"
    assert lifted_period(record) == 2


def test_only_one_fixed_point_in_m2():
    lam = 0.75
    found = search_fixed_points(lam, n_seeds=200, seed=4)
    assert len(found) == 1
    assert found[0][0] == pytest.approx(s_lambda(lam), abs=1e-9)
    assert found[0][1] == pytest.approx(theta_lambda(lam), abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_q_family_exists_below_threshold(n):
    lam = 0.6
    record = solve_qn(n, lam)
    assert isinstance(record, PeriodicOrbitRecord)
    assert record.itinerary == "1" * n + "22"
    assert record.period == n + 2
    assert record.points[0].as_tuple() == pytest.approx(q_candidate(n, lam), abs=1e-14)
    assert _closes(record)
    assert lifted_period(record) in (n + 2, 2 * (n + 2), 4 * (n + 2), 8 * (n + 2))


def test_q_family_missing_above_threshold():
    result = solve_qn(1, 0.85)
    assert isinstance(result, OrbitNonexistence)
    assert result.family == "Q_family"
    assert result.n == 1
    assert result.reason


def test_q_zero_is_fixed_point():
    assert solve_qn(0, 0.7) == fixed_point_p(0.7)
    with pytest.raises(DomainError):
        solve_qn(-1, 0.7)


def test_p_family_records_close():
    for lam in (0.6, 0.75, 0.9):
        for n in (1, 2, 3):
            result = solve_pn(n, lam)
            if isinstance(result, OrbitNonexistence):
                continue
            assert result.itinerary == "1" + "2" * (2 * n - 1)
            assert result.points[0].as_tuple() == pytest.approx(p_candidate(n, lam), abs=1e-14)
            assert _closes(result)
    with pytest.raises(DomainError):
        solve_pn(0, 0.75)


def test_first_threshold():
    assert cn_threshold(1) == pytest.approx(C1_REFERENCE, abs=ACCEPT_TOL)


def test_thresholds_decrease():
    values = [cn_threshold(n) for n in range(1, 41)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(value > LAMBDA1_REFERENCE - ACCEPT_TOL for value in values)


def test_stable_graph_of_q_zero_is_h():
    lam = 0.7
    for theta in (0.4, 0.55, 0.65, 0.8):
        assert periodic_stable_graph(theta, lam, 0).value == pytest.approx(h_lambda(theta, lam).value, abs=1e-10)


def test_stable_graph_passes_through_q():
    lam = 0.6
    s_m, theta_m = q_candidate(1, lam)
    assert periodic_stable_graph(theta_m, lam, 1).value == pytest.approx(s_m, abs=1e-10)


def test_stable_curve_of_q():
    curve = periodic_stable_curve(0.6, 1, n_points=64)
    assert curve.kind == "PeriodicStable"
    assert curve.depth == 1
    assert all(0.0 < value < 1.0 for value in curve.values)


def test_unstable_extent():
    lam = 0.6
    assert unstable_extent(0.3, 0.25 * math.pi * lam + 0.01, lam) == 1.0
    assert unstable_extent(0.3, 0.25 * math.pi * lam - 0.01, lam) == 0.3


def test_verify_cycle_reports_branch_mismatch():
    outcome = verify_cycle(0.5, 1.2, "1", 0.6)
    assert outcome[0] == 0
    assert "f2" in outcome[1]


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13])
def test_q_family_switches_at_its_threshold(n):
    c_n = cn_threshold(n)
    assert isinstance(solve_qn(n, c_n - 1e-4), PeriodicOrbitRecord)
    assert isinstance(solve_qn(n, c_n + 1e-4), OrbitNonexistence)


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.6, 0.62])
def test_q_family_closes_up_to_high_periods(lam):
    for n in range(1, 41):
        if lam >= cn_threshold(n):
            continue
        result = solve_qn(n, lam)
        s_n, theta_n = q_candidate(n, lam)
        # the cycle grazes S+ at distance ~ s_n λⁿ θ_n, below tol_sing for large n
        if s_n * lam**n * theta_n >= 1e-9:
            assert isinstance(result, PeriodicOrbitRecord), f"q_{n} at λ={lam}: {getattr(result, 'reason', '')}"
            assert result.residual < 1e-11
        if isinstance(result, OrbitNonexistence):
            assert not result.reason.startswith("closure residual")


def test_closure_residual_is_not_amplified_near_the_corner():
    lam, n = 0.6, 30
    s_n, theta_n = q_candidate(n, lam)
    points, residual = verify_cycle(s_n, theta_n, "1" * n + "22", lam)
    assert len(points) == n + 2
    assert residual < 1e-13


def test_eigenvalue_tolerance_sets_the_label():
    assert solve_qn(1, 0.6).stability.kind == "Hyperbolic"
    assert solve_qn(1, 0.6, tol_eig=1e9).stability.kind == "Parabolic"
    for lam in (0.6, 0.75, 0.9):
        result = solve_pn(1, lam, tol_eig=1e9)
        if isinstance(result, PeriodicOrbitRecord):
            assert result.stability.kind == "Parabolic"
    assert fixed_point_p(0.75, tol_eig=1e9).stability.kind == "Parabolic"
