# coding: utf-8 -*-
"""Tests for the square_billiard.logics.linearization module."""

import math

import numpy as np
import pytest
from numpy.random import default_rng

from square_billiard.exceptions import OrbitDeathError, SingularPointError, UnverifiedOrbitError
from square_billiard.logics.core_maps import full_map, reduced_map
from square_billiard.logics.explorer import sample_attractor
from square_billiard.logics.invariant_structures import theta_lambda
from square_billiard.logics.linearization import (
    alpha_zeta_direct,
    classify_periodic,
    cocycle,
    lyapunov,
    lyapunov_grid,
    step_jacobian,
)
from square_billiard.logics.periodic_orbits import fixed_point_p, period2_orbit, solve_pn, solve_qn
from square_billiard.models.orbit import PeriodicOrbitRecord
from square_billiard.models.points import FullPoint, ReducedPoint
from tests.lib.dataset import LAMBDAS

FD_STEP = 1e-6


def _safe_reduced(count: int, seed: int):
    """Reduced points at least 1e-3 away from S⁺ with θ in [0.05, π/2 - 0.05]."""
    rng = default_rng(seed)
    points = []
    while len(points) < count:
        s = 0.01 + 0.98 * rng.random()
        theta = 0.05 + (math.pi / 2 - 0.1) * rng.random()
        if abs(s + math.tan(theta) - 1.0) > 1e-3:
            points.append((s, theta))
    return points


def _wrapped(a: float, b: float) -> float:
    return (a - b + 2.0) % 4.0 - 2.0


def _reduced_fd(s: float, theta: float, lam: float) -> np.ndarray:
    def image(x: float, t: float) -> np.ndarray:
        return np.array(reduced_map(ReducedPoint(s=x, theta=t), lam).image.as_tuple())

    d_s = (image(s + FD_STEP, theta) - image(s - FD_STEP, theta)) / (2 * FD_STEP)
    d_theta = (image(s, theta + FD_STEP) - image(s, theta - FD_STEP)) / (2 * FD_STEP)
    return np.column_stack([d_s, d_theta])


@pytest.mark.parametrize("lam", LAMBDAS)
def test_reduced_jacobian_matches_finite_differences(lam):
    for s, theta in _safe_reduced(200, seed=31):
        analytic = step_jacobian(ReducedPoint(s=s, theta=theta), lam).as_array()
        np.testing.assert_allclose(analytic, _reduced_fd(s, theta, lam), rtol=1e-5, atol=1e-6)


def test_full_jacobian_matches_finite_differences():
    lam = 0.75
    rng = default_rng(37)
    checked = 0
    while checked < 200:
        s = 4.0 * rng.random()
        theta = (math.pi / 2 - 0.05) * (2.0 * rng.random() - 1.0)
        x = s - math.floor(s)
        reach = x + math.tan(theta)
        if min(x, 1.0 - x, abs(theta), abs(reach), abs(reach - 1.0)) < 1e-3:
            continue
        checked += 1

        def column(ds: float, dt: float) -> np.ndarray:
            plus = full_map(FullPoint(s=(s + ds) % 4.0, theta=theta + dt), lam).image
            minus = full_map(FullPoint(s=(s - ds) % 4.0, theta=theta - dt), lam).image
            return np.array([_wrapped(plus.s, minus.s), plus.theta - minus.theta]) / (2 * FD_STEP)

        numeric = np.column_stack([column(FD_STEP, 0.0), column(0.0, FD_STEP)])
        analytic = step_jacobian(FullPoint(s=s, theta=theta), lam).as_array()
        np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-6)


def test_full_jacobian_reverses_orientation():
    jacobian = step_jacobian(FullPoint(s=0.5, theta=0.2), 0.6)
    assert jacobian.sign == -1
    assert np.linalg.det(jacobian.as_array()) == pytest.approx(jacobian.det)


def test_cocycle_is_product_of_steps():
    lam = 0.6218
    start = ReducedPoint(s=0.35, theta=0.9)
    total = cocycle(start, lam, 6)
    expected = np.eye(2)
    point = start
    for _ in range(6):
        expected = step_jacobian(point, lam).as_array() @ expected
        point = reduced_map(point, lam).image
    np.testing.assert_allclose(total.as_array(), expected, rtol=1e-12)
    assert total.steps == 6


@pytest.mark.parametrize("n", [1, 4, 9])
def test_cocycle_contracts_angle_exactly(n):
    lam = 0.8736
    total = cocycle(ReducedPoint(s=0.2, theta=0.7), lam, n)
    assert total.a22 == pytest.approx(lam**n, rel=1e-14)


def test_cocycle_at_fixed_point():
    lam = 0.75
    record = fixed_point_p(lam)
    total = cocycle(record.points[0], lam, 4)
    assert total.a11 == pytest.approx(1.0 / math.tan(theta_lambda(lam)) ** 4, rel=1e-6)
    assert total.sign == 1


def test_direct_sums_match_cocycle():
    lam = 0.6
    for s, theta in _safe_reduced(50, seed=41):
        point = ReducedPoint(s=s, theta=theta)
        try:
            total = cocycle(point, lam, 5)
        except SingularPointError:
            continue
        alpha, zeta = alpha_zeta_direct(point, lam, 5)
        assert alpha == pytest.approx(total.a11, rel=1e-10)
        assert zeta == pytest.approx(total.a12, rel=1e-10)


def test_cocycle_reports_singular_step():
    lam, theta0 = 0.5, 0.2
    s0 = 1.0 - math.tan(theta0) - math.tan(lam * theta0)
    with pytest.raises(SingularPointError) as error:
        cocycle(ReducedPoint(s=s0, theta=theta0), lam, 3)
    assert error.value.step == 1


def test_cocycle_rejects_zero_steps():
    with pytest.raises(ValueError):
        cocycle(ReducedPoint(s=0.3, theta=0.2), 0.5, 0)


def test_classify_fixed_point_hyperbolic():
    lam = 0.75
    record = fixed_point_p(lam)
    stability = classify_periodic(record)
    assert stability.kind == "Hyperbolic"
    assert stability.alpha == pytest.approx(1.0 / math.tan(theta_lambda(lam)))
    assert stability.beta == pytest.approx(lam)


def test_classify_parabolic_line():
    stability = classify_periodic(period2_orbit(0.4, 0.7))
    assert stability.kind == "Parabolic"
    assert stability.alpha == pytest.approx(1.0)
    assert stability.beta == pytest.approx(0.49)


def test_classify_rejects_unverified():
    point = ReducedPoint(s=0.4, theta=0.0)
    record = PeriodicOrbitRecord(family="P_line", lam=0.5, points=[point], period=1, itinerary="1", residual=1e-6)
    with pytest.raises(UnverifiedOrbitError):
        classify_periodic(record)


def test_lyapunov_parabolic_line():
    first, second = lyapunov(ReducedPoint(s=0.3, theta=0.0), 0.6, 100)
    assert first == 0.0
    assert second == pytest.approx(math.log(0.6))


def test_lyapunov_dying_orbit():
    lam, theta0 = 0.5, 0.2
    s0 = 1.0 - math.tan(theta0) - math.tan(lam * theta0)
    with pytest.raises(OrbitDeathError) as error:
        lyapunov(ReducedPoint(s=s0, theta=theta0), lam, 50)
    assert error.value.step == 1
    assert error.value.partial == (0.0, math.log(lam))


def test_lyapunov_grid_keeps_order():
    lam, theta0 = 0.5, 0.2
    dying = ReducedPoint(s=1.0 - math.tan(theta0) - math.tan(lam * theta0), theta=theta0)
    results = lyapunov_grid([ReducedPoint(s=0.3, theta=0.0), dying], lam, 20)
    assert results[0] == (0.0, math.log(lam))
    assert results[1] is None


def test_solved_periodic_orbits_are_hyperbolic_across_lambda():
    solved = 0
    for lam in np.linspace(0.01, 0.99, 100).tolist():
        results = [fixed_point_p(lam)]
        results += [solve_qn(n, lam) for n in range(1, 11)]
        results += [solve_pn(n, lam) for n in range(1, 11)]
        for result in results:
            if not isinstance(result, PeriodicOrbitRecord):
                continue
            solved += 1
            assert result.stability is not None
            assert result.stability.kind == "Hyperbolic", f"{result.family} n={result.n} at λ={lam}"
            assert result.stability.alpha > 1.0
            assert result.stability.beta == pytest.approx(lam**result.period)
    assert solved > 100


def test_lyapunov_exponent_is_positive_on_the_attractor():
    lam = 0.75
    sample = sample_attractor(lam, n_initial=100, n_iter=1, transient=1_000, seed=5)
    assert not sample.empty
    starts = [ReducedPoint(s=s, theta=theta) for s, theta in zip(sample.s[:10].tolist(), sample.theta[:10].tolist())]
    estimates = [estimate for estimate in lyapunov_grid(starts, lam, 5_000) if estimate is not None]
    assert estimates
    for upper, lower in estimates:
        assert upper > 0.0
        assert lower == pytest.approx(math.log(lam))
