#!/usr/bin/python
# coding: utf-8 -*-
# pylint: disable=too-many-arguments
"""Periodic orbits of the reduced map.

The module builds closed-form candidates for the hyperbolic fixed point
``p_λ`` and for the two families

- ``q_n``: fixed points of ``f2² ∘ f1ⁿ`` (itinerary ``1ⁿ22``, period n+2),
- ``p_n``: fixed points of ``f2^(2n-1) ∘ f1`` (itinerary ``12^(2n-1)``, period 2n),

and accepts a candidate only after walking its itinerary point by point.
They rely on the finite sequences::

    h_n(θ) = Σ_{i≤n} (-1)ⁱ Π_{j<i} tan(gʲθ)
    γ_n(θ) = Π_{i<n} cot(gⁱθ)
    S_n(θ) = Σ_{i≤n} tan(λⁱθ)            (S_{-1} = 0)

with which ``f2ⁿ ∘ f1ᵐ(s, θ) = ((-1)ⁿ⁻¹ [h_{n-1}(λᵐθ) - s - S_{m-1}(θ)] γ_n(λᵐθ), gⁿ(λᵐθ))``.

A candidate that fails validation is returned as an ``OrbitNonexistence``
record; nonexistence is an answer, not an error.
"""

from __future__ import annotations

import math
from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from numpy.random import default_rng
from scipy.optimize import brentq, root

from square_billiard.defaults import (
    CN_BRACKET,
    CURVE_GRID,
    FIXED_POINT_SEEDS,
    HALF_PI,
    ROOT_MAXITER,
    ROOT_XTOL,
    SEED,
    SERIES_MAX_TERMS,
    TOL_EIG,
    TOL_FIX,
    TOL_SERIES,
    TOL_SING,
)
from square_billiard.exceptions import BracketError, DomainError, ItineraryError, SeriesConvergenceError, SingularPointError
from square_billiard.logics.core_maps import circular_distance, full_step, lift, reduced_step, validate_lambda
from square_billiard.logics.invariant_structures import g_power, theta_lambda
from square_billiard.logics.linearization import classify_periodic
from square_billiard.models.curves import Curve, SeriesEval
from square_billiard.models.orbit import OrbitNonexistence, PeriodicOrbitRecord, SequenceBundle
from square_billiard.models.points import ReducedPoint
from square_billiard.models.reports import SolverMeta
from square_billiard.models.types import Family

OrbitResult = Union[PeriodicOrbitRecord, OrbitNonexistence]

_BRANCH_DIGIT = {"Reduced_M1": "1", "Reduced_M2": "2"}


# ---------------------------------------------------------------------------
# Sequences
# ---------------------------------------------------------------------------


def partial_sum(theta: float, lam: float, n: int) -> float:
    """``S_n(θ) = Σ_{i≤n} tan(λⁱθ)``, zero for ``n < 0``."""
    if n < 0:
        return 0.0
    return float(np.tan(theta * lam ** np.arange(n + 1)).sum())


def h_partial(theta: float, lam: float, n: int) -> float:
    """``h_n(θ)``: partial sum of the stable manifold series."""
    total, product, sign, x = 1.0, 1.0, 1.0, theta
    for _ in range(n):
        product *= math.tan(x)
        sign = -sign
        total += sign * product
        x = lam * (HALF_PI - x)
    return total


def gamma(theta: float, lam: float, n: int) -> float:
    """``γ_n(θ) = Π_{i<n} cot(gⁱθ)``; ``γ_0 = 1``."""
    total, x = 1.0, theta
    for _ in range(n):
        total /= math.tan(x)
        x = lam * (HALF_PI - x)
    return total


def sequences(theta: float, lam: float, n: int) -> SequenceBundle:
    """Values of ``h_k``, ``γ_k`` and ``S_k`` at θ for ``k = 0..n``."""
    lam = validate_lambda(lam)
    return SequenceBundle(
        theta=theta,
        lam=lam,
        n=n,
        h=[h_partial(theta, lam, k) for k in range(n + 1)],
        gamma=[gamma(theta, lam, k) for k in range(n + 1)],
        partial_sums=[partial_sum(theta, lam, k) for k in range(n + 1)],
    )


# ---------------------------------------------------------------------------
# Closed-form compositions
# ---------------------------------------------------------------------------


def compose_f2n_f1m(
    s: float, theta: float, lam: float, n: int, m: int, validate: bool = False, tol_sing: float = TOL_SING
) -> ReducedPoint:
    """Evaluate ``f2ⁿ ∘ f1ᵐ(s, θ)`` in closed form.

    Parameters
    ----------
    validate : bool
        Walk the orbit with the exact map first and check that it follows
        ``1ᵐ2ⁿ``.

    Raises
    ------
    ItineraryError
        When ``validate`` is set and the orbit leaves the declared branches.
    """
    lam = validate_lambda(lam)
    if n < 0 or m < 0:
        raise DomainError("n and m must be non-negative")
    if validate:
        word = "1" * m + "2" * n
        x, t = s, theta
        for k, expected in enumerate(word):
            try:
                x, t, branch, _, _ = reduced_step(x, t, lam, tol_sing)
            except SingularPointError as error:
                raise ItineraryError(f"orbit reaches S+ at step {k}", step=k, expected=expected, found="S+") from error
            if _BRANCH_DIGIT[branch] != expected:
                raise ItineraryError(
                    f"step {k} uses f{_BRANCH_DIGIT[branch]} instead of f{expected}",
                    step=k,
                    expected=expected,
                    found=_BRANCH_DIGIT[branch],
                )
    shifted = lam**m * theta
    position = s + partial_sum(theta, lam, m - 1)
    if n == 0:
        return ReducedPoint(s=position, theta=shifted)
    value = (-1) ** (n - 1) * (h_partial(shifted, lam, n - 1) - position) * gamma(shifted, lam, n)
    return ReducedPoint(s=value, theta=float(g_power(shifted, n, lam)))


# ---------------------------------------------------------------------------
# Orbit validation
# ---------------------------------------------------------------------------


def _position_before(following: float, theta: float, digit: str) -> float:
    """Position mapped onto ``following`` by the branch ``digit`` from angle ``theta``."""
    return following - math.tan(theta) if digit == "1" else 1.0 - following * math.tan(theta)


def verify_cycle(
    s0: float, theta0: float, itinerary: str, lam: float, tol_sing: float = TOL_SING
) -> Union[Tuple[List[ReducedPoint], float], Tuple[int, str]]:
    """Build and check the cycle through ``(s0, θ0)`` with the given itinerary.

    Angles are generated forward (the angle dynamics contracts) and
    positions backward from ``s0`` (the position dynamics expands), so
    round-off is not amplified around an unstable cycle.

    Returns
    -------
    Tuple[List[ReducedPoint], float] | Tuple[int, str]
        The cycle and its residual; or the failing step and a reason.
        The residual is the largest one-step defect, measured forward on
        the angle and through the inverse of the declared branch on the
        position. The forward f2 step multiplies a position error by
        ``cot θ``, which is unbounded along the ``q_n`` family.
    """
    period = len(itinerary)
    thetas = [theta0]
    for digit in itinerary[:-1]:
        thetas.append(lam * thetas[-1] if digit == "1" else lam * (HALF_PI - thetas[-1]))
    positions = [0.0] * period
    following = s0
    for k in range(period - 1, 0, -1):
        following = _position_before(following, thetas[k], itinerary[k])
        positions[k] = following
    positions[0] = s0
    points: List[ReducedPoint] = []
    residual = 0.0
    for k in range(period):
        s, t = positions[k], thetas[k]
        if not (0.0 < s < 1.0 and 0.0 <= t < HALF_PI):
            return k, f"point {k} = ({s:.17g}, {t:.17g}) is outside the reduced phase space"
        try:
            _, t1, branch, _, _ = reduced_step(s, t, lam, tol_sing)
        except SingularPointError:
            return k, f"point {k} lies on S+"
        if _BRANCH_DIGIT[branch] != itinerary[k]:
            return k, f"point {k} is mapped by f{_BRANCH_DIGIT[branch]}, itinerary requires f{itinerary[k]}"
        nxt = (k + 1) % period
        residual = max(residual, abs(_position_before(positions[nxt], t, itinerary[k]) - s), abs(t1 - thetas[nxt]))
        points.append(ReducedPoint(s=s, theta=t))
    return points, residual


def _record(
    family: Family,
    n: Optional[int],
    lam: float,
    s0: float,
    theta0: float,
    itinerary: str,
    tol_fix: float,
    tol_sing: float,
    tol_eig: float = TOL_EIG,
) -> OrbitResult:
    outcome = verify_cycle(s0, theta0, itinerary, lam, tol_sing)
    index = -1 if n is None else n
    if isinstance(outcome[0], int):
        step, reason = outcome
        logger.debug(f"{family} n={n} at lambda={lam}: rejected at step {step} ({reason})")
        return OrbitNonexistence(family=family, n=index, lam=lam, step=step, reason=str(reason))
    points, residual = outcome
    assert isinstance(points, list) and isinstance(residual, float)
    if residual >= tol_fix:
        logger.debug(f"{family} n={n} at lambda={lam}: residual {residual:.3e} fails closure")
        return OrbitNonexistence(family=family, n=index, lam=lam, step=0, reason=f"closure residual {residual:.3e} >= {tol_fix:.1e}")
    record = PeriodicOrbitRecord(
        family=family, n=n, lam=lam, points=points, period=len(itinerary), itinerary=itinerary, residual=residual
    )
    return record.with_stability(classify_periodic(record, lam, tol_fix=tol_fix, tol_eig=tol_eig))


def fixed_point_p(
    lam: float, tol_fix: float = TOL_FIX, tol_sing: float = TOL_SING, tol_eig: float = TOL_EIG
) -> PeriodicOrbitRecord:
    """The hyperbolic fixed point ``p_λ = (1/(1 + tan θ_λ), θ_λ)``."""
    lam = validate_lambda(lam)
    fixed = theta_lambda(lam)
    result = _record("FixedPoint_plambda", 0, lam, 1.0 / (1.0 + math.tan(fixed)), fixed, "2", tol_fix, tol_sing, tol_eig)
    if isinstance(result, OrbitNonexistence):
        raise DomainError(f"p_lambda failed verification at lambda={lam}: {result.reason}")
    return result


def period2_orbit(s: float, lam: float) -> PeriodicOrbitRecord:
    """Perpendicular bounce between opposite sides from position ``s``.

    In reduced coordinates both collisions are the fixed point ``(s, 0)``
    reached by f1; the record carries the period 2 of the billiard orbit.
    """
    lam = validate_lambda(lam)
    point = ReducedPoint(s=s, theta=0.0)
    record = PeriodicOrbitRecord(family="P_line", n=None, lam=lam, points=[point, point], period=2, itinerary="11", residual=0.0)
    return record.with_stability(classify_periodic(record, lam))


def q_candidate(n: int, lam: float) -> Tuple[float, float]:
    """Closed-form ``(s_n, θ_n)`` of ``q_n``, whether or not it exists."""
    theta_n = HALF_PI * lam * (1.0 - lam) / (1.0 - lam ** (n + 2))
    ratio = gamma(lam**n * theta_n, lam, 2)
    return (1.0 - partial_sum(theta_n, lam, n)) * ratio / (ratio - 1.0), theta_n


def solve_qn(
    n: int, lam: float, tol_fix: float = TOL_FIX, tol_sing: float = TOL_SING, tol_eig: float = TOL_EIG
) -> OrbitResult:
    """Periodic point ``q_n`` (``q_0 = p_λ``), verified along ``1ⁿ22``."""
    lam = validate_lambda(lam)
    if n < 0:
        raise DomainError(f"n={n} must be non-negative")
    if n == 0:
        return fixed_point_p(lam, tol_fix, tol_sing, tol_eig)
    s_n, theta_n = q_candidate(n, lam)
    return _record("Q_family", n, lam, s_n, theta_n, "1" * n + "22", tol_fix, tol_sing, tol_eig)


def p_candidate(n: int, lam: float) -> Tuple[float, float]:
    """Closed-form starting point of ``p_n``, whether or not it exists."""
    theta = theta_lambda(lam) * (1.0 + lam ** (2 * n - 1)) / (1.0 + lam ** (2 * n))
    shifted = lam * theta
    ratio = gamma(shifted, lam, 2 * n - 1)
    return ratio * (h_partial(shifted, lam, 2 * n - 2) - math.tan(theta)) / (1.0 + ratio), theta


def solve_pn(
    n: int, lam: float, tol_fix: float = TOL_FIX, tol_sing: float = TOL_SING, tol_eig: float = TOL_EIG
) -> OrbitResult:
    """Periodic point ``p_n``, verified along ``1 2^(2n-1)``."""
    lam = validate_lambda(lam)
    if n < 1:
        raise DomainError(f"n={n} must be at least 1")
    s, theta = p_candidate(n, lam)
    return _record("P_family", n, lam, s, theta, "1" + "2" * (2 * n - 1), tol_fix, tol_sing, tol_eig)


# ---------------------------------------------------------------------------
# Existence thresholds
# ---------------------------------------------------------------------------


def _cn_equation(lam: float, n: int) -> float:
    theta_n = HALF_PI * lam * (1.0 - lam) / (1.0 - lam ** (n + 2))
    return partial_sum(theta_n, lam, n) - 1.0


def cn_threshold_meta(n: int, bracket: Tuple[float, float] = CN_BRACKET, xtol: float = ROOT_XTOL) -> Tuple[float, SolverMeta]:
    """``c_n`` with solver diagnostics.

    Raises
    ------
    BracketError
        When the equation does not change sign over ``bracket``.
    """
    if n < 1:
        raise DomainError(f"n={n} must be at least 1")
    low, high = bracket
    f_low, f_high = _cn_equation(low, n), _cn_equation(high, n)
    if f_low * f_high > 0.0:
        raise BracketError(f"S_n(theta_n) - 1 keeps its sign on [{low}, {high}] for n={n}")
    value, info = brentq(_cn_equation, low, high, args=(n,), xtol=xtol, maxiter=ROOT_MAXITER, full_output=True)
    meta = SolverMeta(
        iterations=info.iterations,
        function_calls=info.function_calls,
        residual=abs(_cn_equation(value, n)),
        converged=bool(info.converged),
    )
    return float(value), meta


def cn_threshold(n: int, bracket: Tuple[float, float] = CN_BRACKET) -> float:
    """Threshold ``c_n``: ``q_n`` exists exactly for ``λ ∈ (0, c_n)``.

    Root of ``S_n(θ_n(λ)) = 1``, increasing in λ, hence unique.
    """
    return cn_threshold_meta(n, bracket)[0]


# ---------------------------------------------------------------------------
# Stable graphs of q_m and heteroclinic probes
# ---------------------------------------------------------------------------


def periodic_stable_graph(
    theta: float, lam: float, m: int, tol_series: float = TOL_SERIES, max_terms: int = SERIES_MAX_TERMS
) -> SeriesEval:
    """Local stable graph ``s = w_m(θ)`` of ``q_m``.

    The graph is invariant under ``F = f2² ∘ f1ᵐ``, which gives
    ``w(θ) = A(θ) + B(θ) w(G(θ))`` with ``A = 1 - S_m(θ)``,
    ``B = tan(λᵐθ) tan(g(λᵐθ))`` and ``G(θ) = g²(λᵐθ)``; the series
    ``Σ_k A(Gᵏθ) Π_{j<k} B(Gʲθ)`` is summed until the tail, estimated with the
    current ratio plus a 10% margin, is below ``tol_series``. ``m = 0``
    reproduces ``h_λ``.
    """
    lam = validate_lambda(lam)
    if m < 0:
        raise DomainError(f"m={m} must be non-negative")
    scale = lam**m
    total, product, x = 0.0, 1.0, theta
    for k in range(max_terms):
        shifted = scale * x
        offset = 1.0 - partial_sum(x, lam, m)
        total += product * offset
        factor = math.tan(shifted) * math.tan(lam * (HALF_PI - shifted))
        product *= factor
        ratio = 1.1 * factor
        if ratio < 1.0:
            tail = abs(product) * max(1.0, abs(offset)) / (1.0 - ratio)
            if tail < tol_series:
                return SeriesEval(value=total, terms_used=k + 1, tail_bound=tail)
        x = lam * (HALF_PI - lam * (HALF_PI - shifted))
    raise SeriesConvergenceError(f"stable graph of q_{m} did not converge at theta={theta!r}")


def periodic_stable_curve(lam: float, m: int, n_points: int = CURVE_GRID, tol_series: float = TOL_SERIES) -> Curve:
    """Local stable graph of ``q_m`` sampled on ``[θ_m/2, 3θ_m/2]``.

    Angles where the series diverges or the graph leaves ``0 < s < 1``
    are skipped.

    Raises
    ------
    DomainError
        When fewer than two samples remain.
    """
    lam = validate_lambda(lam)
    centre = q_candidate(m, lam)[1]
    grid: List[float] = []
    values: List[float] = []
    for theta in np.linspace(0.5 * centre, min(1.5 * centre, 0.25 * math.pi), n_points).tolist():
        try:
            value = periodic_stable_graph(theta, lam, m, tol_series).value
        except SeriesConvergenceError:
            continue
        if 0.0 < value < 1.0:
            grid.append(theta)
            values.append(value)
    if len(grid) < 2:
        raise DomainError(f"stable graph of q_{m} has no valid samples at lambda={lam}")
    return Curve(kind="PeriodicStable", grid=grid, values=values, depth=m, label=f"Ws_loc(q_{m})")


def unstable_extent(s_n: float, theta_n: float, lam: float) -> float:
    """Right end of the known horizontal piece of ``W^u(q_n)``.

    The segment from ``(0, θ_n)`` to ``q_n`` always belongs to the unstable
    manifold; it extends to ``s = 1`` when ``θ_n > πλ/4``.
    """
    return 1.0 if theta_n > 0.25 * math.pi * lam else s_n


# ---------------------------------------------------------------------------
# Searches and lifts
# ---------------------------------------------------------------------------


def search_fixed_points(
    lam: float, n_seeds: int = FIXED_POINT_SEEDS, seed: int = SEED, tol_fix: float = TOL_FIX
) -> List[Tuple[float, float]]:
    """Fixed points of φ_λ in M2 found by root searches from random seeds.

    Seeds are uniform in ``{s + tan θ > 1}``; converged roots are kept when
    the exact map fixes them to ``tol_fix`` and deduplicated.
    """
    lam = validate_lambda(lam)
    rng = default_rng(seed)

    def defect(x: np.ndarray) -> np.ndarray:
        s, t = x
        return np.array([(1.0 - s) / np.tan(t) - s, lam * (HALF_PI - t) - t])

    found: List[Tuple[float, float]] = []
    tried = 0
    while tried < n_seeds:
        s, t = rng.random(), HALF_PI * rng.random()
        if not (0.0 < t < HALF_PI and s + math.tan(t) > 1.0):
            continue
        tried += 1
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            solution = root(defect, np.array([s, t]), method="hybr")
        if not solution.success:
            continue
        s1, t1 = (float(v) for v in solution.x)
        if not (0.0 < s1 < 1.0 and 0.0 < t1 < HALF_PI and s1 + math.tan(t1) > 1.0):
            continue
        image_s, image_t, _, _, _ = reduced_step(s1, t1, lam)
        if max(abs(image_s - s1), abs(image_t - t1)) >= tol_fix:
            continue
        if all(max(abs(s1 - a), abs(t1 - b)) > 1e-8 for a, b in found):
            found.append((s1, t1))
    logger.info(f"{len(found)} fixed point(s) found in M2 from {n_seeds} seeds at lambda={lam}")
    return found


def lifted_period(record: PeriodicOrbitRecord, lam: Optional[float] = None, tol: float = 1e-7) -> int:
    """Period of the billiard orbits lifting a reduced periodic orbit.

    Every lift of ``record.points[0]`` is iterated with the full map until
    it returns; the common period is one of k, 2k, 4k or 8k.

    Raises
    ------
    DomainError
        When a lift does not close within 8k steps or the lifts disagree.
    """
    lam = validate_lambda(record.lam if lam is None else lam)
    k = record.period
    periods = set()
    for start in lift(record.points[0]):
        s, theta = start.as_tuple()
        for step in range(1, 8 * k + 1):
            s, theta, _, _, _ = full_step(s, theta, lam)
            if circular_distance(s, start.s) < tol and abs(theta - start.theta) < tol:
                periods.add(step)
                break
        else:
            raise DomainError(f"lift {start.as_tuple()} does not close within {8 * k} steps")
    if len(periods) != 1:
        raise DomainError(f"lifts have different periods {sorted(periods)}")
    period = periods.pop()
    if period not in (k, 2 * k, 4 * k, 8 * k):
        raise DomainError(f"lifted period {period} is not k, 2k, 4k or 8k for k={k}")
    return period
