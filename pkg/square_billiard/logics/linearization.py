#!/usr/bin/python
# coding: utf-8 -*-
"""Derivatives of the billiard maps and stability of periodic orbits.

One step from ``(s₀, θ₀)`` with outgoing billiard angle ``θ_out`` and
flight length ``t`` has derivative::

    sign · | cos θ₀ / cos θ_out    t / cos θ_out |
           |        0                   λ        |

where ``θ_out = θ₁/λ`` is the image angle before contraction. ``sign`` is
-1 for every branch of the full map, +1 for f1 and -1 for f2. Entries are
kept positive and the sign is stored separately, so n-step products
stay upper triangular with ``a22 = λⁿ``.
"""

from __future__ import annotations

import math
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from square_billiard.defaults import TOL_EIG, TOL_FIX, TOL_SING
from square_billiard.exceptions import OrbitDeathError, SingularPointError, UnverifiedOrbitError
from square_billiard.helpers import run_ordered
from square_billiard.logics.core_maps import full_step, reduced_step, validate_lambda
from square_billiard.models.orbit import PeriodicOrbitRecord, StabilityClass, TriJacobian
from square_billiard.models.points import FullPoint, ReducedPoint
from square_billiard.models.types import RegionTag

Point = Union[FullPoint, ReducedPoint]
StepFunction = Callable[[float, float, float, float], Tuple[float, float, RegionTag, float, float]]


def _stepper(p: Point) -> StepFunction:
    return reduced_step if isinstance(p, ReducedPoint) else full_step


def _jacobian_from_step(theta0: float, theta_out: float, flight: float, lam: float, sign: int) -> TriJacobian:
    cos_out = math.cos(theta_out)
    return TriJacobian(a11=math.cos(theta0) / cos_out, a12=flight / cos_out, a22=lam, sign=sign, steps=1)


def _sign(p: Point, branch: str) -> int:
    if isinstance(p, ReducedPoint):
        return 1 if branch == "Reduced_M1" else -1
    return -1


def step_jacobian(p: Point, lam: float, tol_sing: float = TOL_SING) -> TriJacobian:
    """Derivative of one step of Φ_λ (FullPoint) or φ_λ (ReducedPoint) at ``p``.

    Raises
    ------
    SingularPointError
        When ``p`` is on S⁺.
    AngleRangeError
        When the outgoing angle is too close to π/2.
    """
    lam = validate_lambda(lam)
    _, _, branch, flight, theta_out = _stepper(p)(p.s, p.theta, lam, tol_sing)
    return _jacobian_from_step(p.theta, theta_out, flight, lam, _sign(p, branch))


def cocycle(p: Point, lam: float, n: int, tol_sing: float = TOL_SING) -> TriJacobian:
    """Derivative of ``n`` steps along the orbit of ``p``.

    Raises
    ------
    SingularPointError
        With ``step`` set to the index of the iterate found on S⁺.
    """
    lam = validate_lambda(lam)
    if n < 1:
        raise ValueError(f"n={n} must be positive")
    step = _stepper(p)
    reduced = isinstance(p, ReducedPoint)
    s, theta = p.s, p.theta
    total = TriJacobian.identity()
    for k in range(n):
        try:
            s1, theta1, branch, flight, theta_out = step(s, theta, lam, tol_sing)
        except SingularPointError as error:
            raise SingularPointError(f"orbit reaches S+ at step {k}", which="S+", step=k) from error
        sign = (1 if branch == "Reduced_M1" else -1) if reduced else -1
        total = total.then(_jacobian_from_step(theta, theta_out, flight, lam, sign))
        s, theta = s1, theta1
    return total


def alpha_zeta_direct(p: Point, lam: float, n: int, tol_sing: float = TOL_SING) -> Tuple[float, float]:
    """Evaluate αₙ and ζₙ by their closed sums, without matrix products.

    With factors ``cᵢ = cos θᵢ / cos(λ⁻¹θᵢ₊₁)`` and flights ``tᵢ``::

        αₙ = Π cᵢ
        ζₙ = Σᵢ λⁱ · tᵢ / cos(λ⁻¹θᵢ₊₁) · Π_{j>i} cⱼ
    """
    lam = validate_lambda(lam)
    step = _stepper(p)
    thetas = np.empty(n + 1)
    flights = np.empty(n)
    s, thetas[0] = p.s, p.theta
    for k in range(n):
        try:
            s, thetas[k + 1], _, flights[k], _ = step(s, thetas[k], lam, tol_sing)
        except SingularPointError as error:
            raise SingularPointError(f"orbit reaches S+ at step {k}", which="S+", step=k) from error
    cos_out = np.cos(thetas[1:] / lam)
    factors = np.cos(thetas[:-1]) / cos_out
    # tail[i] = product of factors after i
    tail = np.append(np.cumprod(factors[::-1])[::-1][1:], 1.0)
    zeta = float(np.sum(lam ** np.arange(n) * flights / cos_out * tail))
    return float(np.prod(factors)), zeta


def classify_periodic(
    orbit: PeriodicOrbitRecord, lam: Optional[float] = None, tol_fix: float = TOL_FIX, tol_eig: float = TOL_EIG
) -> StabilityClass:
    """Parabolic/hyperbolic classification of a verified periodic orbit.

    The expansion α is the product of one-step factors evaluated at each
    stored orbit point, so it does not depend on re-iterating an unstable
    orbit.

    Raises
    ------
    UnverifiedOrbitError
        When ``orbit.residual >= tol_fix``.
    """
    lam = validate_lambda(orbit.lam if lam is None else lam)
    if orbit.residual >= tol_fix:
        raise UnverifiedOrbitError(f"orbit residual {orbit.residual:.3e} is not below {tol_fix:.1e}")
    log_alpha = 0.0
    for point in orbit.points:
        log_alpha += math.log(step_jacobian(point, lam).a11)
    alpha = math.exp(log_alpha)
    beta = lam**orbit.period
    kind = "Parabolic" if abs(alpha - 1.0) <= tol_eig else "Hyperbolic"
    logger.debug(f"{orbit.family} period {orbit.period}: α={alpha:.12g}, β={beta:.12g} -> {kind}")
    return StabilityClass(kind=kind, alpha=alpha, beta=beta)


def lyapunov(p: Point, lam: float, n_max: int, tol_sing: float = TOL_SING) -> Tuple[float, float]:
    """Estimate both Lyapunov exponents of the orbit of ``p``.

    Returns
    -------
    Tuple[float, float]
        ``(log αₙ / n, log λ)``: the mean log of the one-step expansion
        factors and the exact angle contraction rate.

    Raises
    ------
    OrbitDeathError
        When the orbit reaches S⁺; ``partial`` holds the estimate over the
        surviving steps (or None) and ``step`` the index of the dying iterate.
    """
    lam = validate_lambda(lam)
    step = _stepper(p)
    s, theta = p.s, p.theta
    log_sum = 0.0
    for k in range(n_max):
        try:
            s1, theta1, _, _, theta_out = step(s, theta, lam, tol_sing)
        except SingularPointError as error:
            partial_estimate = (log_sum / k, math.log(lam)) if k else None
            raise OrbitDeathError(f"orbit reaches S+ at step {k}", step=k, partial=partial_estimate) from error
        log_sum += math.log(math.cos(theta)) - math.log(math.cos(theta_out))
        s, theta = s1, theta1
    return log_sum / n_max, math.log(lam)


def _lyapunov_or_none(p: Point, lam: float, n_max: int) -> Optional[Tuple[float, float]]:
    try:
        return lyapunov(p, lam, n_max)
    except OrbitDeathError:
        return None


def lyapunov_grid(points: Sequence[Point], lam: float, n_max: int, workers: int = 1) -> List[Optional[Tuple[float, float]]]:
    """Run :func:`lyapunov` on many initial conditions; dead orbits give None."""
    return run_ordered(partial(_lyapunov_or_none, lam=lam, n_max=n_max), list(points), workers=workers, label="lyapunov")
