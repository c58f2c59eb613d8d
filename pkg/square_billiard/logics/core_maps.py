#!/usr/bin/python
# coding: utf-8 -*-
# pylint: disable=too-many-return-statements
"""Exact evaluation of the square billiard maps.

The full billiard map B acts on [0, 4) × (-π/2, π/2). Writing
``s = n + x`` with ``n = [s]`` and ``x = {s}``, a point is in

- M1 when ``x + tan θ > 1`` (next collision on the counter-clockwise neighbour side),
- M2 when ``0 < x + tan θ < 1`` (opposite side),
- M3 when ``x + tan θ < 0`` (clockwise neighbour side),

and on the singular set S⁺ when ``x = 0`` or ``x + tan θ ∈ {0, 1}``. The
dissipative map is ``Φ_λ = R_λ ∘ B`` with ``R_λ(s, θ) = (s, λθ)``.

Quotienting by the symmetries of the square gives the reduced map
``φ_λ = {f1, f2}`` on (0, 1) × [0, π/2)::

    f1(s, θ) = (s + tan θ, λθ)                 if s + tan θ < 1
    f2(s, θ) = ((1 - s) cot θ, λ(π/2 - θ))     if s + tan θ > 1

Functions taking pydantic points are the public, validated entry points.
``full_step``/``reduced_step`` work on raw floats for orbit loops and the
``*_array`` kernels evaluate whole numpy grids at once.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray

from square_billiard.defaults import ANGLE_GUARD, CURVE_GRID, HALF_PI, TOL_SING
from square_billiard.exceptions import AngleRangeError, DomainError, NoPreimageError, SingularPointError
from square_billiard.models.curves import Curve
from square_billiard.models.points import FullPoint, MapStep, ReducedPoint
from square_billiard.models.types import RegionTag

FloatArray = NDArray[np.float64]

# Branch of a full step seen from the preimage when evaluated by time reversal.
_REVERSED_TAG: dict[str, RegionTag] = {"Full_M1": "Full_M3", "Full_M2": "Full_M2", "Full_M3": "Full_M1"}

# Codes returned by the array kernels.
SINGULAR = 0
BRANCH_F1 = 1
BRANCH_F2 = 2


def validate_lambda(lam: float, allow_expanding: bool = False) -> float:
    """Check a contraction factor.

    Parameters
    ----------
    lam : float
        Contraction factor.
    allow_expanding : bool
        Accept ``lam > 1`` (conjugacy checks).

    Raises
    ------
    DomainError
        When ``lam <= 0``, ``lam == 1``, or ``lam > 1`` without ``allow_expanding``.
    """
    if not math.isfinite(lam) or lam <= 0.0:
        raise DomainError(f"lambda={lam!r} must be positive")
    if lam == 1.0:
        raise DomainError("lambda=1 is the elastic billiard")
    if lam > 1.0 and not allow_expanding:
        raise DomainError(f"lambda={lam!r} must be in (0, 1)")
    return float(lam)


def _guard_angle(theta: float) -> None:
    if abs(theta) >= HALF_PI - ANGLE_GUARD:
        raise AngleRangeError(f"|theta|={abs(theta)!r} is within {ANGLE_GUARD} of π/2")


def _split(s: float) -> Tuple[int, float]:
    n = math.floor(s)
    return int(n), s - n


def _wrap(s: float) -> float:
    wrapped = s - 4.0 * math.floor(s / 4.0)
    return 0.0 if wrapped >= 4.0 else wrapped


def circular_distance(a: float, b: float) -> float:
    """Distance between two perimeter positions, modulo 4."""
    d = abs(a - b) % 4.0
    return min(d, 4.0 - d)


# ---------------------------------------------------------------------------
# Full map
# ---------------------------------------------------------------------------


def _full_region(s: float, theta: float, tol_sing: float) -> RegionTag:
    _, x = _split(s)
    if x <= tol_sing or 1.0 - x <= tol_sing:
        return "OnSingularPlus"
    reach = x + math.tan(theta)
    if abs(reach) <= tol_sing or abs(reach - 1.0) <= tol_sing:
        return "OnSingularPlus"
    if reach > 1.0:
        return "Full_M1"
    if reach > 0.0:
        return "Full_M2"
    return "Full_M3"


def full_billiard(s: float, theta: float, tol_sing: float = TOL_SING) -> Tuple[float, float, RegionTag, float]:
    """Elastic billiard map B on raw floats.

    Returns
    -------
    Tuple[float, float, RegionTag, float]
        Image position, image angle, branch and flight length.

    Raises
    ------
    AngleRangeError
        When ``|θ|`` is within the angle guard of π/2.
    SingularPointError
        When the point is on S⁺.
    """
    _guard_angle(theta)
    tag = _full_region(s, theta, tol_sing)
    if tag == "OnSingularPlus":
        raise SingularPointError(f"({s!r}, {theta!r}) lies on S+", which="S+")
    n, x = _split(s)
    tan_theta = math.tan(theta)
    if tag == "Full_M1":
        return _wrap(n + 1.0 + (1.0 - x) / tan_theta), HALF_PI - theta, tag, (1.0 - x) / math.sin(theta)
    if tag == "Full_M2":
        return _wrap(n - 1.0 - x - tan_theta), -theta, tag, 1.0 / math.cos(theta)
    return _wrap(n + x / tan_theta), -HALF_PI - theta, tag, x / abs(math.sin(theta))


def full_step(s: float, theta: float, lam: float, tol_sing: float = TOL_SING) -> Tuple[float, float, RegionTag, float, float]:
    """One step of Φ_λ on raw floats: ``(s', θ', branch, flight, θ_out)``."""
    s1, theta_out, tag, flight = full_billiard(s, theta, tol_sing)
    return s1, lam * theta_out, tag, flight, theta_out


def classify_full(p: FullPoint, tol_sing: float = TOL_SING) -> RegionTag:
    """Region of a full phase-space point: Full_M1/M2/M3 or OnSingularPlus."""
    _guard_angle(p.theta)
    return _full_region(p.s, p.theta, tol_sing)


def classify_full_inverse(p: FullPoint, lam: float, tol_sing: float = TOL_SING) -> RegionTag:
    """Region of the Φ_λ-preimage of ``p``, or OnSingularMinus when ``p`` is on S⁻."""
    lam = validate_lambda(lam, allow_expanding=True)
    reversed_theta = -p.theta / lam
    _guard_angle(reversed_theta)
    tag = _full_region(p.s, reversed_theta, tol_sing)
    if tag == "OnSingularPlus":
        return "OnSingularMinus"
    return _REVERSED_TAG[tag]


def full_map(p: FullPoint, lam: float, tol_sing: float = TOL_SING) -> MapStep:
    """Apply Φ_λ = R_λ ∘ B to a full phase-space point.

    Raises
    ------
    SingularPointError
        When ``p`` is within ``tol_sing`` of S⁺.
    AngleRangeError
        When an angle is within the guard of π/2 (only possible for ``lam > 1``).
    """
    lam = validate_lambda(lam, allow_expanding=True)
    s1, theta1, tag, flight, theta_out = full_step(p.s, p.theta, lam, tol_sing)
    _guard_angle(theta1)
    return MapStep(image=FullPoint(s=s1, theta=theta1), branch=tag, flight_length=flight, theta_out=theta_out)


def full_inverse(p: FullPoint, lam: float, tol_sing: float = TOL_SING) -> MapStep:
    """Apply Φ_λ⁻¹ = B⁻¹ ∘ R_λ⁻¹ using time reversal ``B⁻¹ = T ∘ B ∘ T``.

    ``T(s, θ) = (s, -θ)``, hence ``Φ_λ⁻¹(s, θ) = T(B(s, -θ/λ))``. The returned
    branch is the region of the preimage.

    Raises
    ------
    AngleRangeError
        When ``|θ/λ|`` reaches π/2.
    SingularPointError
        When ``p`` is on S⁻.
    """
    lam = validate_lambda(lam, allow_expanding=True)
    reversed_theta = -p.theta / lam
    _guard_angle(reversed_theta)
    try:
        s0, theta_back, tag, flight = full_billiard(p.s, reversed_theta, tol_sing)
    except SingularPointError as error:
        raise SingularPointError(f"({p.s!r}, {p.theta!r}) lies on S-", which="S-") from error
    return MapStep(
        image=FullPoint(s=s0, theta=-theta_back),
        branch=_REVERSED_TAG[tag],
        flight_length=flight,
        theta_out=-reversed_theta,
    )


def conjugacy_check(p: FullPoint, lam: float, tol_sing: float = TOL_SING) -> float:
    """Discrepancy of ``Φ_{1/λ} = (R_λ ∘ T)⁻¹ ∘ Φ_λ⁻¹ ∘ (R_λ ∘ T)`` at ``p``.

    Both sides are evaluated through independent code paths (forward map
    with ``1/λ`` and inverse map with ``λ``). Returns the max-norm
    discrepancy, with positions compared modulo 4.

    Raises
    ------
    AngleRangeError
        When the expanding side leaves the phase space (``|θ'| >= π/2``).
    SingularPointError
        Propagated from either side.
    """
    lam = validate_lambda(lam, allow_expanding=True)
    inverse_lam = 1.0 / lam
    # Left-hand side: the λ⁻¹ map. Its image angle may leave (-π/2, π/2).
    s_left, theta_out, _, _ = full_billiard(p.s, p.theta, tol_sing)
    theta_left = inverse_lam * theta_out
    _guard_angle(theta_left)
    # Right-hand side.
    conjugated = FullPoint(s=p.s, theta=-lam * p.theta)
    back = full_inverse(conjugated, lam, tol_sing).image
    assert isinstance(back, FullPoint)
    s_right, theta_right = back.s, -back.theta / lam
    _guard_angle(theta_right)
    return max(circular_distance(s_left, s_right), abs(theta_left - theta_right))


# ---------------------------------------------------------------------------
# Quotient projection
# ---------------------------------------------------------------------------


def project(p: FullPoint) -> ReducedPoint:
    """Quotient projection onto the reduced phase space.

    ``({s}, θ)`` when ``θ >= 0`` and ``(1 - {s}, -θ)`` otherwise.

    Raises
    ------
    DomainError
        When ``{s} = 0`` (corner lift).
    """
    _, x = _split(p.s)
    if x == 0.0:
        raise DomainError(f"s={p.s!r} is a corner of the square")
    if p.theta >= 0.0:
        return ReducedPoint(s=x, theta=p.theta)
    return ReducedPoint(s=1.0 - x, theta=-p.theta)


def lift(p: ReducedPoint) -> List[FullPoint]:
    """Preimages of a reduced point under :func:`project`.

    Eight points when ``θ > 0``: one with positive angle and one with
    negative angle on each side. On the parabolic line ``θ = 0`` only the
    four positive-angle lifts project back onto ``p``.
    """
    lifts = [FullPoint(s=k + p.s, theta=p.theta) for k in range(4)]
    if p.theta > 0.0:
        lifts += [FullPoint(s=k + 1.0 - p.s, theta=-p.theta) for k in range(4)]
    return lifts


# ---------------------------------------------------------------------------
# Reduced map
# ---------------------------------------------------------------------------


def _reduced_region(s: float, theta: float, tol_sing: float) -> RegionTag:
    reach = s + math.tan(theta)
    if abs(reach - 1.0) <= tol_sing:
        return "OnSingularPlus"
    return "Reduced_M1" if reach < 1.0 else "Reduced_M2"


def classify_reduced(p: ReducedPoint, tol_sing: float = TOL_SING) -> RegionTag:
    """Reduced_M1 (f1), Reduced_M2 (f2) or OnSingularPlus."""
    _guard_angle(p.theta)
    return _reduced_region(p.s, p.theta, tol_sing)


def reduced_step(s: float, theta: float, lam: float, tol_sing: float = TOL_SING) -> Tuple[float, float, RegionTag, float, float]:
    """One step of φ_λ on raw floats: ``(s', θ', branch, flight, θ_out)``.

    Raises
    ------
    SingularPointError
        When ``s + tan θ = 1`` within ``tol_sing``.
    """
    _guard_angle(theta)
    tag = _reduced_region(s, theta, tol_sing)
    if tag == "OnSingularPlus":
        raise SingularPointError(f"({s!r}, {theta!r}) lies on S+", which="S+")
    if tag == "Reduced_M1":
        return s + math.tan(theta), lam * theta, tag, 1.0 / math.cos(theta), theta
    theta_out = HALF_PI - theta
    return (1.0 - s) / math.tan(theta), lam * theta_out, tag, (1.0 - s) / math.sin(theta), theta_out


def reduced_back_step(s: float, theta: float, lam: float, tol_sing: float = TOL_SING) -> Tuple[float, float, RegionTag, float, float]:
    """One step of φ_λ⁻¹ on raw floats: ``(s₀, θ₀, branch of preimage, flight, θ_out)``.

    ``f1⁻¹(s, θ) = (s - tan(θ/λ), θ/λ)`` applies when ``s > tan(θ/λ)`` and
    ``f2⁻¹(s, θ) = (1 - s tan θ₀, θ₀)`` with ``θ₀ = π/2 - θ/λ`` when
    ``s < tan(θ/λ)``; equality is the singular curve S⁻.

    Raises
    ------
    NoPreimageError
        When ``θ >= λπ/2`` (outside the image of φ_λ).
    SingularPointError
        When ``s = tan(θ/λ)`` within ``tol_sing``.
    """
    theta_out = theta / lam
    if theta_out >= HALF_PI - ANGLE_GUARD:
        raise NoPreimageError(f"theta={theta!r} is not below λπ/2={lam * HALF_PI!r}")
    slope = math.tan(theta_out)
    if abs(s - slope) <= tol_sing:
        raise SingularPointError(f"({s!r}, {theta!r}) lies on S-", which="S-")
    if s > slope:
        return s - slope, theta_out, "Reduced_M1", 1.0 / math.cos(theta_out), theta_out
    theta0 = HALF_PI - theta_out
    s0 = 1.0 - s * math.tan(theta0)
    return s0, theta0, "Reduced_M2", (1.0 - s0) / math.sin(theta0), theta_out


def classify_reduced_inverse(p: ReducedPoint, lam: float, tol_sing: float = TOL_SING) -> RegionTag:
    """Region of the φ_λ-preimage of ``p``, or OnSingularMinus on S⁻."""
    lam = validate_lambda(lam)
    try:
        return reduced_back_step(p.s, p.theta, lam, tol_sing)[2]
    except SingularPointError:
        return "OnSingularMinus"


def reduced_map(p: ReducedPoint, lam: float, tol_sing: float = TOL_SING) -> MapStep:
    """Apply the reduced map φ_λ.

    Raises
    ------
    SingularPointError
        When ``p`` is on S⁺.
    """
    lam = validate_lambda(lam)
    s1, theta1, tag, flight, theta_out = reduced_step(p.s, p.theta, lam, tol_sing)
    return MapStep(image=ReducedPoint(s=s1, theta=theta1), branch=tag, flight_length=flight, theta_out=theta_out)


def reduced_inverse(p: ReducedPoint, lam: float, tol_sing: float = TOL_SING) -> MapStep:
    """Apply φ_λ⁻¹, inverting whichever branch maps onto ``p``.

    Raises
    ------
    NoPreimageError
        When ``p`` is not in the image of φ_λ.
    SingularPointError
        When ``p`` is on S⁻.
    """
    lam = validate_lambda(lam)
    s0, theta0, tag, flight, theta_out = reduced_back_step(p.s, p.theta, lam, tol_sing)
    return MapStep(image=ReducedPoint(s=s0, theta=theta0), branch=tag, flight_length=flight, theta_out=theta_out)


# ---------------------------------------------------------------------------
# Vectorized kernels
# ---------------------------------------------------------------------------


def reduced_map_array(
    s: FloatArray, theta: FloatArray, lam: float, tol_sing: float = TOL_SING
) -> Tuple[FloatArray, FloatArray, NDArray[np.int8]]:
    """Apply φ_λ to arrays of points.

    Returns
    -------
    Tuple[FloatArray, FloatArray, NDArray[np.int8]]
        Image coordinates (NaN where singular) and branch codes
        (``BRANCH_F1``, ``BRANCH_F2`` or ``SINGULAR``).
    """
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    tan_theta = np.tan(theta)
    reach = s + tan_theta
    singular = (np.abs(reach - 1.0) <= tol_sing) | (theta >= HALF_PI - ANGLE_GUARD) | ~np.isfinite(reach)
    first = (reach < 1.0) & ~singular
    second = ~first & ~singular
    with np.errstate(divide="ignore", invalid="ignore"):
        s_next = np.where(first, reach, (1.0 - s) / tan_theta)
        theta_next = np.where(first, lam * theta, lam * (HALF_PI - theta))
    s_next[singular] = np.nan
    theta_next[singular] = np.nan
    code = np.full(s.shape, SINGULAR, dtype=np.int8)
    code[first] = BRANCH_F1
    code[second] = BRANCH_F2
    return s_next, theta_next, code


def reduced_inverse_array(
    s: FloatArray, theta: FloatArray, lam: float, tol_sing: float = TOL_SING
) -> Tuple[FloatArray, FloatArray, NDArray[np.int8]]:
    """Apply φ_λ⁻¹ to arrays of points.

    Codes give the branch of the preimage; points on S⁻ or outside the
    image of φ_λ get ``SINGULAR`` and NaN coordinates.
    """
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    theta_out = theta / lam
    valid = theta_out < HALF_PI - ANGLE_GUARD
    with np.errstate(invalid="ignore", over="ignore"):
        slope = np.where(valid, np.tan(np.where(valid, theta_out, 0.0)), np.inf)
    singular = ~valid | (np.abs(s - slope) <= tol_sing)
    first = (s > slope) & ~singular
    second = ~first & ~singular
    with np.errstate(invalid="ignore", over="ignore"):
        theta_second = HALF_PI - theta_out
        s_prev = np.where(first, s - slope, 1.0 - s * np.tan(theta_second))
        theta_prev = np.where(first, theta_out, theta_second)
    s_prev[singular] = np.nan
    theta_prev[singular] = np.nan
    code = np.full(s.shape, SINGULAR, dtype=np.int8)
    code[first] = BRANCH_F1
    code[second] = BRANCH_F2
    return s_prev, theta_prev, code


def full_map_array(
    s: FloatArray, theta: FloatArray, lam: float, tol_sing: float = TOL_SING
) -> Tuple[FloatArray, FloatArray, NDArray[np.int8]]:
    """Apply Φ_λ to arrays of points; codes are 1, 2, 3 for M1, M2, M3 and 0 for S⁺."""
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    n = np.floor(s)
    x = s - n
    tan_theta = np.tan(theta)
    reach = x + tan_theta
    singular = (
        (x <= tol_sing)
        | (1.0 - x <= tol_sing)
        | (np.abs(reach) <= tol_sing)
        | (np.abs(reach - 1.0) <= tol_sing)
        | (np.abs(theta) >= HALF_PI - ANGLE_GUARD)
    )
    m1 = (reach > 1.0) & ~singular
    m3 = (reach < 0.0) & ~singular
    m2 = ~m1 & ~m3 & ~singular
    with np.errstate(divide="ignore", invalid="ignore"):
        s_next = np.select([m1, m2, m3], [n + 1.0 + (1.0 - x) / tan_theta, n - 1.0 - reach, n + x / tan_theta], np.nan)
        theta_next = np.select([m1, m2, m3], [HALF_PI - theta, -theta, -HALF_PI - theta], np.nan)
    s_next = np.mod(s_next, 4.0)
    s_next[s_next >= 4.0] = 0.0
    code = np.select([m1, m2, m3], [1, 2, 3], SINGULAR).astype(np.int8)
    return s_next, lam * theta_next, code


def project_array(s: FloatArray, theta: FloatArray) -> Tuple[FloatArray, FloatArray]:
    """Vectorized :func:`project`; corner positions map to NaN."""
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    x = s - np.floor(s)
    positive = theta >= 0.0
    s_red = np.where(positive, x, 1.0 - x)
    theta_red = np.abs(theta)
    s_red[x == 0.0] = np.nan
    return s_red, theta_red


# ---------------------------------------------------------------------------
# Singular curves
# ---------------------------------------------------------------------------


def singular_curve_plus(n_points: int = CURVE_GRID) -> Curve:
    """Reduced S⁺: ``s = 1 - tan θ`` for θ in [0, π/4)."""
    theta = np.linspace(0.0, 0.25 * math.pi, n_points, endpoint=False)
    return Curve(kind="SingularPlus", grid=theta.tolist(), values=(1.0 - np.tan(theta)).tolist(), label="S+")


def singular_curve_minus(lam: float, n_points: int = CURVE_GRID) -> Curve:
    """Reduced S⁻: ``s = tan(θ/λ)`` for θ in [0, λπ/4)."""
    lam = validate_lambda(lam)
    theta = np.linspace(0.0, 0.25 * math.pi * lam, n_points, endpoint=False)
    return Curve(kind="SingularMinus", grid=theta.tolist(), values=np.tan(theta / lam).tolist(), label="S-")
