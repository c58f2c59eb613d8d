#!/usr/bin/python
# coding: utf-8 -*-
# pylint: disable=too-many-locals
"""Invariant curves and regions of the reduced map.

The hyperbolic fixed point ``p_λ = (s_λ, θ_λ)`` has ``θ_λ = πλ / (2(1+λ))``,
the fixed point of the affine contraction ``g(θ) = λ(π/2 - θ)``. Its local
stable manifold is the graph ``s = h_λ(θ)`` of::

    h_λ(θ) = Σ_{n≥0} (-1)ⁿ Π_{i<n} tan(gⁱ(θ))

which is the fixed point of the graph transform
``Γ(h)(θ) = 1 - h(g(θ)) tan θ``. Its local unstable manifold is the
horizontal line ``θ = θ_λ``.

Points below ``S_∞ = graph(σ)``, with ``σ(θ) = 1 - Σ_{i≥0} tan(λⁱθ)``, form the
region B that flows straight into the parabolic line ``θ = 0``.

Every series is summed until a rigorous bound on its tail falls below
``tol_series``.
"""

from __future__ import annotations

import math
from typing import Callable, List, Tuple, Union

import numpy as np
from loguru import logger
from numpy.random import default_rng
from numpy.typing import NDArray
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from square_billiard.defaults import (
    ANGLE_GUARD,
    CURVE_GRID,
    DELTA_MARGIN,
    HALF_PI,
    MAX_DEPTH,
    MIN_SEGMENT,
    ROOT_XTOL,
    SEED,
    SERIES_MAX_TERMS,
    SERIES_OVERFLOW,
    SIGMA_TABLE_BAND,
    SIGMA_TABLE_SIZE,
    TOL_SERIES,
    TOL_SING,
)
from square_billiard.exceptions import DomainError, InterpolationRangeError, SeriesConvergenceError
from square_billiard.logics.core_maps import BRANCH_F1, BRANCH_F2, reduced_inverse_array, validate_lambda
from square_billiard.models.curves import Curve, SegmentFamily, SeriesEval, SigmaEval
from square_billiard.models.reports import DeltaTrappingReport

FloatArray = NDArray[np.float64]
ArrayLike = Union[float, FloatArray]


def theta_lambda(lam: float) -> float:
    """Angle of the hyperbolic fixed point: ``πλ / (2(1+λ))``."""
    return math.pi * lam / (2.0 * (1.0 + lam))


def s_lambda(lam: float) -> float:
    """Position of the hyperbolic fixed point: ``1 / (1 + tan θ_λ)``."""
    return 1.0 / (1.0 + math.tan(theta_lambda(lam)))


def g_contract(theta: ArrayLike, lam: float) -> ArrayLike:
    """Affine contraction ``g(θ) = λ(π/2 - θ)``."""
    return lam * (HALF_PI - theta)


def g_power(theta: ArrayLike, k: int, lam: float) -> ArrayLike:
    """k-fold composition ``gᵏ(θ) = θ_λ + (-λ)ᵏ (θ - θ_λ)``."""
    fixed = theta_lambda(lam)
    return fixed + (-lam) ** k * (theta - fixed)


def _check_theta(theta: float) -> None:
    if not math.isfinite(theta) or theta < 0.0 or theta >= HALF_PI:
        raise DomainError(f"theta={theta!r} is outside [0, π/2)")


# ---------------------------------------------------------------------------
# Stable manifold series
# ---------------------------------------------------------------------------


def h_lambda(theta: float, lam: float, tol_series: float = TOL_SERIES, max_terms: int = SERIES_MAX_TERMS) -> SeriesEval:
    """Evaluate the stable manifold graph ``h_λ(θ)``.

    After term ``n`` every later factor ``tan(gᵏθ)`` is bounded by
    ``r = tan(θ_λ + |gⁿθ - θ_λ|)``, so once ``r < 1`` the remainder is at most
    ``|Πₙ| r / (1 - r)``.

    Raises
    ------
    DomainError
        When θ is outside [0, π/2) or λ outside (0, 1).
    SeriesConvergenceError
        When a partial product overflows before the factors contract, or the
        term budget runs out.
    """
    lam = validate_lambda(lam)
    _check_theta(theta)
    fixed = theta_lambda(lam)
    value, product, sign, x = 1.0, 1.0, 1.0, theta
    for n in range(1, max_terms + 1):
        product *= math.tan(x)
        sign = -sign
        value += sign * product
        x = lam * (HALF_PI - x)
        if product == 0.0:
            return SeriesEval(value=value, terms_used=n + 1, tail_bound=0.0)
        if product > SERIES_OVERFLOW:
            raise SeriesConvergenceError(f"h_lambda partial product overflows at theta={theta!r}")
        reach = fixed + abs(x - fixed)
        if reach < HALF_PI:
            ratio = math.tan(reach)
            if ratio < 1.0:
                tail = product * ratio / (1.0 - ratio)
                if tail < tol_series:
                    return SeriesEval(value=value, terms_used=n + 1, tail_bound=tail)
    raise SeriesConvergenceError(f"h_lambda did not converge in {max_terms} terms at theta={theta!r}")


def h_lambda_values(theta: FloatArray, lam: float, tol_series: float = TOL_SERIES, max_terms: int = SERIES_MAX_TERMS) -> FloatArray:
    """Vectorized ``h_λ`` over an array of angles in [0, π/2)."""
    lam = validate_lambda(lam)
    theta = np.asarray(theta, dtype=float)
    if theta.size == 0:
        return theta.copy()
    if np.any((theta < 0.0) | (theta >= HALF_PI)) or not np.all(np.isfinite(theta)):
        raise DomainError("angles must lie in [0, π/2)")
    fixed = theta_lambda(lam)
    value = np.ones_like(theta)
    product = np.ones_like(theta)
    x = theta.copy()
    sign = 1.0
    for _ in range(max_terms):
        product = product * np.tan(x)
        sign = -sign
        value += sign * product
        x = lam * (HALF_PI - x)
        if np.any(product > SERIES_OVERFLOW):
            raise SeriesConvergenceError("h_lambda partial product overflows")
        reach = fixed + np.abs(x - fixed)
        with np.errstate(invalid="ignore"):
            ratio = np.where(reach < HALF_PI, np.tan(np.minimum(reach, HALF_PI - ANGLE_GUARD)), np.inf)
            tail = np.where(product == 0.0, 0.0, np.where(ratio < 1.0, product * ratio / (1.0 - ratio), np.inf))
        if np.all(tail < tol_series):
            return value
    raise SeriesConvergenceError(f"h_lambda did not converge in {max_terms} terms")


def h_prime_fixed_point(lam: float) -> float:
    """Closed-form slope of the stable manifold at the fixed point.

    ``h'_λ(θ_λ) = -sec²θ_λ / ((1 - λ tan θ_λ)(1 + tan θ_λ))``.
    """
    lam = validate_lambda(lam)
    tan_fixed = math.tan(theta_lambda(lam))
    return -(1.0 + tan_fixed**2) / ((1.0 - lam * tan_fixed) * (1.0 + tan_fixed))


def stable_manifold_interval(lam: float, tol_series: float = TOL_SERIES) -> Tuple[float, float]:
    """Angles where the stable graph stays inside the phase space (``0 < h_λ < 1``).

    With ``θ*`` the first zero of ``h_λ`` above ``θ_λ`` the interval is
    ``(max(0, π/2 - θ*/λ), θ*)``: the functional equation gives ``h_λ(θ) < 1``
    exactly where ``h_λ(g(θ)) > 0``.
    """
    lam = validate_lambda(lam)
    fixed = theta_lambda(lam)
    upper = HALF_PI - 1e-6
    grid = np.linspace(fixed, upper, 257)
    values = h_lambda_values(grid, lam, tol_series)
    negative = np.flatnonzero(values <= 0.0)
    if negative.size == 0:
        zero = upper
    else:
        k = int(negative[0])
        zero = float(brentq(lambda t: h_lambda(t, lam, tol_series).value, grid[k - 1], grid[k], xtol=ROOT_XTOL))
    low = max(0.0, HALF_PI - zero / lam)
    logger.debug(f"stable graph valid on ({low:.12g}, {zero:.12g}) at lambda={lam}")
    return low, zero


def stable_manifold_curve(lam: float, n_points: int = CURVE_GRID, tol_series: float = TOL_SERIES) -> Curve:
    """Sampled local stable manifold of ``p_λ`` over its valid interval."""
    low, high = stable_manifold_interval(lam, tol_series)
    theta = np.linspace(low, high, n_points + 2)[1:-1]
    return Curve(kind="StableLocal", grid=theta.tolist(), values=h_lambda_values(theta, lam, tol_series).tolist(), label="Ws_loc(p)")


# ---------------------------------------------------------------------------
# Graph transform
# ---------------------------------------------------------------------------


def graph_transform_function(h: Callable[[FloatArray], FloatArray], lam: float) -> Callable[[FloatArray], FloatArray]:
    """Graph transform of a callable: ``θ ↦ 1 - h(g(θ)) tan θ``."""
    lam = validate_lambda(lam)

    def transformed(theta: FloatArray) -> FloatArray:
        theta = np.asarray(theta, dtype=float)
        return 1.0 - h(lam * (HALF_PI - theta)) * np.tan(theta)

    return transformed


def zero_curve(n_points: int = CURVE_GRID) -> Curve:
    """The zero function on a uniform grid of [0, π/2)."""
    theta = np.linspace(0.0, HALF_PI, n_points, endpoint=False)
    return Curve(kind="GraphTransform", grid=theta.tolist(), values=[0.0] * n_points, depth=0, label="zero")


def graph_transform(h: Curve, lam: float) -> Curve:
    """Graph transform of a sampled curve, interpolated by monotone cubics.

    Raises
    ------
    InterpolationRangeError
        When some ``g(θ)`` of the grid falls outside the curve's grid.
    """
    lam = validate_lambda(lam)
    if h.parameter != "theta":
        raise DomainError("graph transform needs a curve parametrized by theta")
    grid = np.asarray(h.grid)
    image = lam * (HALF_PI - grid)
    if image.min() < grid[0] or image.max() > grid[-1]:
        raise InterpolationRangeError(
            f"g maps the grid to [{image.min():.6g}, {image.max():.6g}], outside [{grid[0]:.6g}, {grid[-1]:.6g}]"
        )
    interpolant = PchipInterpolator(grid, np.asarray(h.values), extrapolate=False)
    values = 1.0 - interpolant(image) * np.tan(grid)
    depth = None if h.depth is None else h.depth + 1
    return Curve(kind="GraphTransform", grid=h.grid, values=values.tolist(), depth=depth, label=f"Gamma^{depth}")


# ---------------------------------------------------------------------------
# S_∞ and the region B
# ---------------------------------------------------------------------------


def sigma_curve(theta: float, lam: float, tol_series: float = TOL_SERIES, max_terms: int = SERIES_MAX_TERMS) -> SigmaEval:
    """Evaluate ``σ(θ) = 1 - Σ_{i≥0} tan(λⁱθ)``.

    ``tan`` is convex with ``tan 0 = 0``, so ``tan(λx) <= λ tan x`` and the
    remainder after ``n`` terms is at most ``tan(λⁿθ) / (1 - λ)``.
    """
    lam = validate_lambda(lam)
    _check_theta(theta)
    total = 0.0
    x = theta
    for n in range(max_terms):
        tail = math.tan(x) / (1.0 - lam)
        if tail < tol_series:
            value = 1.0 - total
            return SigmaEval(value=value, terms_used=n, tail_bound=tail, inside=value > 0.0)
        total += math.tan(x)
        x *= lam
    raise SeriesConvergenceError(f"sigma did not converge in {max_terms} terms at theta={theta!r}")


def sigma_values(theta: FloatArray, lam: float, tol_series: float = TOL_SERIES, max_terms: int = SERIES_MAX_TERMS) -> FloatArray:
    """Vectorized σ over an array of angles in [0, π/2)."""
    lam = validate_lambda(lam)
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0.0) | (theta >= HALF_PI)) or not np.all(np.isfinite(theta)):
        raise DomainError("angles must lie in [0, π/2)")
    total = np.zeros_like(theta)
    x = theta.copy()
    for _ in range(max_terms):
        terms = np.tan(x)
        if theta.size == 0 or float(terms.max()) / (1.0 - lam) < tol_series:
            return 1.0 - total
        total += terms
        x *= lam
    raise SeriesConvergenceError(f"sigma did not converge in {max_terms} terms")


def sigma_partial(theta: ArrayLike, lam: float, n: int) -> ArrayLike:
    """Partial curve ``σₙ(θ) = 1 - Σ_{i<n} tan(λⁱθ)``; ``σ₀ = 1``.

    The strip ``σ_{m+1} < s < σ_m`` holds the points that take exactly ``m``
    f1-steps before their first f2-step.
    """
    lam = validate_lambda(lam)
    powers = lam ** np.arange(n)
    angles = np.multiply.outer(np.asarray(theta, dtype=float), powers)
    result = 1.0 - np.tan(angles).sum(axis=-1)
    return float(result) if np.ndim(result) == 0 else result


def sigma_partial_curve(lam: float, n: int, n_points: int = CURVE_GRID) -> Curve:
    """Sampled ``σₙ`` over the angles of [0, π/4) where it is positive."""
    theta = np.linspace(0.0, 0.25 * math.pi, n_points, endpoint=False)
    values = np.asarray(sigma_partial(theta, lam, n))
    keep = values > 0.0
    return Curve(kind="SigmaPartial", grid=theta[keep].tolist(), values=values[keep].tolist(), depth=n, label=f"sigma_{n}")


def sigma_zero(lam: float, tol_series: float = TOL_SERIES) -> float:
    """Angle where S_∞ meets ``s = 0``."""
    lam = validate_lambda(lam)
    return float(brentq(lambda t: sigma_curve(t, lam, tol_series).value, 0.0, 0.25 * math.pi, xtol=ROOT_XTOL))


def s_infinity_curve(lam: float, n_points: int = CURVE_GRID, tol_series: float = TOL_SERIES) -> Curve:
    """Sampled S_∞ over the angles where σ is positive."""
    theta = np.linspace(0.0, sigma_zero(lam, tol_series), n_points)
    return Curve(kind="SInfinity", grid=theta.tolist(), values=sigma_values(theta, lam, tol_series).tolist(), label="S_inf")


class GraphTable:
    """Tabulated graph ``s = c(θ)`` with exact evaluation near the graph.

    Linear interpolation on a uniform grid answers "is s below c(θ)?" for
    bulk points; points within ``band`` of the interpolated value are
    re-evaluated with the exact function.

    Attributes
    ----------
    low, high : float
        Tabulated angle range.
    band : float
        Half-width of the exact-evaluation band, larger than the
        interpolation error.
    """

    def __init__(self, exact: Callable[[FloatArray], FloatArray], low: float, high: float, size: int, band: float) -> None:
        self.exact = exact
        self.low = low
        self.high = high
        self.band = band
        self.grid = np.linspace(low, high, size)
        self.table = exact(self.grid)

    def interpolate(self, theta: FloatArray) -> FloatArray:
        """Linear interpolation of the tabulated graph."""
        return np.interp(theta, self.grid, self.table)

    def below(self, s: FloatArray, theta: FloatArray) -> NDArray[np.bool_]:
        """Exact ``s < c(θ)`` for angles inside the table range."""
        s = np.asarray(s, dtype=float)
        theta = np.asarray(theta, dtype=float)
        approx = self.interpolate(theta)
        result = s < approx
        close = np.abs(s - approx) < self.band
        if np.any(close):
            result[close] = s[close] < self.exact(theta[close])
        return result


class SigmaTable(GraphTable):
    """σ tabulated on ``[0, θ₀]``, θ₀ being where S_∞ reaches ``s = 0``.

    Examples
    --------
    >>> table = SigmaTable(0.5)
    >>> table.in_b(np.array([0.2]), np.array([0.1]))
    array([ True])
    """

    def __init__(self, lam: float, size: int = SIGMA_TABLE_SIZE, band: float = SIGMA_TABLE_BAND, tol_series: float = TOL_SERIES) -> None:
        self.lam = validate_lambda(lam)
        self.tol_series = tol_series
        super().__init__(lambda t: sigma_values(t, self.lam, tol_series), 0.0, sigma_zero(self.lam, tol_series), size, band)

    def in_b(self, s: FloatArray, theta: FloatArray) -> NDArray[np.bool_]:
        """Membership in B: ``σ(θ) > 0`` and ``s < σ(θ)``."""
        s = np.asarray(s, dtype=float)
        theta = np.asarray(theta, dtype=float)
        inside = np.zeros(s.shape, dtype=bool)
        candidates = np.isfinite(theta) & (theta < self.high)
        if np.any(candidates):
            inside[candidates] = self.below(s[candidates], theta[candidates])
        return inside


def in_b(s: float, theta: float, lam: float, tol_series: float = TOL_SERIES) -> bool:
    """Exact membership of a single point in B."""
    sigma = sigma_curve(theta, lam, tol_series)
    return sigma.inside and s < sigma.value


# ---------------------------------------------------------------------------
# Trapping region Δ and homoclinic criterion
# ---------------------------------------------------------------------------


def delta_membership(s: float, theta: float, lam: float, margin: float = 0.0, tol_series: float = TOL_SERIES) -> bool:
    """Membership in the trapping region Δ.

    Δ is the pair of opposite sectors cut out by ``W^s_loc = graph(h_λ)`` and
    ``W^u_loc = {θ = θ_λ}``: below the fixed point's angle and to the right
    of the stable graph, or above it and to the left. ``margin > 0`` tests
    the interior with strict inequalities.
    """
    return bool(delta_membership_array(np.array([s]), np.array([theta]), lam, margin, tol_series)[0])


def delta_membership_array(
    s: FloatArray, theta: FloatArray, lam: float, margin: float = 0.0, tol_series: float = TOL_SERIES
) -> NDArray[np.bool_]:
    """Vectorized :func:`delta_membership`."""
    fixed = theta_lambda(lam)
    h = h_lambda_values(theta, lam, tol_series)
    if margin > 0.0:
        lower = (theta < fixed - margin) & (s > h + margin)
        upper = (theta > fixed + margin) & (s < h - margin)
    else:
        lower = (theta <= fixed) & (s >= h)
        upper = (theta >= fixed) & (s <= h)
    return (lower | upper) & (s > 0.0) & (s < 1.0)


def delta_trapping_check(
    lam: float, n_samples: int, seed: int = SEED, margin: float = DELTA_MARGIN, tol_series: float = TOL_SERIES
) -> DeltaTrappingReport:
    """Fraction of uniform samples of Δ∩M1 sent into int(Δ) by f1.

    Candidates are drawn uniformly in the box (0, 1) × [0, π/4) that
    contains M1 and kept when they lie in M1 and in Δ.
    """
    lam = validate_lambda(lam)
    rng = default_rng(seed)
    batch = max(4 * n_samples, 100_000)
    kept_s: List[FloatArray] = []
    kept_theta: List[FloatArray] = []
    count = 0
    h_table = GraphTable(lambda t: h_lambda_values(t, lam, tol_series), 0.0, 0.25 * math.pi, 1 << 14, 1e-6)
    fixed = theta_lambda(lam)
    drawn = 0
    while count < n_samples:
        s = rng.random(batch)
        theta = 0.25 * math.pi * rng.random(batch)
        drawn += batch
        in_m1 = (s > 0.0) & (s + np.tan(theta) < 1.0)
        s, theta = s[in_m1], theta[in_m1]
        below_h = h_table.below(s, theta)
        in_delta = ((theta <= fixed) & ~below_h) | ((theta >= fixed) & below_h)
        kept_s.append(s[in_delta])
        kept_theta.append(theta[in_delta])
        count += int(in_delta.sum())
        if drawn > 10_000 * max(n_samples, 1_000):
            logger.warning(f"Delta∩M1 is too thin at lambda={lam}: {count} samples after {drawn} draws")
            break
    s = np.concatenate(kept_s)[:n_samples]
    theta = np.concatenate(kept_theta)[:n_samples]
    inside = delta_membership_array(s + np.tan(theta), lam * theta, lam, margin, tol_series)
    n_inside = int(inside.sum())
    fraction = n_inside / s.size if s.size else 0.0
    logger.info(f"Delta trapping at lambda={lam}: {n_inside}/{s.size} samples mapped into int(Delta)")
    return DeltaTrappingReport(lam=lam, n_samples=int(s.size), n_inside=n_inside, fraction=fraction, seed=seed)


def homoclinic_margins(lam: float, tol_series: float = TOL_SERIES) -> Tuple[float, float]:
    """Margins ``h_λ(λθ_λ) - tan θ_λ`` and ``1 - h_λ(λθ_λ)``."""
    fixed = theta_lambda(lam)
    value = h_lambda(lam * fixed, lam, tol_series).value
    return value - math.tan(fixed), 1.0 - value


def homoclinic_test(lam: float, tol_series: float = TOL_SERIES) -> Tuple[bool, float, float]:
    """Whether ``tan θ_λ < h_λ(λθ_λ) < 1``: the unstable image of the fixed point crosses its stable graph."""
    lam = validate_lambda(lam)
    first, second = homoclinic_margins(lam, tol_series)
    return first > 0.0 and second > 0.0, first, second


# ---------------------------------------------------------------------------
# Unstable segments and singular preimages
# ---------------------------------------------------------------------------


def _merge(segments: List[Tuple[float, float, float]]) -> List[Tuple[float, float, float]]:
    """Merge overlapping intervals sharing the same angle."""
    merged: List[Tuple[float, float, float]] = []
    for low, high, theta in sorted(segments, key=lambda seg: (seg[2], seg[0])):
        if merged and merged[-1][2] == theta and low <= merged[-1][1]:
            prev_low, prev_high, _ = merged[-1]
            merged[-1] = (prev_low, max(prev_high, high), theta)
        else:
            merged.append((low, high, theta))
    return merged


def unstable_segments(
    lam: float, depth: int, max_depth: int = MAX_DEPTH, min_segment: float = MIN_SEGMENT
) -> SegmentFamily:
    """Local unstable manifold of ``p_λ`` and its forward images.

    Each horizontal segment is cut at the singular point ``s = 1 - tan θ``;
    the f1 piece is translated by ``tan θ`` and the f2 piece is mapped by
    ``s ↦ (1 - s) cot θ`` (orientation reversing).

    Raises
    ------
    DomainError
        When ``depth`` is negative or larger than ``max_depth``.
    """
    lam = validate_lambda(lam)
    if not 0 <= depth <= max_depth:
        raise DomainError(f"depth={depth} must be in [0, {max_depth}]")
    level: List[Tuple[float, float, float]] = [(0.0, 1.0, theta_lambda(lam))]
    curves = [Curve(kind="UnstableLocal", parameter="s", grid=[0.0, 1.0], values=[level[0][2]] * 2, depth=0, label="Wu_loc(p)")]
    dropped = 0
    for k in range(1, depth + 1):
        images: List[Tuple[float, float, float]] = []
        for low, high, theta in level:
            tan_theta = math.tan(theta)
            cut = 1.0 - tan_theta
            if low < cut:
                images.append((low + tan_theta, min(high, cut) + tan_theta, lam * theta))
            if high > cut:
                start = max(low, cut)
                images.append(((1.0 - high) / tan_theta, (1.0 - start) / tan_theta, lam * (HALF_PI - theta)))
        kept = []
        for segment in _merge(images):
            if segment[1] - segment[0] < min_segment:
                dropped += 1
            else:
                kept.append(segment)
        level = kept
        curves += [
            Curve(kind="UnstableLocal", parameter="s", grid=[low, high], values=[theta, theta], depth=k, label=f"Wu^{k}")
            for low, high, theta in level
        ]
    if dropped:
        logger.warning(f"{dropped} unstable segments shorter than {min_segment} dropped at lambda={lam}")
    return SegmentFamily(curves=curves, dropped=dropped)


def singular_preimages(lam: float, depth: int, n_points: int = CURVE_GRID, tol_sing: float = TOL_SING) -> List[Curve]:
    """Preimages ``φ_λ⁻ᵏ(S⁺)`` for ``k = 1..depth``.

    Each back step is monotone in θ on either inverse branch, so pieces
    are split wherever the branch changes and re-sorted by angle.
    """
    lam = validate_lambda(lam)
    theta = np.linspace(0.0, 0.25 * math.pi, n_points + 1)[1:-1]
    pieces: List[Tuple[FloatArray, FloatArray]] = [(1.0 - np.tan(theta), theta)]
    curves: List[Curve] = []
    for k in range(1, depth + 1):
        next_pieces: List[Tuple[FloatArray, FloatArray]] = []
        for s, t in pieces:
            s_prev, t_prev, code = reduced_inverse_array(s, t, lam, tol_sing)
            # start a new piece whenever the inverse branch changes
            boundaries = np.flatnonzero(np.diff(code)) + 1
            for chunk in np.split(np.arange(code.size), boundaries):
                if chunk.size < 2 or code[chunk[0]] not in (BRANCH_F1, BRANCH_F2):
                    continue
                order = np.argsort(t_prev[chunk])
                next_pieces.append((s_prev[chunk][order], t_prev[chunk][order]))
        pieces = next_pieces
        for s, t in pieces:
            inside = (s > 0.0) & (s < 1.0)
            if inside.sum() >= 2 and np.all(np.diff(t[inside]) > 0.0):
                curves.append(
                    Curve(kind="IterateOfSingular", grid=t[inside].tolist(), values=s[inside].tolist(), depth=k, label=f"S+^-{k}")
                )
    return curves
