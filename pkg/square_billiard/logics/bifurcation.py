#!/usr/bin/python
# coding: utf-8 -*-
# pylint: disable=too-many-arguments
# pylint: disable=too-many-locals
"""Bifurcation constants, basins of the parabolic attractor and regimes.

The three constants split (0, 1) into four regimes:

- ``λ₂``: root of ``h_λ(λθ_λ) = tan θ_λ``; homoclinic intersections of
  ``p_λ`` exist exactly below it and Δ traps above it.
- ``λ₁``: root of ``Σ_{i≥0} tan(π/2 λ^{i+1} (1-λ)) = 1``, the limit of the
  decreasing thresholds ``c_n``; S_∞ reaches ``s = 0`` there.
- ``λ₀``: onset of an open basin outside the basin of P. It has no
  equation; it is bracketed by bisection on a basin-fraction predicate.

Points are classified by iterating until they enter B, the region below
S_∞, which flows to P without ever leaving M1.
"""

from __future__ import annotations

import time
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from square_billiard.defaults import (
    BASIN_GRID,
    BASIN_ITER,
    BASIN_THRESHOLD,
    BOUNDARY_TIE,
    CN_TABLE_SIZE,
    HALF_PI,
    LAMBDA0_BRACKET,
    LAMBDA0_MAX_WIDENING,
    LAMBDA0_PUBLISHED,
    LAMBDA0_WIDTH,
    LAMBDA1_BRACKET,
    LAMBDA2_BRACKET,
    ROOT_MAXITER,
    ROOT_XTOL,
    TOL_SERIES,
    TOL_SING,
)
from square_billiard.exceptions import BilliardError, BracketError, DomainError
from square_billiard.helpers import run_ordered
from square_billiard.logics.core_maps import SINGULAR, reduced_map_array, validate_lambda
from square_billiard.logics.invariant_structures import SigmaTable, homoclinic_margins, sigma_curve, sigma_partial
from square_billiard.logics.periodic_orbits import (
    cn_threshold_meta,
    periodic_stable_graph,
    solve_pn,
    solve_qn,
    unstable_extent,
)
from square_billiard.models.orbit import OrbitNonexistence
from square_billiard.models.reports import (
    BASIN_CODES,
    BasinReport,
    BifurcationConstants,
    Lambda0Estimate,
    RegimeClassification,
    SolverMeta,
)
from square_billiard.models.types import ProbeTarget, Regime

Extent = Tuple[float, float, float, float]
GridSpec = Union[int, Tuple[int, int]]

FULL_EXTENT: Extent = (0.0, 1.0, 0.0, HALF_PI)


# ---------------------------------------------------------------------------
# λ₁ and λ₂
# ---------------------------------------------------------------------------


def _bracketed_root(
    func: Callable[[float], float], bracket: Tuple[float, float], name: str, xtol: float = ROOT_XTOL
) -> Tuple[float, SolverMeta]:
    low, high = bracket
    f_low, f_high = func(low), func(high)
    if f_low * f_high > 0.0:
        raise BracketError(f"{name}: no sign change on [{low}, {high}] (f={f_low:.3e}, {f_high:.3e})")
    value, info = brentq(func, low, high, xtol=xtol, maxiter=ROOT_MAXITER, full_output=True)
    residual = abs(func(value))
    logger.debug(f"{name} = {value:.17g} after {info.iterations} iterations, residual {residual:.3e}")
    meta = SolverMeta(
        iterations=info.iterations, function_calls=info.function_calls, residual=residual, converged=bool(info.converged)
    )
    return float(value), meta


def lambda2_equation(lam: float, tol_series: float = TOL_SERIES) -> float:
    """``F(λ) = h_λ(λθ_λ) - tan θ_λ``, strictly decreasing on (0, 1)."""
    return homoclinic_margins(lam, tol_series)[0]


def lambda1_equation(lam: float, tol_series: float = TOL_SERIES) -> float:
    """``G(λ) = Σ_{i≥0} tan(π/2 λ^{i+1} (1-λ)) - 1``, i.e. ``-σ(πλ(1-λ)/2)``."""
    return -sigma_curve(HALF_PI * lam * (1.0 - lam), lam, tol_series).value


def solve_lambda2_meta(bracket: Tuple[float, float] = LAMBDA2_BRACKET) -> Tuple[float, SolverMeta]:
    """λ₂ with solver diagnostics.

    Raises
    ------
    BracketError
        When ``F`` does not change sign over ``bracket``.
    """
    return _bracketed_root(lambda2_equation, bracket, "lambda2")


def solve_lambda2(bracket: Tuple[float, float] = LAMBDA2_BRACKET) -> float:
    """Unique root λ₂ ≈ 0.8736 of ``h_λ(λθ_λ) = tan θ_λ``."""
    return solve_lambda2_meta(bracket)[0]


def solve_lambda1_meta(bracket: Tuple[float, float] = LAMBDA1_BRACKET) -> Tuple[float, SolverMeta]:
    """λ₁ with solver diagnostics.

    Raises
    ------
    BracketError
        When ``G`` does not change sign over ``bracket``.
    """
    return _bracketed_root(lambda1_equation, bracket, "lambda1")


def solve_lambda1(bracket: Tuple[float, float] = LAMBDA1_BRACKET) -> float:
    """Unique root λ₁ ≈ 0.6218 of ``Σ tan(π/2 λ^{i+1} (1-λ)) = 1``."""
    return solve_lambda1_meta(bracket)[0]


# ---------------------------------------------------------------------------
# Basin of P
# ---------------------------------------------------------------------------


def cell_centres(n: int, low: float, high: float) -> np.ndarray:
    """Centres of ``n`` equal cells of ``[low, high]``."""
    step = (high - low) / n
    return low + step * (np.arange(n) + 0.5)


def _classify_rows(
    rows: Tuple[int, int], lam: float, n_s: int, n_theta: int, extent: Extent, n_iter: int, tol_sing: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Labels and escape steps for angle rows ``rows[0]:rows[1]``."""
    s_axis = cell_centres(n_s, extent[0], extent[1])
    theta_axis = cell_centres(n_theta, extent[2], extent[3])[rows[0] : rows[1]]
    theta, s = np.meshgrid(theta_axis, s_axis, indexing="ij")
    s, theta = s.ravel(), theta.ravel()
    labels = np.full(s.size, BASIN_CODES["Bounded"], dtype=np.uint8)
    escape = np.full(s.size, -1, dtype=np.int64)
    table = SigmaTable(lam)
    active = np.arange(s.size)
    for k in range(n_iter + 1):
        if active.size == 0:
            break
        captured = table.in_b(s, theta)
        labels[active[captured]] = BASIN_CODES["ToP"]
        escape[active[captured]] = k
        active, s, theta = active[~captured], s[~captured], theta[~captured]
        if k == n_iter:
            break
        s, theta, code = reduced_map_array(s, theta, lam, tol_sing)
        dead = code == SINGULAR
        labels[active[dead]] = BASIN_CODES["Singular"]
        active, s, theta = active[~dead], s[~dead], theta[~dead]
    shape = (rows[1] - rows[0], n_s)
    return labels.reshape(shape), escape.reshape(shape)


def _grid_shape(grid: GridSpec) -> Tuple[int, int]:
    n_s, n_theta = (grid, grid) if isinstance(grid, int) else grid
    if n_s < 2 or n_theta < 2:
        raise DomainError(f"grid {n_s}x{n_theta} must be at least 2x2")
    return n_s, n_theta


def basin_of_P(
    lam: float,
    grid: GridSpec = BASIN_GRID,
    n_iter: int = BASIN_ITER,
    extent: Extent = FULL_EXTENT,
    workers: int = 1,
    tol_sing: float = TOL_SING,
    show_progress: bool = False,
) -> BasinReport:
    """Classify a cell-centred grid of initial conditions.

    Each cell is ToP when its orbit enters B within ``n_iter`` steps,
    Singular when it reaches S⁺ first, Bounded otherwise. Rows of the grid
    are split among ``workers`` processes; the report does not depend on
    the split.

    Parameters
    ----------
    grid : int | Tuple[int, int]
        ``n`` for an n×n grid, or ``(n_s, n_theta)``.
    extent : Tuple[float, float, float, float]
        ``(s_min, s_max, θ_min, θ_max)``.
    """
    lam = validate_lambda(lam)
    n_s, n_theta = _grid_shape(grid)
    if n_iter < 1:
        raise DomainError(f"n_iter={n_iter} must be positive")
    chunks = max(1, min(workers, n_theta))
    edges = np.linspace(0, n_theta, chunks + 1).astype(int)
    tasks = [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    worker = partial(_classify_rows, lam=lam, n_s=n_s, n_theta=n_theta, extent=extent, n_iter=n_iter, tol_sing=tol_sing)
    parts = run_ordered(worker, tasks, workers=workers, label=f"basin λ={lam:g}", show_progress=show_progress)
    labels = np.vstack([part[0] for part in parts])
    escape = np.vstack([part[1] for part in parts])
    total = labels.size
    counts = np.bincount(labels.ravel(), minlength=len(BASIN_CODES))
    escaped = escape[escape >= 0]
    histogram = np.bincount(escaped).tolist() if escaped.size else []
    report = BasinReport(
        lam=lam,
        n_s=n_s,
        n_theta=n_theta,
        extent=extent,
        n_iter=n_iter,
        fraction_to_P=counts[BASIN_CODES["ToP"]] / total,
        fraction_bounded=counts[BASIN_CODES["Bounded"]] / total,
        fraction_singular=counts[BASIN_CODES["Singular"]] / total,
        escape_histogram=histogram,
        labels=labels,
        escape_steps=escape,
    )
    logger.info(
        f"basin at lambda={lam}: ToP {report.fraction_to_P:.6f}, "
        f"Bounded {report.fraction_bounded:.6f}, Singular {report.fraction_singular:.6f}"
    )
    return report


def bounded_fraction(lam: float, grid: GridSpec = BASIN_GRID, n_iter: int = BASIN_ITER, workers: int = 1) -> float:
    """Fraction of the grid that neither reaches B nor dies within ``n_iter`` steps."""
    return basin_of_P(lam, grid, n_iter, workers=workers).fraction_bounded


# ---------------------------------------------------------------------------
# λ₀
# ---------------------------------------------------------------------------


def estimate_lambda0(
    bracket: Tuple[float, float] = LAMBDA0_BRACKET,
    grid: GridSpec = BASIN_GRID,
    n_iter: int = BASIN_ITER,
    threshold: float = BASIN_THRESHOLD,
    width: float = LAMBDA0_WIDTH,
    max_widening: int = LAMBDA0_MAX_WIDENING,
    workers: int = 1,
    fraction: Optional[Callable[[float], float]] = None,
) -> Lambda0Estimate:
    """Bracket λ₀ by bisection on ``bounded_fraction(λ) > threshold``.

    The predicate must be false at the low end and true at the high end.
    An end that fails is pushed outward by the bracket width, at most
    ``max_widening`` times in total. The predicate is empirical: when the
    evaluated points are not monotone the estimate is still returned, with
    ``monotone=False`` and a warning.

    Parameters
    ----------
    fraction : Callable[[float], float], optional
        Replacement for :func:`bounded_fraction` at fixed grid settings.

    Raises
    ------
    BracketError
        When no sign change is found after ``max_widening`` widenings.
    """
    if fraction is None:
        fraction = partial(bounded_fraction, grid=grid, n_iter=n_iter, workers=workers)
    evaluations: Dict[float, float] = {}

    def attracting(lam: float) -> bool:
        if lam not in evaluations:
            evaluations[lam] = fraction(lam)
            logger.debug(f"bounded fraction at lambda={lam:.6f}: {evaluations[lam]:.6f}")
        return evaluations[lam] > threshold

    low, high = bracket
    widenings = 0
    while attracting(low) or not attracting(high):
        if widenings == max_widening:
            raise BracketError(f"no basin dichotomy in [{low}, {high}] after {widenings} widenings")
        span = high - low
        if attracting(low):
            low = max(low - span, 1e-3)
        if not attracting(high):
            high = min(high + span, 0.999)
        widenings += 1
        logger.warning(f"lambda0 bracket widened to [{low}, {high}]")
    while high - low > width:
        middle = 0.5 * (low + high)
        if attracting(middle):
            high = middle
        else:
            low = middle
    ordered = sorted(evaluations.items())
    flags = [value > threshold for _, value in ordered]
    monotone = all(not before or after for before, after in zip(flags, flags[1:]))
    if not monotone:
        logger.warning("basin predicate is not monotone over the evaluated values of lambda")
    logger.info(f"lambda0 in [{low:.6f}, {high:.6f}] from {len(ordered)} basin evaluations")
    return Lambda0Estimate(low=low, high=high, evaluations=ordered, widenings=widenings, monotone=monotone)


# ---------------------------------------------------------------------------
# Constants report
# ---------------------------------------------------------------------------


def _timed(func: Callable[[], Tuple[float, SolverMeta]], timings: bool) -> Tuple[float, SolverMeta]:
    start = time.perf_counter()
    value, meta = func()
    if timings:
        meta = meta.model_copy(update={"wall_time": time.perf_counter() - start})
    return value, meta


def compute_constants(
    n_max: int = CN_TABLE_SIZE,
    skip_lambda0: bool = False,
    lambda0_bracket: Tuple[float, float] = LAMBDA0_BRACKET,
    grid: GridSpec = BASIN_GRID,
    n_iter: int = BASIN_ITER,
    threshold: float = BASIN_THRESHOLD,
    workers: int = 1,
    timings: bool = False,
) -> BifurcationConstants:
    """Compute λ₁, λ₂, the ``c_n`` table for ``n = 1..n_max`` and a λ₀ bracket.

    ``c_n`` and λ₀ failures are recorded in ``solver_meta`` and the run
    continues; λ₀ then falls back to the published bracket. With
    ``skip_lambda0`` the published bracket is used directly.

    Raises
    ------
    BracketError
        When λ₁ or λ₂ cannot be bracketed; every other entry depends on them.
    """
    meta: Dict[str, SolverMeta] = {}
    lambda2, meta["lambda2"] = _timed(solve_lambda2_meta, timings)
    lambda1, meta["lambda1"] = _timed(solve_lambda1_meta, timings)
    cn_table: List[Tuple[int, float]] = []
    cn_bracket = (lambda1 - 0.05, lambda2)
    for n in range(1, n_max + 1):
        try:
            value, meta[f"c{n}"] = _timed(partial(cn_threshold_meta, n, cn_bracket), timings)
        except BilliardError as error:
            logger.error(f"c_{n}: {error}")
            meta[f"c{n}"] = SolverMeta(converged=False, error=str(error))
            continue
        cn_table.append((n, value))
    source = "published"
    bracket = LAMBDA0_PUBLISHED
    if not skip_lambda0:
        start = time.perf_counter()
        try:
            estimate = estimate_lambda0(lambda0_bracket, grid, n_iter, threshold, workers=workers)
        except BilliardError as error:
            logger.error(f"lambda0: {error}; using the published bracket")
            meta["lambda0"] = SolverMeta(converged=False, error=str(error))
        else:
            bracket, source = (estimate.low, estimate.high), "estimated"
            meta["lambda0"] = SolverMeta(
                iterations=len(estimate.evaluations),
                function_calls=len(estimate.evaluations),
                residual=estimate.width,
                converged=estimate.monotone,
                wall_time=time.perf_counter() - start if timings else None,
            )
    return BifurcationConstants(
        lambda0_bracket=bracket,
        lambda0_source=source,
        lambda1=lambda1,
        lambda2=lambda2,
        cn_table=cn_table,
        solver_meta=meta,
    )


def regime_classify(lam: float, constants: BifurcationConstants, tie: float = BOUNDARY_TIE) -> RegimeClassification:
    """Place λ among the four regimes delimited by λ₀ (bracket midpoint), λ₁ and λ₂.

    ``boundary`` is set when λ is within ``tie`` of one of the constants.
    """
    lam = validate_lambda(lam)
    cuts = (constants.lambda0, constants.lambda1, constants.lambda2)
    regimes: Sequence[Regime] = ("BelowL0", "L0toL1", "L1toL2", "AboveL2")
    index = sum(lam >= cut for cut in cuts)
    boundary = any(abs(lam - cut) <= tie for cut in cuts)
    return RegimeClassification(lam=lam, regime=regimes[index], boundary=boundary)


# ---------------------------------------------------------------------------
# Periodic families and heteroclinic probes
# ---------------------------------------------------------------------------


def q_count(lam: float, n_max: int) -> int:
    """Number of ``n ∈ 1..n_max`` for which ``q_n`` exists."""
    return sum(not isinstance(solve_qn(n, lam), OrbitNonexistence) for n in range(1, n_max + 1))


def p_count(lam: float, n_max: int) -> int:
    """Number of ``n ∈ 1..n_max`` for which ``p_n`` exists."""
    return sum(not isinstance(solve_pn(n, lam), OrbitNonexistence) for n in range(1, n_max + 1))


def heteroclinic_probe(lam: float, n: int, m: Optional[int] = None, target: ProbeTarget = "B") -> bool:
    """Does the horizontal unstable piece of ``q_n`` meet B or ``W^s_loc(q_m)``?

    The piece joins ``(0, θ_n)`` to ``q_n`` and reaches ``s = 1`` when
    ``θ_n > πλ/4``. It meets B exactly when ``σ(θ_n) > 0``, and the stable
    graph of ``q_m`` when ``w_m(θ_n)`` falls inside it.

    Raises
    ------
    DomainError
        When ``q_n`` (or ``q_m``) does not exist at λ.
    """
    lam = validate_lambda(lam)
    source = solve_qn(n, lam)
    if isinstance(source, OrbitNonexistence):
        raise DomainError(f"q_{n} does not exist at lambda={lam}: {source.reason}")
    s_n, theta_n = source.points[0].as_tuple()
    if target == "B":
        crossing = sigma_curve(theta_n, lam).inside
        logger.debug(f"W^u(q_{n}) meets B at lambda={lam}: {crossing}")
        return crossing
    if m is None:
        raise DomainError("target 'q' needs m")
    other = solve_qn(m, lam)
    if isinstance(other, OrbitNonexistence):
        raise DomainError(f"q_{m} does not exist at lambda={lam}: {other.reason}")
    value = periodic_stable_graph(theta_n, lam, m).value
    low, high = sigma_partial(theta_n, lam, m + 1), sigma_partial(theta_n, lam, m)
    if not low < value < high:
        logger.warning(f"stable graph of q_{m} at theta={theta_n:.6g} is outside its strip ({low:.6g}, {high:.6g})")
    return 0.0 < value <= unstable_extent(s_n, theta_n, lam)
