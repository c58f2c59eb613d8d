#!/usr/bin/python
# coding: utf-8 -*-
# pylint: disable=too-many-arguments
# pylint: disable=too-many-locals
"""Orbit tracing, attractor sampling and parameter sweeps.

These are the computations behind the ``orbit``, ``attractor`` and ``scan``
commands. Ensembles draw their initial conditions once, in the parent
process, from ``numpy.random.default_rng(seed)`` (PCG64), then split them
among workers; results are merged in input order so that a given seed
always produces the same sample.
"""

from __future__ import annotations

from functools import partial
from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger
from numpy.random import default_rng

from square_billiard import MSG_EMPTY_ATTRACTOR
from square_billiard.defaults import (
    ATTRACTOR_ITER,
    HALF_PI,
    N_INITIAL,
    ORBIT_STEPS,
    SCAN_GRID,
    SCAN_ITER,
    SCAN_N_MAX,
    SEED,
    TOL_SING,
    TRANSIENT,
)
from square_billiard.exceptions import BilliardError, SingularPointError
from square_billiard.helpers import run_ordered
from square_billiard.logics.bifurcation import basin_of_P, p_count, q_count, regime_classify
from square_billiard.logics.core_maps import (
    SINGULAR,
    classify_full,
    classify_reduced,
    full_step,
    reduced_map_array,
    reduced_step,
    validate_lambda,
)
from square_billiard.logics.invariant_structures import SigmaTable, homoclinic_test
from square_billiard.models.points import FullPoint, ReducedPoint
from square_billiard.models.reports import AttractorSample, BifurcationConstants, OrbitRow, OrbitTrace, ScanRow
from square_billiard.models.types import MapKind
from square_billiard.tools import exc_to_str


def iterate_orbit(
    lam: float, s0: float, theta0: float, steps: int = ORBIT_STEPS, map_kind: MapKind = "reduced", tol_sing: float = TOL_SING
) -> OrbitTrace:
    """Iterates ``0..steps`` of the orbit of ``(s0, θ0)`` under φ_λ or Φ_λ.

    Row ``k`` holds the k-th iterate and the branch applied to it. When an
    iterate lands on S⁺ the trace stops there with status ``"singular"``.

    Raises
    ------
    ValueError
        When the initial point is outside the phase space of ``map_kind``.
    """
    lam = validate_lambda(lam)
    if map_kind == "reduced":
        start: ReducedPoint | FullPoint = ReducedPoint(s=s0, theta=theta0)
        step, classify = reduced_step, classify_reduced
    else:
        start = FullPoint(s=s0, theta=theta0)
        step, classify = full_step, classify_full
    s, theta = start.s, start.theta
    rows: List[OrbitRow] = []
    for k in range(steps):
        try:
            s1, theta1, branch, _, _ = step(s, theta, lam, tol_sing)
        except SingularPointError:
            rows.append(OrbitRow(index=k, s=s, theta=theta, branch="OnSingularPlus"))
            logger.warning(f"orbit of ({s0}, {theta0}) reaches S+ at iterate {k}")
            return OrbitTrace(lam=lam, map=map_kind, rows=rows, status="singular")
        rows.append(OrbitRow(index=k, s=s, theta=theta, branch=branch))
        s, theta = s1, theta1
    last = type(start).model_construct(s=s, theta=theta)
    rows.append(OrbitRow(index=steps, s=s, theta=theta, branch=classify(last, tol_sing)))
    return OrbitTrace(lam=lam, map=map_kind, rows=rows)


def _attractor_chunk(
    start: Tuple[np.ndarray, np.ndarray], lam: float, n_iter: int, transient: int, tol_sing: float
) -> Tuple[np.ndarray, np.ndarray, int, int]:
    """Run one batch of orbits; returns recorded survivors and capture/death counts."""
    s, theta = (np.array(values, dtype=float) for values in start)
    count = s.size
    table = SigmaTable(lam)
    alive = np.ones(count, dtype=bool)
    captured = np.zeros(count, dtype=bool)
    singular = np.zeros(count, dtype=bool)
    record_s = np.empty((count, n_iter))
    record_theta = np.empty((count, n_iter))
    for k in range(transient + n_iter):
        index = np.flatnonzero(alive)
        if index.size == 0:
            break
        inside = table.in_b(s[index], theta[index])
        captured[index[inside]] = True
        alive[index[inside]] = False
        index = index[~inside]
        if k >= transient:
            record_s[index, k - transient] = s[index]
            record_theta[index, k - transient] = theta[index]
        s_next, theta_next, code = reduced_map_array(s[index], theta[index], lam, tol_sing)
        dead = code == SINGULAR
        singular[index[dead]] = True
        alive[index[dead]] = False
        s[index], theta[index] = s_next, theta_next
    return record_s[alive].ravel(), record_theta[alive].ravel(), int(captured.sum()), int(singular.sum())


def sample_attractor(
    lam: float,
    n_initial: int = N_INITIAL,
    n_iter: int = ATTRACTOR_ITER,
    transient: int = TRANSIENT,
    seed: int = SEED,
    workers: int = 1,
    tol_sing: float = TOL_SING,
    show_progress: bool = False,
) -> AttractorSample:
    """Sample the attractor away from P.

    ``n_initial`` points are drawn uniformly in M. Each orbit is iterated
    for ``transient + n_iter`` steps; orbits that enter B or hit S⁺ are
    discarded, and the last ``n_iter`` iterates of the others are kept.
    """
    lam = validate_lambda(lam)
    rng = default_rng(seed)
    s0 = rng.random(n_initial)
    theta0 = HALF_PI * rng.random(n_initial)
    chunks = max(1, min(workers, n_initial))
    edges = np.linspace(0, n_initial, chunks + 1).astype(int)
    tasks = [(s0[a:b], theta0[a:b]) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    worker = partial(_attractor_chunk, lam=lam, n_iter=n_iter, transient=transient, tol_sing=tol_sing)
    parts = run_ordered(worker, tasks, workers=workers, label=f"attractor λ={lam:g}", show_progress=show_progress)
    s = np.concatenate([part[0] for part in parts]) if parts else np.empty(0)
    theta = np.concatenate([part[1] for part in parts]) if parts else np.empty(0)
    n_captured = sum(part[2] for part in parts)
    n_singular = sum(part[3] for part in parts)
    sample = AttractorSample(
        lam=lam,
        s=s,
        theta=theta,
        seed=seed,
        n_initial=n_initial,
        n_iter=n_iter,
        transient=transient,
        n_survivors=n_initial - n_captured - n_singular,
        n_captured=n_captured,
        n_singular=n_singular,
    )
    if sample.empty:
        logger.warning(f"{MSG_EMPTY_ATTRACTOR} (lambda={lam})")
    else:
        logger.info(f"attractor at lambda={lam}: {sample.n_survivors}/{n_initial} orbits survive")
    return sample


def scan_row(
    lam: float,
    constants: BifurcationConstants,
    n_max: int = SCAN_N_MAX,
    grid: int = SCAN_GRID,
    n_iter: int = SCAN_ITER,
    seed: int = SEED,
) -> ScanRow:
    """Summary of the dynamics at one λ; a failure fills the ``error`` column."""
    try:
        regime = regime_classify(lam, constants).regime
        basin = basin_of_P(lam, grid, n_iter)
        sample = sample_attractor(lam, n_initial=grid, n_iter=max(1, n_iter // 2), transient=n_iter // 2, seed=seed)
        homoclinic = homoclinic_test(lam)[0]
        return ScanRow(
            lam=lam,
            regime=regime,
            fraction_to_P=basin.fraction_to_P,
            attractor_nonempty=not sample.empty,
            homoclinic=homoclinic,
            q_count=q_count(lam, n_max),
            p_count=p_count(lam, n_max),
        )
    except BilliardError as error:
        logger.error(f"scan at lambda={lam}: {exc_to_str(error)}")
        return ScanRow(lam=lam, error=exc_to_str(error))


def scan_lambdas(low: float, high: float, step: float) -> List[float]:
    """Values ``low, low + step, ...`` up to ``high`` inclusive, rounded to 12 digits."""
    count = int(np.floor((high - low) / step + 1e-9)) + 1
    return [round(low + k * step, 12) for k in range(count)]


def scan(
    lambdas: Sequence[float],
    constants: BifurcationConstants,
    n_max: int = SCAN_N_MAX,
    grid: int = SCAN_GRID,
    n_iter: int = SCAN_ITER,
    seed: int = SEED,
    workers: int = 1,
    show_progress: bool = False,
) -> List[ScanRow]:
    """Run :func:`scan_row` over ``lambdas``; rows come back in input order."""
    worker = partial(scan_row, constants=constants, n_max=n_max, grid=grid, n_iter=n_iter, seed=seed)
    return run_ordered(worker, list(lambdas), workers=workers, label="scan", show_progress=show_progress)
