#!/usr/bin/env python
# coding: utf-8 -*-
# pylint: disable=no-value-for-parameter
# pylint: disable=too-many-arguments
# pylint: disable=too-many-positional-arguments
# pylint: disable=too-many-locals
# flake8: noqa E501

"""CLI commands exporting invariant structures, periodic orbits and bifurcation constants."""

from __future__ import annotations

from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
from loguru import logger

from square_billiard.cli.utils import EXIT_CONFIG, EXIT_SOLVER, emit, fail, initialize, run_options
from square_billiard.exceptions import BilliardError, DomainError
from square_billiard.logics.bifurcation import compute_constants, heteroclinic_probe
from square_billiard.logics.core_maps import singular_curve_minus, singular_curve_plus
from square_billiard.logics.export import constants_payload, report_json, write_csv, write_curves_csv, write_periodic_csv
from square_billiard.logics.invariant_structures import (
    s_infinity_curve,
    sigma_partial_curve,
    singular_preimages,
    stable_manifold_curve,
    unstable_segments,
)
from square_billiard.logics.periodic_orbits import fixed_point_p, lifted_period, periodic_stable_curve, solve_pn, solve_qn
from square_billiard.models.curves import Curve
from square_billiard.models.orbit import OrbitNonexistence, PeriodicOrbitRecord
from square_billiard.models.types import Family


@click.command()
@run_options
@click.option("--depth", type=click.IntRange(min=0), default=None, help="Forward images of the local unstable manifold")
@click.option("--curve-grid", type=click.IntRange(min=2), default=None, help="Samples per curve")
@click.option("--preimages", type=click.IntRange(min=0), default=0, show_default=True, help="Preimages of S⁺ to include")
@click.option("--q-max", type=click.IntRange(min=0), default=0, show_default=True, help="Include stable graphs of q_1..q_m with their σ_m curves")
@click.pass_context
def manifolds(
    ctx: click.Context,
    lam: Optional[float],
    config_path: Optional[Path],
    out: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    workers: Optional[int],
    depth: Optional[int],
    curve_grid: Optional[int],
    preimages: int,
    q_max: int,
) -> None:
    """Curves of the phase portrait: W^s_loc, W^u segments, S⁺, S⁻ and S_∞."""
    console, config, debug = initialize(
        ctx, config_path, lam=lam, out=out, format=fmt, seed=seed, workers=workers, depth=depth, curve_grid=curve_grid
    )
    lam_value, n_points = config.lam, config.curve_grid
    try:
        curves: List[Curve] = [
            stable_manifold_curve(lam_value, n_points, config.tol_series),
            *unstable_segments(lam_value, config.depth).curves,
            singular_curve_plus(n_points),
            singular_curve_minus(lam_value, n_points),
            s_infinity_curve(lam_value, n_points, config.tol_series),
        ]
        if preimages:
            curves += singular_preimages(lam_value, preimages, n_points, config.tol_sing)
    except ValueError as error:
        fail(ctx, console, debug, error, EXIT_CONFIG)
    except BilliardError as error:
        fail(ctx, console, debug, error, EXIT_SOLVER)
    for m in range(1, q_max + 1):
        try:
            curves += [periodic_stable_curve(lam_value, m, n_points, config.tol_series), sigma_partial_curve(lam_value, m, n_points)]
        except BilliardError as error:
            logger.warning(f"stable graph of q_{m} skipped at lambda={lam_value}: {error}")
    if config.format == "json":
        payload = {"lambda": lam_value, "curves": [curve.model_dump(mode="json") for curve in curves]}
        emit(config, lambda stream: stream.write(report_json(payload, "manifolds")))
    else:
        emit(config, partial(write_curves_csv, curves))


@click.command()
@run_options
@click.option("--n-max", type=click.IntRange(min=1), default=None, help="Size of the c_n table")
@click.option("--skip-lambda0", is_flag=True, default=False, help="Use the published λ₀ bracket instead of estimating it")
@click.option("--timings", is_flag=True, default=False, help="Embed solver wall times in the report")
@click.option("--grid", "lambda0_grid", type=click.IntRange(min=2), default=None, help="Basin grid of the λ₀ estimate")
@click.option("--n-iter", "basin_iter", type=click.IntRange(min=1), default=None, help="Iterates per cell of the λ₀ estimate")
@click.option("--threshold", type=float, default=None, help="Bounded fraction marking an open basin")
@click.pass_context
def constants(
    ctx: click.Context,
    lam: Optional[float],
    config_path: Optional[Path],
    out: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    workers: Optional[int],
    n_max: Optional[int],
    skip_lambda0: bool,
    timings: bool,
    lambda0_grid: Optional[int],
    basin_iter: Optional[int],
    threshold: Optional[float],
) -> None:
    """Compute λ₁, λ₂, the c_n table and a λ₀ bracket.

    JSON output is the full report; CSV output is the ``n,c_n`` table.
    """
    console, config, debug = initialize(
        ctx,
        config_path,
        lam=lam,
        out=out,
        format=fmt,
        seed=seed,
        workers=workers,
        n_max=n_max,
        lambda0_grid=lambda0_grid,
        basin_iter=basin_iter,
        threshold=threshold,
    )
    try:
        result = compute_constants(
            n_max=config.n_max,
            skip_lambda0=skip_lambda0,
            lambda0_bracket=(config.lambda0_low, config.lambda0_high),
            grid=config.lambda0_grid,
            n_iter=config.basin_iter,
            threshold=config.threshold,
            workers=config.workers,
            timings=timings,
        )
    except BilliardError as error:
        fail(ctx, console, debug, error, EXIT_SOLVER)
    for key, meta in result.solver_meta.items():
        if meta.wall_time is not None:
            logger.info(f"{key}: {meta.wall_time:.3f} s")
    if config.format == "json":
        emit(config, lambda stream: stream.write(report_json(constants_payload(result, timings), "constants")))
    else:
        emit(config, lambda stream: write_csv(stream, ("n", "c_n"), result.cn_table))


def _orbit_entry(result: PeriodicOrbitRecord | OrbitNonexistence) -> Dict[str, Any]:
    entry = result.model_dump(mode="json", by_alias=True)
    entry["exists"] = isinstance(result, PeriodicOrbitRecord)
    if isinstance(result, PeriodicOrbitRecord):
        try:
            entry["lifted_period"] = lifted_period(result)
        except DomainError as error:
            logger.warning(f"lift of {result.family} n={result.n}: {error}")
            entry["lifted_period"] = None
    return entry


@click.command()
@run_options
@click.option("--n-max", type=click.IntRange(min=1), default=None, help="Largest n of the q_n and p_n families")
@click.option("--probe", is_flag=True, default=False, help="Test whether the unstable piece of each q_n meets B")
@click.pass_context
def periodic(
    ctx: click.Context,
    lam: Optional[float],
    config_path: Optional[Path],
    out: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    workers: Optional[int],
    n_max: Optional[int],
    probe: bool,
) -> None:
    """Solve p_λ, q_n and p_n and report existence, residual and stability."""
    console, config, debug = initialize(ctx, config_path, lam=lam, out=out, format=fmt, seed=seed, workers=workers, n_max=n_max)
    try:
        results: List[PeriodicOrbitRecord | OrbitNonexistence] = [fixed_point_p(config.lam, config.tol_fix, config.tol_sing, config.tol_eig)]
        results += [solve_qn(n, config.lam, config.tol_fix, config.tol_sing, config.tol_eig) for n in range(1, config.n_max + 1)]
        results += [solve_pn(n, config.lam, config.tol_fix, config.tol_sing, config.tol_eig) for n in range(1, config.n_max + 1)]
    except ValueError as error:
        fail(ctx, console, debug, error, EXIT_CONFIG)
    except BilliardError as error:
        fail(ctx, console, debug, error, EXIT_SOLVER)
    existing: Dict[Family, int] = {}
    for result in results:
        if isinstance(result, PeriodicOrbitRecord):
            existing[result.family] = existing.get(result.family, 0) + 1
    console.print(f"λ={config.lam}: {existing.get('Q_family', 0)} q_n and {existing.get('P_family', 0)} p_n exist for n ≤ {config.n_max}")
    if config.format == "csv":
        if probe:
            logger.warning("--probe results are only reported in JSON output")
        emit(config, partial(write_periodic_csv, results))
        return
    payload: Dict[str, Any] = {"lambda": config.lam, "orbits": [_orbit_entry(result) for result in results]}
    if probe:
        try:
            payload["probes"] = {
                f"q{result.n}": heteroclinic_probe(config.lam, result.n)
                for result in results
                if isinstance(result, PeriodicOrbitRecord) and result.family == "Q_family" and result.n is not None
            }
        except BilliardError as error:
            fail(ctx, console, debug, error, EXIT_SOLVER)
    emit(config, lambda stream: stream.write(report_json(payload, "periodic")))
