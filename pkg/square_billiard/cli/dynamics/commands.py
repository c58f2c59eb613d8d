#!/usr/bin/env python
# coding: utf-8 -*-
# pylint: disable=no-value-for-parameter
# pylint: disable=too-many-arguments
# pylint: disable=too-many-positional-arguments
# pylint: disable=too-many-locals
# pylint: disable=redefined-builtin
# flake8: noqa E501

"""CLI commands iterating the billiard maps.

Commands:
    orbit: iterates of one orbit, with a status footer when it dies on S⁺
    attractor: post-transient iterates of the orbits that avoid P
    basin: basin of P on a grid, as CSV, JSON or a binary raster
    scan: one summary row per λ of a sweep

All commands write data to ``--out`` or stdout and messages to stderr.
"""

from functools import partial
from pathlib import Path
from typing import Optional

import click

from square_billiard import MSG_EMPTY_ATTRACTOR, MSG_PARTIAL_RESULTS
from square_billiard.cli.utils import EXIT_CONFIG, EXIT_PARTIAL, EXIT_SOLVER, emit, fail, initialize, run_options
from square_billiard.exceptions import BilliardError
from square_billiard.logics.bifurcation import basin_of_P, compute_constants
from square_billiard.logics.explorer import iterate_orbit, sample_attractor, scan, scan_lambdas
from square_billiard.logics.export import (
    constants_payload,
    report_json,
    write_attractor_csv,
    write_basin_csv,
    write_basin_raster,
    write_orbit_csv,
    write_scan_csv,
)


@click.command()
@run_options
@click.option("--s0", type=float, default=None, help="Initial position")
@click.option("--theta0", type=float, default=None, help="Initial angle")
@click.option("--steps", type=click.IntRange(min=1), default=None, help="Number of iterates")
@click.option("--map", "map_kind", type=click.Choice(["reduced", "full"]), default=None, help="Reduced map φ_λ or full map Φ_λ")
@click.pass_context
def orbit(
    ctx: click.Context,
    lam: Optional[float],
    config_path: Optional[Path],
    out: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    workers: Optional[int],
    s0: Optional[float],
    theta0: Optional[float],
    steps: Optional[int],
    map_kind: Optional[str],
) -> None:
    """Iterate one orbit and write (index, s, theta, branch) rows."""
    console, config, debug = initialize(
        ctx, config_path, lam=lam, out=out, format=fmt, seed=seed, workers=workers, s0=s0, theta0=theta0, steps=steps, map=map_kind
    )
    try:
        trace = iterate_orbit(config.lam, config.s0, config.theta0, config.steps, config.map, config.tol_sing)
    except ValueError as error:
        fail(ctx, console, debug, error, EXIT_CONFIG)
    if config.format == "json":
        emit(config, lambda stream: stream.write(report_json(trace, "orbit")))
    else:
        emit(config, partial(write_orbit_csv, trace))
    if trace.status == "singular":
        console.print(f"[yellow]{MSG_PARTIAL_RESULTS}[/yellow]Last valid iterate: {trace.last_index}")
        ctx.exit(EXIT_PARTIAL)


@click.command()
@run_options
@click.option("--n-initial", type=click.IntRange(min=1), default=None, help="Number of initial conditions")
@click.option("--n-iter", type=click.IntRange(min=1), default=None, help="Recorded iterates per orbit")
@click.option("--transient", type=click.IntRange(min=0), default=None, help="Discarded iterates per orbit")
@click.pass_context
def attractor(
    ctx: click.Context,
    lam: Optional[float],
    config_path: Optional[Path],
    out: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    workers: Optional[int],
    n_initial: Optional[int],
    n_iter: Optional[int],
    transient: Optional[int],
) -> None:
    """Sample the attractor: surviving iterates of random orbits that avoid P."""
    console, config, debug = initialize(
        ctx, config_path, lam=lam, out=out, format=fmt, seed=seed, workers=workers, n_initial=n_initial, n_iter=n_iter, transient=transient
    )
    try:
        sample = sample_attractor(
            config.lam,
            n_initial=config.n_initial,
            n_iter=config.n_iter,
            transient=config.transient,
            seed=config.seed,
            workers=config.workers,
            tol_sing=config.tol_sing,
            show_progress=True,
        )
    except ValueError as error:
        fail(ctx, console, debug, error, EXIT_CONFIG)
    except BilliardError as error:
        fail(ctx, console, debug, error, EXIT_SOLVER)
    if sample.empty:
        console.print(f"[yellow]{MSG_EMPTY_ATTRACTOR}[/yellow]")
    if config.format == "json":
        payload = {**sample.model_dump(mode="json", by_alias=True), "s": sample.s, "theta": sample.theta}
        emit(config, lambda stream: stream.write(report_json(payload, "attractor")))
    else:
        emit(config, partial(write_attractor_csv, sample))


@click.command()
@run_options
@click.option("--grid", type=click.IntRange(min=2), default=None, help="Cells per axis")
@click.option("--n-iter", "basin_iter", type=click.IntRange(min=1), default=None, help="Iterates per cell")
@click.option("--raster", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Also write the binary label raster")
@click.pass_context
def basin(
    ctx: click.Context,
    lam: Optional[float],
    config_path: Optional[Path],
    out: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    workers: Optional[int],
    grid: Optional[int],
    basin_iter: Optional[int],
    raster: Optional[Path],
) -> None:
    """Classify a grid of initial conditions as ToP, Bounded or Singular."""
    console, config, debug = initialize(
        ctx, config_path, lam=lam, out=out, format=fmt, seed=seed, workers=workers, grid=grid, basin_iter=basin_iter
    )
    try:
        report = basin_of_P(config.lam, config.grid, config.basin_iter, workers=config.workers, tol_sing=config.tol_sing, show_progress=True)
    except ValueError as error:
        fail(ctx, console, debug, error, EXIT_CONFIG)
    except BilliardError as error:
        fail(ctx, console, debug, error, EXIT_SOLVER)
    if raster is not None:
        write_basin_raster(report, raster)
        console.print(f"Raster written to [blue]{raster}[/blue]")
    if config.format == "json":
        emit(config, lambda stream: stream.write(report_json(report, "basin")))
    else:
        emit(config, partial(write_basin_csv, report))


@click.command(name="scan")
@run_options
@click.option("--min", "scan_min", type=float, default=None, help="First λ")
@click.option("--max", "scan_max", type=float, default=None, help="Last λ")
@click.option("--step", "scan_step", type=float, default=None, help="λ step")
@click.option("--n-max", "scan_n_max", type=click.IntRange(min=1), default=None, help="Largest n counted for q_n and p_n")
@click.option("--grid", "scan_grid", type=click.IntRange(min=2), default=None, help="Basin grid per λ")
@click.option("--n-iter", "scan_iter", type=click.IntRange(min=1), default=None, help="Iterates per λ")
@click.option("--estimate-lambda0", is_flag=True, default=False, help="Estimate λ₀ instead of using the published bracket")
@click.pass_context
def scan_command(
    ctx: click.Context,
    lam: Optional[float],
    config_path: Optional[Path],
    out: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    workers: Optional[int],
    scan_min: Optional[float],
    scan_max: Optional[float],
    scan_step: Optional[float],
    scan_n_max: Optional[int],
    scan_grid: Optional[int],
    scan_iter: Optional[int],
    estimate_lambda0: bool,
) -> None:
    """Sweep λ and summarize regime, basin, attractor, homoclinic test and orbit counts."""
    console, config, debug = initialize(
        ctx,
        config_path,
        lam=lam,
        out=out,
        format=fmt,
        seed=seed,
        workers=workers,
        scan_min=scan_min,
        scan_max=scan_max,
        scan_step=scan_step,
        scan_n_max=scan_n_max,
        scan_grid=scan_grid,
        scan_iter=scan_iter,
    )
    try:
        constants = compute_constants(
            n_max=0,
            skip_lambda0=not estimate_lambda0,
            lambda0_bracket=(config.lambda0_low, config.lambda0_high),
            grid=config.lambda0_grid,
            n_iter=config.basin_iter,
            threshold=config.threshold,
            workers=config.workers,
        )
    except BilliardError as error:
        fail(ctx, console, debug, error, EXIT_SOLVER)
    lambdas = scan_lambdas(config.scan_min, config.scan_max, config.scan_step)
    rows = scan(
        lambdas,
        constants,
        n_max=config.scan_n_max,
        grid=config.scan_grid,
        n_iter=config.scan_iter,
        seed=config.seed,
        workers=config.workers,
        show_progress=True,
    )
    if config.format == "json":
        payload = {
            "constants": constants_payload(constants),
            "rows": [row.model_dump(mode="json", by_alias=True) for row in rows],
        }
        emit(config, lambda stream: stream.write(report_json(payload, "scan")))
    else:
        emit(config, partial(write_scan_csv, rows))
    failed = sum(row.error is not None for row in rows)
    if failed:
        console.print(f"[yellow]{failed} of {len(rows)} rows failed; see the error column[/yellow]")
        ctx.exit(EXIT_PARTIAL)
