#!/usr/bin/env python
# coding: utf-8 -*-
# pylint: disable=no-value-for-parameter

"""CLI command showing or saving the effective run configuration."""

from pathlib import Path
from typing import Optional

import click

from square_billiard.cli.utils import initialize


@click.command(name="config")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Run configuration file to start from",
)
@click.option("--lambda", "lam", type=float, default=None, help="Contraction factor λ of the reflection law")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed of the random generator")
@click.option("--save", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the configuration to this file")
@click.pass_context
def config_command(ctx: click.Context, config_path: Optional[Path], lam: Optional[float], seed: Optional[int], save: Optional[Path]) -> None:
    """Print the effective configuration as ``key = value`` lines."""
    console, config, _ = initialize(ctx, config_path, lam=lam, seed=seed)
    if save is None:
        click.echo(config.to_text(), nl=False)
    else:
        config.to_file(save)
        console.print(f"Configuration saved to [blue]{save}[/blue]")
