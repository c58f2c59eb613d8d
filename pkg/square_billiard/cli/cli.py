#!/usr/bin/env python
# coding: utf-8 -*-
# pylint: disable=no-value-for-parameter
# pylint: disable=cyclic-import


"""
SQB CLI Baseline.
"""

import click

from square_billiard import __version__
from square_billiard.cli.config import commands as config_commands
from square_billiard.cli.dynamics import commands as dynamics_commands
from square_billiard.cli.structures import commands as structures_commands
from square_billiard.cli.utils import CommandGroup


@click.group(cls=CommandGroup)
@click.version_option(__version__)
@click.pass_context
@click.option(
    "--log-level",
    "--log",
    help="Logging level of the command",
    default="error",
    type=click.Choice(["debug", "info", "warning", "error", "critical"], case_sensitive=False),
)
# Boolean triggers
@click.option(
    "--debug-enabled",
    "--debug",
    is_flag=True,
    help="Print full tracebacks on failure",
    default=False,
)
def sqb(ctx: click.Context, log_level: str, debug_enabled: bool) -> None:
    """Square billiard with a contracting reflection law"""
    ctx.ensure_object(dict)
    ctx.obj["log_level"] = log_level
    ctx.obj["debug"] = debug_enabled


# Commands
for command in (
    dynamics_commands.orbit,
    dynamics_commands.attractor,
    dynamics_commands.basin,
    dynamics_commands.scan_command,
    structures_commands.manifolds,
    structures_commands.constants,
    structures_commands.periodic,
    config_commands.config_command,
):
    sqb.add_command(command)


def cli() -> None:
    """Load SQB CLI"""
    sqb(obj={}, auto_envvar_prefix="SQB")


if __name__ == "__main__":
    cli()
