#!/usr/bin/python
# coding: utf-8 -*-


"""
Shared pieces of the ``sqb`` command line.

- ``CommandGroup``: ordered click group accepting unique command prefixes,
- ``cli_logging``: routes loguru records to a rich handler on stderr,
- ``run_options``: the options every computing command accepts,
- ``initialize``: builds the effective ``RunConfig`` of a command.
"""

import io
from pathlib import Path
from typing import IO, Any, Callable, List, NoReturn, Optional, Tuple

import click
from loguru import logger
from rich import pretty
from rich.console import Console
from rich.logging import RichHandler

from square_billiard.exceptions import ConfigError
from square_billiard.models.config import RunConfig
from square_billiard.tools import exc_to_str

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_PARTIAL = 4


class CommandGroup(click.Group):
    """
    Top-level ``sqb`` group.

    Commands are listed in the order they were added (dynamics, then
    structures, then ``config``) instead of alphabetically. A command may be
    called by any unique, case-insensitive prefix: ``sqb orb`` runs ``orbit``
    and ``sqb MANI`` runs ``manifolds``. An ambiguous prefix such as ``c``
    fails with exit code 2 and names the candidates.
    """

    def list_commands(self, ctx: click.Context) -> List[str]:
        return list(self.commands)

    def get_command(self, ctx: click.Context, cmd_name: str) -> Optional[click.Command]:
        """Resolve ``cmd_name`` or the single command it prefixes."""
        command = super().get_command(ctx, cmd_name)
        if command is not None:
            return command
        prefix = cmd_name.lower()
        matches = [name for name in self.list_commands(ctx) if name.startswith(prefix)]
        if not matches:
            return None
        if len(matches) > 1:
            ctx.fail(f"Ambiguous command '{cmd_name}': could be {', '.join(matches)}")
        return super().get_command(ctx, matches[0])

    def resolve_command(self, ctx: click.Context, args: List[str]) -> Tuple[Optional[str], Optional[click.Command], List[str]]:
        """Report the full command name, not the prefix typed."""
        _, command, rest = super().resolve_command(ctx, args)
        return (command.name if command else None), command, rest


def cli_logging(level: str = "error") -> None:
    """
    Send loguru records at ``level`` and above to a RichHandler on stderr.

    Args:
        level (str): The logging level as a string (e.g., 'DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL').
    """
    logger.remove()
    logger.add(
        RichHandler(
            console=Console(stderr=True),
            show_path=True,
            show_time=True,
            show_level=True,
            markup=False,
            rich_tracebacks=True,
            tracebacks_suppress=[click],
        ),
        format="{message}",
        level=level.upper(),
    )


def console_configuration() -> Console:
    """Configure Rich Terminal for the CLI; messages go to stderr, data to stdout."""
    pretty.install()
    console = Console(stderr=True)
    return console


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Attach ``--lambda``, ``--config``, ``--out``, ``--format``, ``--seed`` and ``--threads``."""
    options = [
        click.option("--lambda", "lam", type=float, default=None, help="Contraction factor λ of the reflection law"),
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            default=None,
            help="Run configuration file (key = value lines)",
        ),
        click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Output file (default: stdout)"),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None, help="Output format"),
        click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed of the random generator"),
        click.option("--threads", "workers", type=click.IntRange(min=1), default=None, help="Worker processes"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def fail(ctx: click.Context, console: Console, debug: bool, error: Exception, code: int) -> NoReturn:
    """Report ``error`` and leave with ``code``; must be called from an ``except`` block."""
    if debug:
        console.print_exception(show_locals=True)
    else:
        console.print(exc_to_str(error), style="red", markup=False)
    ctx.exit(code)
    raise AssertionError("unreachable")  # pragma: no cover


def initialize(ctx: click.Context, config_path: Optional[Path], **overrides: Any) -> Tuple[Console, RunConfig, bool]:
    """Set up logging and build the effective configuration.

    Command-line values override the configuration file, which overrides
    the defaults. A bad file or value exits with code 2.

    Returns:
        tuple: The console, the effective configuration and the debug flag.
    """
    console = console_configuration()
    debug = ctx.obj["debug"]
    cli_logging(ctx.obj["log_level"])
    try:
        base = RunConfig.from_file(config_path) if config_path else RunConfig()
        config = base.override(**overrides)
    except ConfigError as error:
        fail(ctx, console, debug, error, EXIT_CONFIG)
    logger.debug(f"Effective configuration:\n{config.to_text()}")
    return console, config, debug


def emit(config: RunConfig, writer: Callable[[IO[str]], Any]) -> None:
    """Run ``writer`` on a text buffer and send it to ``config.out`` or stdout."""
    buffer = io.StringIO()
    writer(buffer)
    text = buffer.getvalue()
    if config.out is None:
        click.echo(text, nl=False)
    else:
        config.out.write_text(text, encoding="utf-8")
        logger.info(f"Output written to {config.out}")
