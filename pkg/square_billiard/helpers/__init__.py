# flake8: noqa: F811
"""Ordered worker pool with progress tracking in the console.

Grid rows, λ-sweeps and ensembles of initial conditions are independent
tasks. This module fans them out to a process pool and collects the
results back in input order, so that reductions over the results are
bit-reproducible whatever the number of workers.

Classes
-------
    ComputeProgressBar: rich progress bar wrapped around an ordered pool map.

Functions
-------
    run_ordered: map a picklable function over items, preserving order.
    console (Console): Rich Console instance for output rendering.
"""

# pylint: disable=too-few-public-methods

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from loguru import logger
from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    TextColumn,
    TimeElapsedColumn,
)

T = TypeVar("T")
R = TypeVar("R")

console = Console(stderr=True)


class ComputeProgressBar:
    """A progress bar for batches of independent numerical tasks.

    Attributes
    ----------
    progress : Progress
        A Rich Progress instance showing completed tasks and elapsed time.
    disable : bool
        Hide the bar (used for nested or scripted runs).

    Examples
    --------
    >>> bar = ComputeProgressBar()
    >>> bar.map(math.sqrt, [1.0, 4.0, 9.0], workers=2, label="roots")
    [1.0, 2.0, 3.0]
    """

    def __init__(self, disable: bool = False) -> None:
        self.disable = disable
        self.progress = Progress(
            TextColumn("🧮  [bold blue]{task.fields[label]}", justify="right"),
            BarColumn(bar_width=None),
            MofNCompleteColumn(),
            "•",
            TimeElapsedColumn(),
            console=console,
            disable=disable,
            transient=True,
        )

    def map(self, func: Callable[[T], R], items: Sequence[T], workers: int = 1, label: str = "tasks") -> List[R]:
        """Apply ``func`` to every item and return the results in input order.

        Parameters
        ----------
        func : Callable[[T], R]
            Pure, picklable function (module level or ``functools.partial``).
        items : Sequence[T]
            Task inputs.
        workers : int
            Number of worker processes; 1 runs in-process.
        label : str
            Text shown next to the bar.

        Returns
        -------
        List[R]
            ``[func(item) for item in items]``.
        """
        results: List[R] = []
        with self.progress:
            task_id = self.progress.add_task(label, total=len(items), label=label)
            if workers <= 1 or len(items) <= 1:
                for item in items:
                    results.append(func(item))
                    self.progress.advance(task_id)
                return results
            logger.debug(f"Dispatching {len(items)} {label} to {workers} workers")
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(func, item) for item in items]
                for future in futures:
                    results.append(future.result())
                    self.progress.advance(task_id)
        return results


def run_ordered(
    func: Callable[[T], R], items: Sequence[T], workers: int = 1, label: str = "tasks", show_progress: bool = False
) -> List[R]:
    """Map ``func`` over ``items`` with an ordered pool.

    Equivalent to ``[func(item) for item in items]`` for any ``workers``.
    """
    return ComputeProgressBar(disable=not show_progress).map(func, items, workers=workers, label=label)
