"""Seeded task runner: independent chains in worker processes, each on its own random stream."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Optional

from ..rng import SeedLike, child_seed


def _call(job: tuple[Callable[..., Any], dict[str, Any]]) -> Any:
    func, kwargs = job
    return func(**kwargs)


def seeded_tasks(seed: SeedLike, tasks: list[dict[str, Any]]) -> list[dict[str, Any]]:
    """
    Attach a private SeedSequence to each task under the ``seed`` key.

    Task i receives stream i of the master seed, so results do not depend on
    how tasks are scheduled.
    """
    return [{**task, "seed": child_seed(seed, index)} for index, task in enumerate(tasks)]


def run_tasks(
    func: Callable[..., Any],
    tasks: list[dict[str, Any]],
    threads: int = 1,
    logger: Optional[logging.Logger] = None,
) -> list[Any]:
    """
    Run ``func(**task)`` for every task, in order.

    Args:
        func: Module-level (picklable) function
        tasks: Keyword arguments per call; must be picklable when threads > 1
        threads: Worker processes; 1 runs in the calling process
        logger: Optional logger for progress

    Returns:
        Results in task order
    """
    jobs = [(func, task) for task in tasks]
    if threads <= 1 or len(jobs) <= 1:
        results = []
        for index, job in enumerate(jobs, start=1):
            results.append(_call(job))
            if logger:
                logger.debug(f"  task {index}/{len(jobs)} done")
        return results

    if logger:
        logger.debug(f"  running {len(jobs)} tasks on {threads} workers")
    with ProcessPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(_call, jobs))
