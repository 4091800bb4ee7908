"""Tuning-table summaries: normalised efficiency, the best row and acceptance-targeted selection."""

import math
from typing import Any, Optional

import numpy as np

from ..records import TuningRow, TuningTable
from ..theory.scaling import OPTIMAL_ACCEPTANCE, theoretical_efficiency


def tuning_summary(rows: list[TuningRow], metadata: Optional[dict[str, Any]] = None) -> TuningTable:
    """
    Normalise mean components moved by the grid maximum and attach theoretical efficiencies.

    Args:
        rows: Tuning rows (any order)
        metadata: Optional table metadata

    Returns:
        TuningTable sorted by k; normalized_efficiency is 1 at the arg-max row

    Raises:
        ValueError: If rows is empty
    """
    if not rows:
        msg = "tuning_summary needs at least one row"
        raise ValueError(msg)
    best = max(row.mean_moved for row in rows)
    for row in rows:
        row.normalized_efficiency = row.mean_moved / best if best > 0 else math.nan
        row.theoretical_efficiency = theoretical_efficiency(row.acceptance) if 0.0 < row.acceptance < 1.0 else math.nan
    return TuningTable(rows=list(rows), metadata=dict(metadata or {}))


def k_nearest_acceptance(table: TuningTable, target: float = OPTIMAL_ACCEPTANCE) -> TuningRow:
    """Row whose acceptance is closest to ``target`` (smallest k on ties)."""
    if not table.rows:
        msg = "Tuning table is empty"
        raise ValueError(msg)
    return min(table.rows, key=lambda row: (abs(row.acceptance - target), row.k))


def efficiency_fraction(table: TuningTable, row: TuningRow) -> float:
    """mean_moved of ``row`` as a fraction of the grid maximum."""
    return row.mean_moved / table.argmax.mean_moved


def is_monotone(values, std_errors, increasing: bool = False, n_se: float = 3.0) -> bool:
    """
    Whether a sequence is monotone up to Monte Carlo noise.

    Each consecutive step may move against the stated direction by at most
    ``n_se`` combined standard errors.
    """
    values = np.asarray(values, dtype=float)
    std_errors = np.asarray(std_errors, dtype=float)
    steps = np.diff(values)
    tolerance = n_se * np.hypot(std_errors[:-1], std_errors[1:])
    if increasing:
        return bool(np.all(steps >= -tolerance))
    return bool(np.all(steps <= tolerance))
