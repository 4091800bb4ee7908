"""Result records shared across samplers, theory estimators and experiment sweeps."""

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

# DiscrepancyResult.method values
CLOSED_FORM = "closed_form"
MONTE_CARLO = "monte_carlo"
DIVERGENT = "divergent"

DISCREPANCY_METHODS = (CLOSED_FORM, MONTE_CARLO, DIVERGENT)


@dataclass(frozen=True)
class DiscrepancyResult:
    """Symmetrised Kullback-Leibler discrepancy I = D(q||f) + D(f||q)."""

    value: float
    std_error: float
    method: str  # 'closed_form', 'monte_carlo', 'divergent'

    def __post_init__(self):
        """Enforce the closed-form/divergent conventions."""
        if self.method not in DISCREPANCY_METHODS:
            msg = f"Unknown discrepancy method: {self.method}"
            raise ValueError(msg)
        if self.method == CLOSED_FORM and self.std_error != 0:
            msg = "Closed-form discrepancy must carry zero standard error"
            raise ValueError(msg)
        if (self.value == math.inf) != (self.method == DIVERGENT):
            msg = "Discrepancy is +inf exactly when the method is 'divergent'"
            raise ValueError(msg)
        if self.std_error < 0:
            msg = f"Negative standard error: {self.std_error}"
            raise ValueError(msg)

    @property
    def is_finite(self) -> bool:
        """True unless the discrepancy diverges."""
        return self.method != DIVERGENT


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A Monte Carlo mean with its standard error."""

    value: float
    std_error: float
    samples: int

    def within(self, target: float, n_se: float = 3.0, slack: float = 0.0) -> bool:
        """Whether ``target`` lies within ``n_se`` standard errors (plus ``slack``)."""
        return abs(self.value - target) <= n_se * self.std_error + slack

    @classmethod
    def from_samples(cls, values: np.ndarray) -> "MonteCarloEstimate":
        """Mean and standard error of an i.i.d. sample."""
        values = np.asarray(values, dtype=float)
        count = values.size
        if count == 0:
            msg = "Cannot summarise an empty Monte Carlo sample"
            raise ValueError(msg)
        se = float(values.std(ddof=1) / math.sqrt(count)) if count > 1 else 0.0
        return cls(value=float(values.mean()), std_error=se, samples=count)


@dataclass(frozen=True)
class StepRecord:
    """Outcome of a single Metropolis-Hastings step."""

    accepted: bool
    k: int
    log_ratio: float
    log_target: Optional[float] = None  # log target at the post-step state, when the kernel tracks it


@dataclass
class TuningRow:
    """One block size k of a tuning sweep."""

    k: int
    acceptance: float
    mean_moved: float
    normalized_efficiency: float = math.nan  # filled by tuning_summary
    mc_se: float = 0.0
    theoretical_efficiency: float = math.nan
    extras: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_acceptance(cls, k: int, acceptance: float, mc_se: float = 0.0, **extras: float) -> "TuningRow":
        """Build a row whose mean_moved is k x acceptance by construction."""
        return cls(k=k, acceptance=acceptance, mean_moved=k * acceptance, mc_se=mc_se, extras=dict(extras))


@dataclass
class TuningTable:
    """Per-k tuning rows for one sweep, sorted by k."""

    rows: list[TuningRow]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Keep rows ordered by block size."""
        self.rows = sorted(self.rows, key=lambda row: row.k)

    def __len__(self) -> int:
        """Number of rows."""
        return len(self.rows)

    @property
    def k_values(self) -> list[int]:
        """Block sizes in the table."""
        return [row.k for row in self.rows]

    @property
    def argmax(self) -> TuningRow:
        """Row with the largest mean number of components moved (first on ties)."""
        if not self.rows:
            msg = "Tuning table is empty"
            raise ValueError(msg)
        return max(self.rows, key=lambda row: row.mean_moved)

    def column(self, name: str) -> np.ndarray:
        """One numeric column as an array."""
        return np.array([getattr(row, name) for row in self.rows], dtype=float)


@dataclass
class Trace:
    """A labelled chain trace of finite values."""

    values: np.ndarray
    label: str

    def __post_init__(self):
        """Store as float array and reject non-finite values."""
        self.values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(self.values)):
            msg = f"Trace '{self.label}' contains non-finite values"
            raise ValueError(msg)

    def __len__(self) -> int:
        """Trace length."""
        return int(self.values.size)


@dataclass(frozen=True)
class EssReport:
    """Effective sample size from the integrated autocorrelation time."""

    ess: float
    iact: float
    n: int
    label: str = ""
