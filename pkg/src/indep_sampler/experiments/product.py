"""
Product-density experiments: block-size sweeps for i.i.d. targets.

The target is f^n with n components and the proposal q^n. Each grid point runs
``replicates`` independent chains; rows report mean acceptance with its standard
error and mean components moved, normalised by the best grid point.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from scipy import special

from ..densities import DensityPair, pair_discrepancy, pair_from_spec
from ..diagnostics.ess import effective_sample_size
from ..diagnostics.tuning import tuning_summary
from ..records import Trace, TuningRow, TuningTable
from ..rng import SeedLike, as_generator
from ..sampler.chain import run_chain
from ..sampler.kernels import rwm_step
from ..theory.scaling import optimal_k, theoretical_efficiency
from .runner import run_tasks, seeded_tasks

DEFAULT_GRID_POINTS = 10
# Predicted acceptance range covered by default_k_grid
GRID_ACCEPTANCE_HIGH = 0.95
GRID_ACCEPTANCE_LOW = 0.02
DIVERGENT_HEAD = 20


@dataclass
class ExperimentConfig:
    """One product-density sweep."""

    pair_spec: str
    n: int = 1000
    k_grid: list[int] = field(default_factory=list)
    iterations: int = 100_000
    burn_in: int = 1_000
    seed: int = 0
    replicates: int = 3

    def __post_init__(self):
        """Validate the grid and the iteration budget."""
        if not self.k_grid:
            msg = "k_grid must not be empty"
            raise ValueError(msg)
        if list(self.k_grid) != sorted(set(self.k_grid)):
            msg = f"k_grid must be sorted and distinct, got {self.k_grid}"
            raise ValueError(msg)
        if self.k_grid[0] < 1 or self.k_grid[-1] > self.n:
            msg = f"k_grid values must lie in 1..{self.n}, got {self.k_grid}"
            raise ValueError(msg)
        if not self.iterations > self.burn_in >= 0:
            msg = f"Need iterations > burn_in >= 0, got {self.iterations}, {self.burn_in}"
            raise ValueError(msg)
        if self.replicates < 1:
            msg = f"replicates must be positive, got {self.replicates}"
            raise ValueError(msg)


def _k_for_acceptance(acceptance: float, I: float) -> float:
    """Invert 2 Phi(-sqrt(kI/2)) = acceptance for k."""
    s = float(special.ndtri(acceptance / 2.0))
    return 2.0 * s * s / I


def default_k_grid(
    pair: DensityPair,
    n: int,
    points: int = DEFAULT_GRID_POINTS,
    logger: Optional[logging.Logger] = None,
) -> list[int]:
    """
    Block-size grid around optimal_k covering predicted acceptance 0.95 down to 0.02.

    Geometric between the k values predicted to give acceptance 0.95 and 0.02,
    with optimal_k added, clipped to [1, n]. A divergent discrepancy gives
    {1, ..., min(20, n)} followed by a geometric tail up to n.
    """
    I = pair_discrepancy(pair, mc_samples=100_000, seed=0).value
    if math.isinf(I):
        head = list(range(1, min(DIVERGENT_HEAD, n) + 1))
        tail = np.geomspace(DIVERGENT_HEAD, n, points) if n > DIVERGENT_HEAD else np.array([])
        return sorted({*head, *np.rint(tail).astype(int).tolist()})
    if I == 0:
        candidates = np.geomspace(1, n, points)
    else:
        low = max(_k_for_acceptance(GRID_ACCEPTANCE_HIGH, I), 1.0)
        high = max(_k_for_acceptance(GRID_ACCEPTANCE_LOW, I), low)
        if high > n and logger:
            logger.warning(f"k grid for {pair.label} clipped at n={n} (acceptance 0.02 needs k={high:.0f})")
        candidates = np.append(np.geomspace(low, high, points), optimal_k(I, n))
    return sorted({int(k) for k in np.clip(np.rint(candidates), 1, n)})


def _chain_task(pair_spec: str, n: int, k: int, iterations: int, burn_in: int, seed) -> tuple[int, float, float]:
    """Worker entry: (k, acceptance, batch-means SE) of one chain."""
    result = run_chain(pair_from_spec(pair_spec), n, k, iterations, burn_in, seed=seed)
    return k, result.row.acceptance, result.row.mc_se


def run_sweep(config: ExperimentConfig, threads: int = 1, logger: Optional[logging.Logger] = None) -> TuningTable:
    """
    One chain per (k, replicate) with private streams, aggregated per k.

    The acceptance SE is the across-replicate standard error when replicates > 1
    and the batch-means SE of the single chain otherwise.
    """
    pair = pair_from_spec(config.pair_spec)
    discrepancy = pair_discrepancy(pair, mc_samples=100_000, seed=config.seed)
    if logger:
        logger.info(f"Sweep {pair.label}: n={config.n}, {len(config.k_grid)} k values x {config.replicates} replicates")

    tasks = [
        {"pair_spec": pair.spec, "n": config.n, "k": k, "iterations": config.iterations, "burn_in": config.burn_in}
        for k in config.k_grid
        for _ in range(config.replicates)
    ]
    results = run_tasks(_chain_task, seeded_tasks(config.seed, tasks), threads=threads, logger=logger)

    by_k: dict[int, list[tuple[float, float]]] = {}
    for k, acceptance, batch_se in results:
        by_k.setdefault(k, []).append((acceptance, batch_se))

    rows = []
    for k in config.k_grid:
        acceptances = np.array([acceptance for acceptance, _ in by_k[k]])
        if acceptances.size > 1:
            se = float(acceptances.std(ddof=1) / math.sqrt(acceptances.size))
        else:
            se = by_k[k][0][1]
        rows.append(TuningRow.from_acceptance(k, float(acceptances.mean()), mc_se=se))

    metadata: dict[str, Any] = {
        "pair": pair.spec,
        "label": pair.label,
        "discrepancy": discrepancy.value,
        "discrepancy_se": discrepancy.std_error,
        "discrepancy_method": discrepancy.method,
        "optimal_k": optimal_k(discrepancy.value, config.n),
        "n": config.n,
        "k_grid": list(config.k_grid),
        "iterations": config.iterations,
        "burn_in": config.burn_in,
        "replicates": config.replicates,
        "seed": config.seed,
    }
    table = tuning_summary(rows, metadata)
    if logger:
        best = table.argmax
        logger.info(f"  best k={best.k} acceptance={best.acceptance:.3f} mean moved={best.mean_moved:.2f}")
    return table


@dataclass(frozen=True)
class EfficiencyComparison:
    """Observed versus theoretical normalised efficiency per row."""

    k_values: list[int]
    observed: list[float]
    theoretical: list[float]
    skipped: list[int]

    @property
    def gaps(self) -> list[float]:
        """Absolute observed-minus-theoretical gap per compared row."""
        return [abs(obs - theo) for obs, theo in zip(self.observed, self.theoretical)]

    @property
    def sup_gap(self) -> float:
        """Largest gap over compared rows (NaN when nothing was compared)."""
        return max(self.gaps) if self.gaps else math.nan


def efficiency_vs_theory(table: TuningTable, logger: Optional[logging.Logger] = None) -> EfficiencyComparison:
    """
    Pair each row's normalised efficiency with theoretical_efficiency(acceptance).

    Rows with acceptance 0 or 1 have no theoretical value and are skipped with a warning.

    Raises:
        ValueError: If the table is empty
    """
    if not table.rows:
        msg = "efficiency_vs_theory needs a non-empty table"
        raise ValueError(msg)
    k_values, observed, theoretical, skipped = [], [], [], []
    for row in table.rows:
        if not 0.0 < row.acceptance < 1.0:
            skipped.append(row.k)
            if logger:
                logger.warning(f"  skipping k={row.k}: acceptance {row.acceptance} has no theoretical efficiency")
            continue
        k_values.append(row.k)
        observed.append(row.normalized_efficiency)
        theoretical.append(theoretical_efficiency(row.acceptance))
    return EfficiencyComparison(k_values=k_values, observed=observed, theoretical=theoretical, skipped=skipped)


@dataclass(frozen=True)
class RwmComparison:
    """Component-0 ESS per iteration of the independence sampler and RWM on a Gaussian product target."""

    n: int
    k: int
    independence_acceptance: float
    independence_ess_per_iteration: float
    rwm_scale: float
    rwm_acceptance: float
    rwm_ess_per_iteration: float


def compare_with_rwm(
    lam: float,
    n: int = 100,
    iterations: int = 20_000,
    burn_in: int = 1_000,
    k: Optional[int] = None,
    seed: SeedLike = None,
) -> RwmComparison:
    """
    Independence sampler at its predicted best k against RWM with scale 2.4/sqrt(n).

    Both chains target N(0, I_n); efficiency is the ESS of component 0 per iteration.
    """
    pair = pair_from_spec(f"gaussian:{lam}")
    rng = as_generator(seed)
    block = k or optimal_k(pair_discrepancy(pair).value, n)
    independence = run_chain(pair, n, block, iterations, burn_in, seed=rng, trace_thin=1)

    def logpost(x: np.ndarray) -> float:
        return -0.5 * float(np.dot(x, x))

    scale = 2.4 / math.sqrt(n)
    x = rng.standard_normal(n)
    current = logpost(x)
    kept = iterations - burn_in
    values = np.empty(kept)
    accepted = 0
    for step in range(iterations):
        x, record = rwm_step(x, logpost, scale, rng, current_logpost=current)
        current = record.log_target
        if step >= burn_in:
            values[step - burn_in] = x[0]
            accepted += record.accepted

    rwm_ess = effective_sample_size(Trace(values, label="rwm x[0]"))
    independence_ess = effective_sample_size(independence.trace)
    return RwmComparison(
        n=n,
        k=block,
        independence_acceptance=independence.row.acceptance,
        independence_ess_per_iteration=independence_ess.ess / independence_ess.n,
        rwm_scale=scale,
        rwm_acceptance=accepted / kept,
        rwm_ess_per_iteration=rwm_ess.ess / rwm_ess.n,
    )
