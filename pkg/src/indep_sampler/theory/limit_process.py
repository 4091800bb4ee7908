"""
The limiting jump process of one component and its comparison with the scaled chain.

With time rescaled so that n chain steps make one time unit, the first component
of the chain converges to a Markov jump process with generator

    G h(x) = k * integral (h(y) - h(x)) H*(y, x) q(y) dy.

The process is simulated by thinning: candidate events arrive at rate k, each
carries y ~ q and is accepted with probability H*(y, current). Using an unbiased
Monte Carlo estimate of H* as the acceptance probability leaves the thinning exact
in distribution since H* <= 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

from ..densities import DensityPair, log_weight
from ..diagnostics.ess import batch_means_se
from ..records import MonteCarloEstimate
from ..rng import SeedLike, as_generator, spawn_generators
from ..sampler.kernels import BlockPlan, ChainState, block_independence_step, check_block_size
from .scaling import DEFAULT_HSTAR_SAMPLES, estimate_H_star, estimate_mean_acceptance, h_variance_diagnostic

KS_LEVEL = 0.01
RATE_BATCHES = 20
# (resamples, inner_samples) for the kernel spread in convergence_in_n
DEFAULT_SPREAD_SAMPLES = (40, 1_000)


@dataclass
class JumpProcessPath:
    """Piecewise-constant path: states[0] before the first jump, states[i+1] after jump i."""

    jump_times: np.ndarray
    states: np.ndarray
    horizon: float
    candidates: int = 0

    def __post_init__(self):
        """Check jump times are strictly increasing within the horizon."""
        self.jump_times = np.asarray(self.jump_times, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.states.size != self.jump_times.size + 1:
            msg = "JumpProcessPath needs exactly one more state than jump times"
            raise ValueError(msg)
        if self.jump_times.size and (np.any(np.diff(self.jump_times) <= 0) or self.jump_times[-1] > self.horizon):
            msg = "Jump times must be strictly increasing and bounded by the horizon"
            raise ValueError(msg)

    @property
    def jump_count(self) -> int:
        """Number of jumps on [0, horizon]."""
        return int(self.jump_times.size)

    @property
    def jump_rate(self) -> float:
        """Jumps per unit time."""
        return self.jump_count / self.horizon

    def value_at(self, times) -> np.ndarray:
        """Path value at the given times (right-continuous)."""
        return self.states[np.searchsorted(self.jump_times, np.asarray(times, dtype=float), side="right")]

    def grid_values(self, step: float = 1.0) -> np.ndarray:
        """Path sampled at step, 2*step, ..., up to the horizon."""
        return self.value_at(np.arange(step, self.horizon + 1e-12, step))

    def counts_per_unit(self) -> np.ndarray:
        """Jump counts in each unit-time interval."""
        edges = np.arange(0.0, math.floor(self.horizon) + 1.0)
        counts, _ = np.histogram(self.jump_times, bins=edges)
        return counts


def simulate_limit_process(
    pair: DensityPair,
    k: int,
    x0: float,
    horizon: float,
    hstar_samples: int = DEFAULT_HSTAR_SAMPLES,
    rng: SeedLike = None,
) -> JumpProcessPath:
    """
    Simulate the limiting jump process by thinning a rate-k Poisson stream.

    Args:
        pair: Target/proposal pair
        k: Block size of the chain being approximated
        x0: Start value
        horizon: Time horizon (> 0)
        hstar_samples: Monte Carlo budget for each H* estimate
        rng: Seed or Generator

    Returns:
        JumpProcessPath on [0, horizon]
    """
    if not horizon > 0:
        msg = f"horizon must be positive, got {horizon}"
        raise ValueError(msg)
    if k < 1:
        msg = f"k must be at least 1, got {k}"
        raise ValueError(msg)
    generator = as_generator(rng)

    times: list[float] = []
    states = [float(x0)]
    current = float(x0)
    t = 0.0
    candidates = 0
    while True:
        t += generator.exponential(1.0 / k)
        if t > horizon:
            break
        candidates += 1
        y = float(pair.proposal_sampler(generator, 1)[0])
        h = estimate_H_star(pair, y, current, k, mc_samples=hstar_samples, seed=generator).value
        if generator.random() < h:
            times.append(t)
            states.append(y)
            current = y
    return JumpProcessPath(jump_times=np.array(times), states=np.array(states), horizon=horizon, candidates=candidates)


@dataclass(frozen=True)
class LimitComparison:
    """Jump rate and marginal of the scaled chain's component 0 against the limit process."""

    n: int
    k: int
    horizon: float
    chain_rate: MonteCarloEstimate
    limit_rate: MonteCarloEstimate
    theory_rate: MonteCarloEstimate
    chain_ks_pvalue: float
    limit_ks_pvalue: float

    @property
    def rate_gap(self) -> float:
        """Absolute difference between chain and limit jump rates."""
        return abs(self.chain_rate.value - self.limit_rate.value)

    @property
    def rate_gap_se(self) -> float:
        """Standard error of the rate difference."""
        return math.hypot(self.chain_rate.std_error, self.limit_rate.std_error)

    @property
    def rates_agree(self) -> bool:
        """Chain rate within 3 SE of both the limit-process rate and k E[1 ^ W_k*]."""
        theory_gap = abs(self.chain_rate.value - self.theory_rate.value)
        theory_se = math.hypot(self.chain_rate.std_error, self.theory_rate.std_error)
        return self.rate_gap <= 3 * self.rate_gap_se and theory_gap <= 3 * theory_se

    @property
    def passed(self) -> bool:
        """Rates agree and both marginals pass KS against the target at level 0.01."""
        return self.rates_agree and self.chain_ks_pvalue >= KS_LEVEL and self.limit_ks_pvalue >= KS_LEVEL

    def to_dict(self) -> dict:
        """Flat summary for CSV/JSON output."""
        return {
            "n": self.n,
            "k": self.k,
            "horizon": self.horizon,
            "chain_rate": self.chain_rate.value,
            "chain_rate_se": self.chain_rate.std_error,
            "limit_rate": self.limit_rate.value,
            "limit_rate_se": self.limit_rate.std_error,
            "theory_rate": self.theory_rate.value,
            "theory_rate_se": self.theory_rate.std_error,
            "rate_gap": self.rate_gap,
            "chain_ks_pvalue": self.chain_ks_pvalue,
            "limit_ks_pvalue": self.limit_ks_pvalue,
            "passed": self.passed,
        }


def _rate_estimate(counts: np.ndarray) -> MonteCarloEstimate:
    return MonteCarloEstimate(value=float(counts.mean()), std_error=batch_means_se(counts, RATE_BATCHES), samples=int(counts.size))


def _ks_pvalue(pair: DensityPair, values: np.ndarray) -> float:
    if pair.target_cdf is None or values.size == 0:
        return math.nan
    return float(stats.kstest(values, pair.target_cdf).pvalue)


def _scaled_chain(pair: DensityPair, n: int, k: int, horizon: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Run horizon*n chain steps; return component-0 jump counts per time unit and unit-grid values."""
    units = math.floor(horizon)
    state = ChainState.stationary(pair, n, rng)
    counts = np.zeros(units, dtype=int)
    grid = np.empty(units)
    for unit in range(units):
        for _ in range(n):
            plan = BlockPlan.draw(n, k, rng)
            state, record = block_independence_step(state, pair, k, rng, plan=plan)
            if record.accepted and np.any(plan.indices == 0):
                counts[unit] += 1
        grid[unit] = state.x[0]
    return counts, grid


def scaled_chain_vs_limit(
    pair: DensityPair,
    n: int,
    k: int,
    horizon: float,
    seed: SeedLike = None,
    hstar_samples: int = DEFAULT_HSTAR_SAMPLES,
    theory_samples: int = 100_000,
    logger: Optional[logging.Logger] = None,
) -> LimitComparison:
    """
    Compare component 0 of the time-rescaled n-component chain with the limit process.

    Runs horizon*n chain steps (one time unit = n steps) from stationarity and a
    limit-process path over the same horizon, then compares jump rates (batch-means
    standard errors over unit-time counts) and KS statistics of unit-grid values.

    Raises:
        ValueError: If horizon < 1 or k is out of range
    """
    if horizon < 1:
        msg = f"horizon must be at least one time unit, got {horizon}"
        raise ValueError(msg)
    check_block_size(k, n)
    chain_rng, limit_rng, theory_rng = spawn_generators(seed, 3)

    if logger:
        logger.debug(f"Scaled chain: n={n}, k={k}, {int(math.floor(horizon)) * n} steps")
    chain_counts, chain_grid = _scaled_chain(pair, n, k, horizon, chain_rng)

    x0 = float(pair.target_sampler(limit_rng, 1)[0])
    path = simulate_limit_process(pair, k, x0, math.floor(horizon), hstar_samples=hstar_samples, rng=limit_rng)
    if logger:
        logger.debug(f"Limit process: {path.jump_count} jumps from {path.candidates} candidates")

    acceptance = estimate_mean_acceptance(pair, k, mc_samples=theory_samples, seed=theory_rng)
    theory_rate = MonteCarloEstimate(value=k * acceptance.value, std_error=k * acceptance.std_error, samples=acceptance.samples)

    return LimitComparison(
        n=n,
        k=k,
        horizon=float(math.floor(horizon)),
        chain_rate=_rate_estimate(chain_counts),
        limit_rate=_rate_estimate(path.counts_per_unit()),
        theory_rate=theory_rate,
        chain_ks_pvalue=_ks_pvalue(pair, chain_grid),
        limit_ks_pvalue=_ks_pvalue(pair, path.grid_values()),
    )


def _spread_points(pair: DensityPair, rng: np.random.Generator) -> tuple[float, float]:
    """A target draw x1 and a proposal draw y with positive weight."""
    x1 = float(pair.target_sampler(rng, 1)[0])
    y = float(pair.proposal_sampler(rng, 1)[0])
    while log_weight(pair, y) == -math.inf:
        y = float(pair.proposal_sampler(rng, 1)[0])
    return y, x1


def convergence_in_n(
    pair: DensityPair,
    ns: list[int],
    k: int,
    horizon: float,
    seeds: list[int],
    hstar_samples: int = DEFAULT_HSTAR_SAMPLES,
    spread_samples: tuple[int, int] = DEFAULT_SPREAD_SAMPLES,
    logger: Optional[logging.Logger] = None,
) -> pd.DataFrame:
    """
    Run scaled_chain_vs_limit over several n and seeds.

    The chain's jump rate equals k E[1 ^ W_k*] at every n, so the n-dependence
    shows in the kernel: ``kernel_spread`` is the standard deviation of
    H(y, x^n) around H*(y, x1) at one fixed (y, x1), estimated with
    h_variance_diagnostic using ``spread_samples`` = (resamples, inner_samples).

    Returns:
        One row per (n, seed) with the comparison summary, ``kernel_spread`` and a
        ``mean_rate_gap`` column holding the across-seed average gap for that n
    """
    resamples, inner_samples = spread_samples
    y, x1 = _spread_points(pair, as_generator(seeds[0]))
    rows = []
    for n in sorted(ns):
        spread = h_variance_diagnostic(
            pair, y, x1, n, k, resamples=resamples, inner_samples=inner_samples, seed=np.random.SeedSequence((seeds[0], n))
        ).h_std
        for seed in seeds:
            comparison = scaled_chain_vs_limit(pair, n, k, horizon, seed=seed, hstar_samples=hstar_samples, logger=logger)
            rows.append({**comparison.to_dict(), "seed": seed, "kernel_spread": spread})
            if logger:
                logger.info(f"  n={n} seed={seed}: chain rate {comparison.chain_rate.value:.3f}, limit rate {comparison.limit_rate.value:.3f}")
        if logger:
            logger.info(f"  n={n}: H spread around H* {spread:.4f}")
    frame = pd.DataFrame(rows)
    frame["mean_rate_gap"] = frame.groupby("n")["rate_gap"].transform("mean")
    return frame


def gap_is_decreasing(frame: pd.DataFrame, column: str = "kernel_spread") -> bool:
    """Whether the across-seed mean of ``column`` decreases strictly as n grows."""
    gaps = frame.groupby("n")[column].mean().sort_index().to_numpy()
    return bool(np.all(np.diff(gaps) < 0))
