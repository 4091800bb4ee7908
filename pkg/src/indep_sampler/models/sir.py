"""
Bayesian inference for the general stochastic (SIR) epidemic with observed removals.

Each of the m infected individuals has an unobserved infection time I_j and an
observed removal time R_j, with infectious period R_j - I_j ~ Gamma(alpha, delta).
Infectives make contacts at rate beta with individuals chosen uniformly from the
population of size N. The likelihood of a completed epidemic is

    sum_{j != kappa} log(beta * Inf(I_j-) / N) - (beta / N) E + sum_j log Gamma(R_j - I_j; alpha, delta),

where kappa is the earliest infection, Inf(t-) counts infectives just before t and
E = integral S(t) Inf(t) dt is the total infection pressure (exposure), written as

    E = (N - m) sum_i (R_i - I_i) + sum_i sum_j [min(R_i, I_j) - min(I_i, I_j)].

Infection times are updated k at a time by the independence sampler with proposal
I_j' = R_j - Q_j, Q_j ~ Gamma(alpha, delta). The Gamma terms of the likelihood cancel
against the proposal, so the acceptance ratio only involves the infection terms and E.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy import special

from ..diagnostics.ess import batch_means_se
from ..diagnostics.tuning import tuning_summary
from ..experiments.runner import run_tasks, seeded_tasks
from ..records import StepRecord, Trace, TuningRow, TuningTable
from ..rng import SeedLike, as_generator
from ..sampler.kernels import check_block_size, metropolis_accept

DEFAULT_PRIOR_SHAPE = 1.0
DEFAULT_PRIOR_RATE = 1e-3
DEFAULT_ALPHA_SCALE = 0.1
MAX_SIMULATION_ATTEMPTS = 10_000


@dataclass(frozen=True)
class EpidemicData:
    """Observed removal times (sorted) in a population of size N."""

    removal_times: np.ndarray
    population_size: int
    order: Optional[np.ndarray] = None  # removal_times = raw[order] for loaded files
    source: str = ""

    def __post_init__(self):
        """Enforce m <= N and non-decreasing finite removal times."""
        removal_times = np.asarray(self.removal_times, dtype=float)
        object.__setattr__(self, "removal_times", removal_times)
        if removal_times.ndim != 1 or not np.all(np.isfinite(removal_times)):
            msg = "removal_times must be a finite 1-d sequence"
            raise ValueError(msg)
        if np.any(np.diff(removal_times) < 0):
            msg = "removal_times must be sorted non-decreasing"
            raise ValueError(msg)
        if removal_times.size > self.population_size:
            msg = f"{removal_times.size} removals exceed population size {self.population_size}"
            raise ValueError(msg)

    @property
    def m(self) -> int:
        """Number of infected individuals."""
        return int(self.removal_times.size)


@dataclass(frozen=True)
class SirParams:
    """Infection rate beta and Gamma(alpha, delta) infectious period (delta is a rate)."""

    beta: float
    alpha: float
    delta: float

    def __post_init__(self):
        """All parameters strictly positive."""
        if not (self.beta > 0 and self.alpha > 0 and self.delta > 0):
            msg = f"SIR parameters must be positive, got beta={self.beta}, alpha={self.alpha}, delta={self.delta}"
            raise ValueError(msg)


def exponential_log_prior(alpha: float, rate: float = DEFAULT_PRIOR_RATE) -> float:
    """Exponential(rate) log-density, -inf for alpha <= 0."""
    if alpha <= 0:
        return -math.inf
    return math.log(rate) - rate * alpha


@dataclass(frozen=True)
class SirPriors:
    """Gamma(shape, rate) priors on beta and delta and a log-prior for alpha."""

    beta_shape: float = DEFAULT_PRIOR_SHAPE
    beta_rate: float = DEFAULT_PRIOR_RATE
    delta_shape: float = DEFAULT_PRIOR_SHAPE
    delta_rate: float = DEFAULT_PRIOR_RATE
    alpha_log_prior: Callable[[float], float] = exponential_log_prior


@dataclass
class SirAugmentedState:
    """Infection times, parameters and cached likelihood pieces."""

    infection_times: np.ndarray
    params: SirParams
    log_likelihood_cache: float
    exposure: float
    log_infective_sum: float


def _check_structure(I: np.ndarray, R: np.ndarray, N: int) -> None:
    if I.shape != R.shape or I.ndim != 1:
        msg = f"infection and removal times must be 1-d of equal length, got {I.shape} and {R.shape}"
        raise ValueError(msg)
    if not (np.all(np.isfinite(I)) and np.all(np.isfinite(R))):
        msg = "infection and removal times must be finite"
        raise ValueError(msg)
    if R.size > N:
        msg = f"{R.size} infections exceed population size {N}"
        raise ValueError(msg)


def exposure(I: np.ndarray, R: np.ndarray, N: int) -> float:
    """Total infection pressure integral S(t) Inf(t) dt, computed from scratch in O(m^2)."""
    m = I.size
    pairs = np.minimum(R[:, None], I[None, :]) - np.minimum(I[:, None], I[None, :])
    return float((N - m) * np.sum(R - I) + pairs.sum())


def _exposure_delta(I_old: np.ndarray, I_new: np.ndarray, R: np.ndarray, changed: np.ndarray, N: int) -> float:
    """Change in exposure when only the ``changed`` infection times move, in O(k m)."""
    m = I_old.size
    others = np.ones(m, dtype=bool)
    others[changed] = False

    def block_terms(I: np.ndarray) -> float:
        rows = np.minimum(R[changed, None], I[None, :]) - np.minimum(I[changed, None], I[None, :])
        cols = np.minimum(R[others, None], I[None, changed]) - np.minimum(I[others, None], I[None, changed])
        return float(rows.sum() + cols.sum())

    own = (N - m) * float(np.sum(I_old[changed] - I_new[changed]))
    return own + block_terms(I_new) - block_terms(I_old)


def log_infective_sum(I: np.ndarray, R: np.ndarray) -> float:
    """
    Sum over non-initial infections of log Inf(I_j-); -inf if any count is zero.

    Inf(I_j-) is the number infected strictly before I_j minus the number removed by I_j.
    """
    if I.size <= 1:
        return 0.0
    infected_before = np.searchsorted(np.sort(I), I, side="left")
    removed_by = np.searchsorted(np.sort(R), I, side="right")
    counts = infected_before - removed_by
    counts = np.delete(counts, int(np.argmin(I)))
    if np.any(counts <= 0):
        return -math.inf
    return float(np.sum(np.log(counts)))


def gamma_log_density_sum(periods: np.ndarray, alpha: float, delta: float) -> float:
    """Sum of Gamma(alpha, rate delta) log-densities; -inf if any period is not positive."""
    periods = np.asarray(periods, dtype=float)
    if np.any(periods <= 0):
        return -math.inf
    n = periods.size
    return float(
        n * (alpha * math.log(delta) - special.gammaln(alpha))
        + (alpha - 1.0) * np.sum(np.log(periods))
        - delta * np.sum(periods)
    )


def _gamma_log_terms(I: np.ndarray, R: np.ndarray, alpha: float, delta: float) -> float:
    return gamma_log_density_sum(R - I, alpha, delta)


def _assemble_log_likelihood(m: int, params: SirParams, N: int, log_inf: float, exposure_value: float, gamma_terms: float) -> float:
    if log_inf == -math.inf or gamma_terms == -math.inf:
        return -math.inf
    infections = (m - 1) * math.log(params.beta / N) if m > 1 else 0.0
    return infections + log_inf - params.beta * exposure_value / N + gamma_terms


def sir_log_likelihood(I, R, params: SirParams, N: int) -> float:
    """
    Log-likelihood of a completed epidemic given infection and removal times.

    Returns -inf when some I_j >= R_j or the epidemic is disconnected (no
    infective just before some non-initial infection).

    Raises:
        ValueError: On structural violations (shape mismatch, non-finite values, m > N)
    """
    I = np.asarray(I, dtype=float)
    R = np.asarray(R, dtype=float)
    _check_structure(I, R, N)
    if I.size == 0:
        return 0.0
    if np.any(I >= R):
        return -math.inf
    log_inf = log_infective_sum(I, R)
    return _assemble_log_likelihood(I.size, params, N, log_inf, exposure(I, R, N), _gamma_log_terms(I, R, params.alpha, params.delta))


def refresh_cache(state: SirAugmentedState, data: EpidemicData) -> SirAugmentedState:
    """Recompute the cached log-likelihood for the current parameters from the cached pieces."""
    R = data.removal_times
    gamma_terms = _gamma_log_terms(state.infection_times, R, state.params.alpha, state.params.delta)
    state.log_likelihood_cache = _assemble_log_likelihood(
        data.m, state.params, data.population_size, state.log_infective_sum, state.exposure, gamma_terms
    )
    return state


def repair_connectivity(I: np.ndarray, R: np.ndarray) -> np.ndarray:
    """
    Shift infection times so every non-initial infection has an infective present.

    Individuals are processed in infection order; one infected after every earlier
    individual has been removed is moved to the midpoint of the infectious period
    of the processed individual removed last.
    """
    repaired = np.array(I, dtype=float)
    order = np.argsort(repaired, kind="stable")
    last = int(order[0])
    for j in order[1:]:
        if repaired[j] >= R[last]:
            repaired[j] = 0.5 * (repaired[last] + R[last])
        if R[j] > R[last]:
            last = int(j)
    return repaired


def initial_state(data: EpidemicData, alpha: float, delta: Optional[float] = None, beta: Optional[float] = None) -> SirAugmentedState:
    """
    Deterministic start: I_j = R_j - alpha/delta repaired to connectivity.

    delta defaults to alpha / tau with tau = (R_max - R_min)/m (1 when zero), and beta
    to max(m-1, 1) N / E.

    Raises:
        RuntimeError: If the start has zero likelihood
    """
    R = data.removal_times
    m, N = data.m, data.population_size
    if m == 0:
        msg = "SIR data has no removals"
        raise ValueError(msg)
    if delta is None:
        spread = (R[-1] - R[0]) / m
        delta = alpha / (spread if spread > 0 else 1.0)
    I = repair_connectivity(R - alpha / delta, R)
    exposure_value = exposure(I, R, N)
    if beta is None:
        beta = max(m - 1, 1) * N / exposure_value
    state = SirAugmentedState(
        infection_times=I,
        params=SirParams(beta=beta, alpha=alpha, delta=delta),
        log_likelihood_cache=math.nan,
        exposure=exposure_value,
        log_infective_sum=log_infective_sum(I, R),
    )
    refresh_cache(state, data)
    if not math.isfinite(state.log_likelihood_cache):
        msg = "initial SIR state has zero likelihood"
        raise RuntimeError(msg)
    return state


def update_infection_times_block(
    state: SirAugmentedState,
    data: EpidemicData,
    k: int,
    rng: np.random.Generator,
    indices: Optional[np.ndarray] = None,
    proposal: Optional[np.ndarray] = None,
) -> tuple[SirAugmentedState, StepRecord]:
    """
    Independence update of k infection times, I_j' = R_j - Q_j with Q_j ~ Gamma(alpha, delta).

    Args:
        state: Current augmented state (updated in place on acceptance)
        data: Observed removals
        k: Block size, 1 <= k <= m
        rng: Random generator
        indices: Optional fixed block
        proposal: Optional forced new infection times for the block

    Returns:
        (state, StepRecord) with log_ratio = change in infection terms minus beta/N times the change in E

    Raises:
        ValueError: If k is out of range
    """
    R = data.removal_times
    m, N = data.m, data.population_size
    check_block_size(k, m)
    idx = rng.choice(m, size=k, replace=False) if indices is None else np.asarray(indices, dtype=int)
    if idx.size != k:
        msg = f"block has {idx.size} indices, expected k={k}"
        raise ValueError(msg)
    params = state.params
    if proposal is None:
        proposed = R[idx] - rng.gamma(params.alpha, 1.0 / params.delta, size=k)
    else:
        proposed = np.array(proposal, dtype=float, ndmin=1)

    I_old = state.infection_times
    I_new = I_old.copy()
    I_new[idx] = proposed

    new_log_inf = log_infective_sum(I_new, R) if np.all(I_new < R) else -math.inf
    if new_log_inf == -math.inf:
        log_ratio = -math.inf
        exposure_change = 0.0
    else:
        exposure_change = _exposure_delta(I_old, I_new, R, idx, N)
        log_ratio = new_log_inf - state.log_infective_sum - params.beta * exposure_change / N

    accepted = metropolis_accept(log_ratio, rng)
    if accepted:
        state.infection_times = I_new
        state.exposure += exposure_change
        state.log_infective_sum = new_log_inf
        refresh_cache(state, data)
    return state, StepRecord(accepted=accepted, k=k, log_ratio=log_ratio, log_target=state.log_likelihood_cache)


def gibbs_beta(state: SirAugmentedState, data: EpidemicData, prior_shape: float, prior_rate: float, rng: np.random.Generator) -> float:
    """Draw beta ~ Gamma(prior_shape + m - 1, prior_rate + E/N)."""
    m = data.m
    shape = prior_shape + max(m - 1, 0)
    rate = prior_rate + state.exposure / data.population_size
    return float(rng.gamma(shape, 1.0 / rate))


def gibbs_delta(state: SirAugmentedState, data: EpidemicData, prior_shape: float, prior_rate: float, rng: np.random.Generator) -> float:
    """Draw delta ~ Gamma(prior_shape + m alpha, prior_rate + sum(R - I))."""
    shape = prior_shape + data.m * state.params.alpha
    rate = prior_rate + float(np.sum(data.removal_times - state.infection_times))
    return float(rng.gamma(shape, 1.0 / rate))


def update_alpha_rwm(
    state: SirAugmentedState,
    data: EpidemicData,
    scale: float,
    prior: Callable[[float], float],
    rng: np.random.Generator,
) -> float:
    """
    Log-scale random walk Metropolis update of the Gamma shape alpha.

    The target is prior(alpha) times the Gamma infectious-period terms; the
    log-scale move contributes the Jacobian log(alpha'/alpha).
    """
    alpha = state.params.alpha
    delta = state.params.delta
    periods = data.removal_times - state.infection_times
    proposed = alpha * math.exp(scale * rng.standard_normal())

    def log_target(a: float) -> float:
        return prior(a) + gamma_log_density_sum(periods, a, delta) + math.log(a)

    current = log_target(alpha)
    candidate = log_target(proposed)
    log_ratio = -math.inf if candidate == -math.inf else candidate - current
    return proposed if metropolis_accept(log_ratio, rng) else alpha


def update_parameters(
    state: SirAugmentedState,
    data: EpidemicData,
    priors: SirPriors,
    rng: np.random.Generator,
    unknown_alpha: bool = False,
    alpha_scale: float = DEFAULT_ALPHA_SCALE,
) -> SirAugmentedState:
    """Gibbs beta, Gibbs delta and, when unknown_alpha, an alpha RWM step; the likelihood cache follows the new parameters."""
    beta = gibbs_beta(state, data, priors.beta_shape, priors.beta_rate, rng)
    state.params = replace(state.params, beta=beta)
    delta = gibbs_delta(state, data, priors.delta_shape, priors.delta_rate, rng)
    state.params = replace(state.params, delta=delta)
    if unknown_alpha:
        state.params = replace(state.params, alpha=update_alpha_rwm(state, data, alpha_scale, priors.alpha_log_prior, rng))
    return refresh_cache(state, data)


@dataclass
class SirRunResult:
    """Infection-time tuning row, parameter traces and posterior means of one SIR chain."""

    row: TuningRow
    traces: dict[str, Trace] = field(default_factory=dict)
    posterior_means: dict[str, float] = field(default_factory=dict)
    final_state: Optional[SirAugmentedState] = None


def run_sir_mcmc(
    data: EpidemicData,
    alpha: Optional[float],
    k: int,
    iterations: int,
    burn_in: int = 0,
    seed: SeedLike = None,
    priors: Optional[SirPriors] = None,
    alpha_scale: float = DEFAULT_ALPHA_SCALE,
    logger: Optional[logging.Logger] = None,
) -> SirRunResult:
    """
    Data-augmentation MCMC: Gibbs beta, Gibbs delta, optional alpha RWM, then a k-block infection-time update.

    Args:
        data: Observed removals
        alpha: Fixed Gamma shape, or None to treat it as unknown
        k: Infection-time block size, 1 <= k <= m
        iterations: Total sweeps, burn-in included
        burn_in: Leading sweeps excluded from summaries
        seed: Seed, SeedSequence or Generator
        priors: Prior settings (defaults: Gamma(1, 1e-3) on beta and delta, Exponential(1e-3) on alpha)
        alpha_scale: Log-scale RWM step for alpha
        logger: Optional logger

    Returns:
        SirRunResult whose row has mean_moved = k x acceptance
    """
    if not iterations > burn_in >= 0:
        msg = f"Need iterations > burn_in >= 0, got iterations={iterations}, burn_in={burn_in}"
        raise ValueError(msg)
    check_block_size(k, data.m)
    priors = priors or SirPriors()
    rng = as_generator(seed)
    unknown_alpha = alpha is None
    state = initial_state(data, alpha=1.0 if unknown_alpha else alpha)

    kept = iterations - burn_in
    accepted = np.zeros(kept, dtype=bool)
    traces = {name: np.empty(kept) for name in ("beta", "delta", "alpha")}
    for step in range(iterations):
        state = update_parameters(state, data, priors, rng, unknown_alpha, alpha_scale)
        state, record = update_infection_times_block(state, data, k, rng)

        index = step - burn_in
        if index >= 0:
            accepted[index] = record.accepted
            traces["beta"][index] = state.params.beta
            traces["delta"][index] = state.params.delta
            traces["alpha"][index] = state.params.alpha

    acceptance = float(accepted.mean())
    means = {f"{name}_mean": float(values.mean()) for name, values in traces.items()}
    row = TuningRow.from_acceptance(k, acceptance, mc_se=batch_means_se(accepted), **means)
    if logger:
        logger.debug(f"  SIR k={k}: acceptance {acceptance:.3f}, posterior mean beta {means['beta_mean']:.4g}")
    return SirRunResult(
        row=row,
        traces={name: Trace(values, label=name) for name, values in traces.items()},
        posterior_means=means,
        final_state=state,
    )


def _sir_task(removal_times: np.ndarray, population_size: int, alpha: Optional[float], k: int, iterations: int, burn_in: int, seed) -> SirRunResult:
    """Worker entry for run_sir_grid; drops the final state to keep results small."""
    data = EpidemicData(removal_times=removal_times, population_size=population_size)
    result = run_sir_mcmc(data, alpha, k, iterations, burn_in, seed=seed)
    result.final_state = None
    return result


def default_sir_grid(m: int, points: Optional[int] = None) -> list[int]:
    """Every k in 1..m, or ``points`` evenly spaced values when m is larger."""
    if points is None or m <= points:
        return list(range(1, m + 1))
    return sorted({int(k) for k in np.rint(np.linspace(1, m, points))})


def run_sir_grid(
    data: EpidemicData,
    alpha: Optional[float],
    k_grid: Optional[list[int]],
    iterations: int,
    burn_in: int = 0,
    seed: SeedLike = None,
    threads: int = 1,
    logger: Optional[logging.Logger] = None,
) -> list[SirRunResult]:
    """
    One SIR chain per k on private streams; k_grid defaults to 1..m.

    Returns:
        Run results (row, traces, posterior means) in increasing k
    """
    grid = sorted(set(k_grid)) if k_grid else default_sir_grid(data.m)
    for k in grid:
        check_block_size(k, data.m)
    if logger:
        mode = "unknown" if alpha is None else f"{alpha:g}"
        logger.info(f"SIR sweep: m={data.m}, N={data.population_size}, alpha={mode}, {len(grid)} k values")
    tasks = [
        {
            "removal_times": data.removal_times,
            "population_size": data.population_size,
            "alpha": alpha,
            "k": k,
            "iterations": iterations,
            "burn_in": burn_in,
        }
        for k in grid
    ]
    return run_tasks(_sir_task, seeded_tasks(seed, tasks), threads=threads, logger=logger)


def sir_tuning_table(runs: list[SirRunResult], data: EpidemicData, alpha: Optional[float], iterations: int, burn_in: int) -> TuningTable:
    """Tuning table of a SIR k-grid with posterior means in each row's extras."""
    metadata = {
        "model": "sir",
        "alpha": "unknown" if alpha is None else alpha,
        "m": data.m,
        "population_size": data.population_size,
        "iterations": iterations,
        "burn_in": burn_in,
        "source": data.source,
        "k_grid": [run.row.k for run in runs],
    }
    return tuning_summary([run.row for run in runs], metadata)


def sweep_sir(
    data: EpidemicData,
    alpha: Optional[float],
    k_grid: Optional[list[int]],
    iterations: int,
    burn_in: int = 0,
    seed: SeedLike = None,
    threads: int = 1,
    logger: Optional[logging.Logger] = None,
) -> TuningTable:
    """run_sir_grid summarised as a TuningTable."""
    runs = run_sir_grid(data, alpha, k_grid, iterations, burn_in, seed=seed, threads=threads, logger=logger)
    return sir_tuning_table(runs, data, alpha, iterations, burn_in)


@dataclass(frozen=True)
class SimulatedEpidemic:
    """A simulated completed epidemic with its true infection times and parameters."""

    data: EpidemicData
    infection_times: np.ndarray
    params: SirParams


def simulate_sir_epidemic(
    population_size: int,
    params: SirParams,
    seed: SeedLike = None,
    min_final_size: int = 2,
    max_attempts: int = MAX_SIMULATION_ATTEMPTS,
) -> SimulatedEpidemic:
    """
    Event-driven simulation of the general stochastic epidemic from one initial infective at time 0.

    Epidemics with fewer than ``min_final_size`` infections are discarded and re-run.

    Raises:
        RuntimeError: If no run reaches min_final_size within max_attempts
    """
    if not 1 <= min_final_size <= population_size:
        msg = f"min_final_size must be in 1..{population_size}, got {min_final_size}"
        raise ValueError(msg)
    rng = as_generator(seed)
    for _ in range(max_attempts):
        infections, removals = _simulate_once(population_size, params, rng)
        if infections.size >= min_final_size:
            order = np.argsort(removals, kind="stable")
            data = EpidemicData(removal_times=removals[order], population_size=population_size, source="simulated")
            return SimulatedEpidemic(data=data, infection_times=infections[order], params=params)
    msg = f"no simulated epidemic reached {min_final_size} infections in {max_attempts} attempts"
    raise RuntimeError(msg)


def _simulate_once(N: int, params: SirParams, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    infections = [0.0]
    removals = [rng.gamma(params.alpha, 1.0 / params.delta)]
    pending = sorted(removals)
    t = 0.0
    susceptible = N - 1
    while pending:
        infectives = len(pending)
        rate = params.beta * susceptible * infectives / N
        next_infection = t + rng.exponential(1.0 / rate) if rate > 0 else math.inf
        if next_infection < pending[0]:
            t = next_infection
            removal = t + rng.gamma(params.alpha, 1.0 / params.delta)
            infections.append(t)
            removals.append(removal)
            pending.append(removal)
            pending.sort()
            susceptible -= 1
        else:
            t = pending.pop(0)
    return np.array(infections), np.array(removals)


def beta_for_final_fraction(fraction: float, mean_infectious_period: float) -> float:
    """
    Infection rate whose major-outbreak final-size fraction is ``fraction``.

    Solves z = 1 - exp(-R0 z) for R0 and returns R0 / mean infectious period.
    """
    if not 0.0 < fraction < 1.0:
        msg = f"fraction must be in (0, 1), got {fraction}"
        raise ValueError(msg)
    r0 = -math.log1p(-fraction) / fraction
    return r0 / mean_infectious_period


def simulated_dataset(
    population_size: int = 120,
    alpha: float = 2.0,
    mean_infectious_period: float = 10.0,
    final_fraction: float = 0.25,
    seed: SeedLike = 0,
) -> SimulatedEpidemic:
    """
    Simulated stand-in for an observed outbreak.

    delta = alpha / mean period and beta from the final-size relation; runs
    below half the target final size are discarded.
    """
    delta = alpha / mean_infectious_period
    beta = beta_for_final_fraction(final_fraction, mean_infectious_period)
    min_size = max(2, int(0.5 * final_fraction * population_size))
    return simulate_sir_epidemic(population_size, SirParams(beta=beta, alpha=alpha, delta=delta), seed=seed, min_final_size=min_size)


def simulation_study_grid(
    populations: tuple[int, ...] = (200, 400, 600, 800, 1000, 1200),
    fractions: tuple[float, ...] = (0.25, 0.5, 0.75),
    alphas: tuple[float, ...] = (1, 2, 3, 5, 10, 15, 20),
    mean_infectious_period: float = 10.0,
) -> list[dict[str, float]]:
    """Settings of the SIR simulation study: delta = alpha / 10 and beta from the target final size."""
    grid = []
    for population in populations:
        for fraction in fractions:
            for alpha in alphas:
                grid.append({
                    "population_size": population,
                    "target_m": round(fraction * population),
                    "alpha": float(alpha),
                    "delta": alpha / mean_infectious_period,
                    "beta": beta_for_final_fraction(fraction, mean_infectious_period),
                })
    return grid
