"""
Pseudo-marginal inference for the birth-death-mutation (BDM) model.

The population starts from one individual of one type. At each event of the
embedded jump chain an individual chosen uniformly gives birth (probability a),
dies (d) or mutates into a brand-new type (1 - a - d). The run stops when the
population reaches the target size N_T (success), dies out (extinct) or the
latent vectors run out (latent_exhausted).

All randomness is non-centered into fixed-length uniform vectors: u_i picks the
kind of event i, w_i picks the individual (index ceil(w_i * total) in the order of
type creation), and v drives the estimator of the probability that a sample of the
observed size, drawn without replacement, shows the observed cluster sizes.
The chain updates (a, d) by random walk Metropolis at fixed latents and k entries
each of u and w by an independence sampler; v has its own independence update.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from ..diagnostics.ess import batch_means_se, effective_sample_size
from ..diagnostics.tuning import tuning_summary
from ..experiments.runner import run_tasks, seeded_tasks
from ..records import EssReport, StepRecord, Trace, TuningRow, TuningTable
from ..rng import SeedLike, as_generator
from ..sampler.kernels import check_block_size, metropolis_accept, rwm_step

SUCCESS = "success"
EXTINCT = "extinct"
LATENT_EXHAUSTED = "latent_exhausted"

DEFAULT_N_REP = 25
DEFAULT_N_LATENT = 100_000
DEFAULT_PARAM_SCALES = (0.02, 0.02)
MAX_INIT_ATTEMPTS = 1_000


@dataclass(frozen=True)
class ClusterData:
    """Observed cluster-size distribution: (size, count) pairs with distinct sizes."""

    clusters: tuple[tuple[int, int], ...]
    source: str = ""

    def __post_init__(self):
        """Sizes distinct and positive, counts positive; stored largest size first."""
        clusters = tuple(sorted(((int(s), int(c)) for s, c in self.clusters), reverse=True))
        sizes = [size for size, _ in clusters]
        if len(set(sizes)) != len(sizes):
            msg = f"cluster sizes must be distinct, got {sorted(sizes)}"
            raise ValueError(msg)
        if any(size < 1 or count < 1 for size, count in clusters):
            msg = "cluster sizes and counts must be positive"
            raise ValueError(msg)
        if not clusters:
            msg = "ClusterData needs at least one cluster"
            raise ValueError(msg)
        object.__setattr__(self, "clusters", clusters)

    @property
    def sample_size(self) -> int:
        """Number of sampled individuals, sum of size x count."""
        return sum(size * count for size, count in self.clusters)

    @property
    def n_clusters(self) -> int:
        """Number of observed clusters."""
        return sum(count for _, count in self.clusters)

    @property
    def singletons(self) -> int:
        """Number of clusters of size one."""
        return dict(self.clusters).get(1, 0)

    def cluster_sizes(self) -> np.ndarray:
        """One entry per cluster, largest first."""
        return np.repeat([size for size, _ in self.clusters], [count for _, count in self.clusters])

    @classmethod
    def from_type_counts(cls, counts, source: str = "") -> "ClusterData":
        """Tabulate the positive entries of per-type sampled counts."""
        values = np.asarray(counts, dtype=int)
        sizes, frequencies = np.unique(values[values > 0], return_counts=True)
        return cls(clusters=tuple(zip(sizes.tolist(), frequencies.tolist())), source=source)


@dataclass(frozen=True)
class BdmParams:
    """Birth probability a and death probability d per event (mutation 1 - a - d)."""

    a: float
    d: float

    def __post_init__(self):
        """Require a, d > 0 and a + d < 1."""
        if not is_valid_params(self.a, self.d):
            msg = f"BDM parameters need a, d > 0 and a + d < 1, got a={self.a}, d={self.d}"
            raise ValueError(msg)

    @property
    def mutation(self) -> float:
        """Mutation probability."""
        return 1.0 - self.a - self.d


def is_valid_params(a: float, d: float) -> bool:
    """Whether (a, d) lies in the open triangle a, d > 0, a + d < 1."""
    return a > 0 and d > 0 and a + d < 1


@dataclass(frozen=True)
class BdmPopulation:
    """Outcome of one BDM simulation: type counts in creation order plus bookkeeping."""

    type_counts: np.ndarray
    total: int
    events_used: int
    outcome: str
    born: int = 1
    died: int = 0

    @property
    def is_success(self) -> bool:
        """Reached the target size."""
        return self.outcome == SUCCESS


class _FenwickCounts:
    """Per-type counts with prefix-sum search, types in creation order."""

    def __init__(self, capacity: int):
        self.size = capacity
        self.tree = [0] * (capacity + 1)
        self.counts = [0] * capacity
        self.top = 1 << (capacity.bit_length() - 1) if capacity else 0

    def add(self, slot: int, delta: int) -> None:
        self.counts[slot] += delta
        i = slot + 1
        tree, size = self.tree, self.size
        while i <= size:
            tree[i] += delta
            i += i & -i

    def find(self, index: int) -> int:
        """Slot holding the index-th individual (1-based)."""
        pos, remaining, step = 0, index, self.top
        tree, size = self.tree, self.size
        while step:
            nxt = pos + step
            if nxt <= size and tree[nxt] < remaining:
                pos = nxt
                remaining -= tree[nxt]
            step >>= 1
        return pos


def simulate_bdm(params: BdmParams, u: np.ndarray, w: np.ndarray, target_size: int) -> BdmPopulation:
    """
    Deterministic BDM simulation driven by the latent uniforms.

    Args:
        params: Birth and death probabilities
        u: Event-kind uniforms (birth if u_i < a, death if u_i < a + d, else mutation)
        w: Individual-selection uniforms, same length as u
        target_size: Population size N_T that ends a successful run

    Returns:
        BdmPopulation with outcome 'success', 'extinct' or 'latent_exhausted'

    Raises:
        ValueError: If target_size < 1 or u and w differ in length
    """
    if target_size < 1:
        msg = f"target_size must be at least 1, got {target_size}"
        raise ValueError(msg)
    if len(u) != len(w):
        msg = f"u and w must have equal length, got {len(u)} and {len(w)}"
        raise ValueError(msg)
    if target_size == 1:
        return BdmPopulation(type_counts=np.array([1]), total=1, events_used=0, outcome=SUCCESS)

    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    step = np.where(u < params.a, 1, np.where(u < params.a + params.d, -1, 0))
    totals = 1 + np.cumsum(step)
    hits = np.flatnonzero((totals == target_size) | (totals == 0))
    if hits.size:
        stop = int(hits[0]) + 1
        outcome = SUCCESS if totals[hits[0]] == target_size else EXTINCT
    else:
        stop = int(u.size)
        outcome = LATENT_EXHAUSTED

    kinds = step[:stop]
    before = np.concatenate(([1], totals[: stop - 1])) if stop else np.array([], dtype=int)
    chosen = np.maximum(1, np.ceil(w[:stop] * before)).astype(int)

    counts = _FenwickCounts(1 + int(np.count_nonzero(kinds == 0)))
    counts.add(0, 1)
    next_slot = 1
    for kind, index in zip(kinds.tolist(), chosen.tolist()):
        slot = counts.find(index)
        if kind == 1:
            counts.add(slot, 1)
        elif kind == -1:
            counts.add(slot, -1)
        else:
            counts.add(slot, -1)
            counts.add(next_slot, 1)
            next_slot += 1

    births = int(np.count_nonzero(kinds == 1))
    deaths = int(np.count_nonzero(kinds == -1))
    type_counts = np.array([c for c in counts.counts if c > 0], dtype=int)
    total = int(totals[stop - 1]) if stop else 1
    return BdmPopulation(
        type_counts=type_counts,
        total=total,
        events_used=stop,
        outcome=outcome,
        born=1 + births,
        died=deaths,
    )


def _log_binomial(n: np.ndarray, k: int) -> np.ndarray:
    """log C(n, k), -inf where n < k."""
    n = np.asarray(n, dtype=float)
    with np.errstate(invalid="ignore"):
        values = special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)
    return np.where(n >= k, values, -np.inf)


def _log_symmetry_and_total(pop: BdmPopulation, data: ClusterData) -> float:
    multiplicities = sum(float(special.gammaln(count + 1)) for _, count in data.clusters)
    return multiplicities + float(_log_binomial(np.array([pop.total]), data.sample_size)[0])


def observation_log_estimates(pop: BdmPopulation, data: ClusterData, v: np.ndarray, n_rep: int = DEFAULT_N_REP) -> np.ndarray:
    """
    Per-block log estimates of the probability of the observed cluster sizes.

    Block b uses v[b * n_clusters:(b + 1) * n_clusters]. Clusters are assigned,
    largest first, to distinct population types chosen with probability proportional
    to C(c_t, s) among unused types; the block estimate is the product of the
    normalisers divided by the equal-size symmetries and C(total, sample_size).
    Each block is unbiased for the without-replacement sampling probability.
    """
    n_clusters = data.n_clusters
    if len(v) < n_rep * n_clusters:
        msg = f"v needs {n_rep * n_clusters} entries for {n_rep} blocks, got {len(v)}"
        raise ValueError(msg)
    impossible = np.full(n_rep, -np.inf)
    if not pop.is_success or pop.total < data.sample_size:
        return impossible
    counts = np.asarray(pop.type_counts)
    sizes = data.cluster_sizes()
    if counts.size < n_clusters or counts.max() < sizes[0]:
        return impossible

    uniforms = np.asarray(v[: n_rep * n_clusters], dtype=float).reshape(n_rep, n_clusters)
    log_total = np.zeros(n_rep)
    used = np.zeros((n_rep, counts.size), dtype=bool)
    rows = np.arange(n_rep)
    log_weight_cache: dict[int, np.ndarray] = {}
    for position, size in enumerate(sizes.tolist()):
        if size not in log_weight_cache:
            log_weight_cache[size] = _log_binomial(counts, size)
        log_weights = np.where(used, -np.inf, log_weight_cache[size][None, :])
        peak = log_weights.max(axis=1)
        alive = np.isfinite(peak)
        if not alive.any():
            return impossible
        scaled = np.exp(log_weights - np.where(alive, peak, 0.0)[:, None])
        cumulative = np.cumsum(scaled, axis=1)
        norm = cumulative[:, -1]
        log_total += np.where(alive, peak + np.log(np.where(alive, norm, 1.0)), -np.inf)
        targets = uniforms[:, position] * norm
        choice = np.minimum((cumulative <= targets[:, None]).sum(axis=1), counts.size - 1)
        used[rows[alive], choice[alive]] = True
    return log_total - _log_symmetry_and_total(pop, data)


def estimate_obs_loglik(pop: BdmPopulation, data: ClusterData, v: np.ndarray, n_rep: int = DEFAULT_N_REP) -> float:
    """
    Log of the v-driven estimate of the observed cluster-size probability, averaged over n_rep blocks.

    -inf when the run did not succeed, the population is smaller than the sample,
    or no block can reproduce the observed partition.
    """
    per_block = observation_log_estimates(pop, data, v, n_rep)
    if np.all(np.isneginf(per_block)):
        return -math.inf
    return float(special.logsumexp(per_block) - math.log(n_rep))


@dataclass
class BdmLatentState:
    """Latent uniforms, the population they generate and the cached log-likelihood estimate."""

    u: np.ndarray
    w: np.ndarray
    v: np.ndarray
    loglik_estimate: float
    population: BdmPopulation

    @property
    def n_latent(self) -> int:
        """Length of u and w."""
        return int(self.u.size)


@dataclass(frozen=True)
class LatentProposal:
    """Forced new values for chosen entries of u and w."""

    u_indices: np.ndarray
    u_values: np.ndarray
    w_indices: np.ndarray
    w_values: np.ndarray


def initial_latent_state(
    params: BdmParams,
    data: ClusterData,
    n_latent: int,
    target_size: int,
    rng: np.random.Generator,
    n_rep: int = DEFAULT_N_REP,
    max_attempts: int = MAX_INIT_ATTEMPTS,
    logger: Optional[logging.Logger] = None,
) -> BdmLatentState:
    """
    Draw latents until the likelihood estimate is finite.

    Raises:
        RuntimeError: If no draw gives a finite estimate within max_attempts
    """
    n_v = n_rep * data.n_clusters
    for attempt in range(1, max_attempts + 1):
        u, w, v = rng.random(n_latent), rng.random(n_latent), rng.random(n_v)
        pop = simulate_bdm(params, u, w, target_size)
        loglik = estimate_obs_loglik(pop, data, v, n_rep)
        if math.isfinite(loglik):
            return BdmLatentState(u=u, w=w, v=v, loglik_estimate=loglik, population=pop)
        if logger and attempt % 100 == 0:
            logger.warning(f"  BDM initialisation: {attempt} draws without a finite likelihood ({pop.outcome})")
    msg = f"no latent draw gave a finite likelihood in {max_attempts} attempts"
    raise RuntimeError(msg)


def update_latents_block(
    state: BdmLatentState,
    params: BdmParams,
    data: ClusterData,
    k: int,
    target_size: int,
    rng: np.random.Generator,
    n_rep: int = DEFAULT_N_REP,
    proposal: Optional[LatentProposal] = None,
) -> tuple[BdmLatentState, StepRecord]:
    """
    Refresh k entries of u and k entries of w (independent index sets) and re-simulate.

    The uniform prior and uniform proposal cancel, so the move is accepted with
    probability min(1, exp(loglik' - loglik)). The state is updated in place and
    reverted on rejection.

    Raises:
        ValueError: If k is out of range
    """
    check_block_size(k, state.n_latent)
    if proposal is None:
        proposal = LatentProposal(
            u_indices=rng.choice(state.n_latent, size=k, replace=False),
            u_values=rng.random(k),
            w_indices=rng.choice(state.n_latent, size=k, replace=False),
            w_values=rng.random(k),
        )
    old_u = state.u[proposal.u_indices].copy()
    old_w = state.w[proposal.w_indices].copy()
    state.u[proposal.u_indices] = proposal.u_values
    state.w[proposal.w_indices] = proposal.w_values

    pop = simulate_bdm(params, state.u, state.w, target_size)
    loglik = estimate_obs_loglik(pop, data, state.v, n_rep)
    log_ratio = -math.inf if loglik == -math.inf else loglik - state.loglik_estimate
    accepted = metropolis_accept(log_ratio, rng)
    if accepted:
        state.population = pop
        state.loglik_estimate = loglik
    else:
        state.u[proposal.u_indices] = old_u
        state.w[proposal.w_indices] = old_w
    return state, StepRecord(accepted=accepted, k=k, log_ratio=log_ratio, log_target=state.loglik_estimate)


def update_v_block(
    state: BdmLatentState,
    data: ClusterData,
    k_v: int,
    rng: np.random.Generator,
    n_rep: int = DEFAULT_N_REP,
    indices: Optional[np.ndarray] = None,
    values: Optional[np.ndarray] = None,
) -> tuple[BdmLatentState, StepRecord]:
    """
    Independence update of k_v entries of v at the current population (no re-simulation).

    k_v = 0 is a no-op reported as accepted.
    """
    if k_v == 0:
        return state, StepRecord(accepted=True, k=0, log_ratio=0.0, log_target=state.loglik_estimate)
    check_block_size(k_v, state.v.size)
    idx = rng.choice(state.v.size, size=k_v, replace=False) if indices is None else np.asarray(indices, dtype=int)
    fresh = rng.random(k_v) if values is None else np.asarray(values, dtype=float)
    old = state.v[idx].copy()
    state.v[idx] = fresh

    loglik = estimate_obs_loglik(state.population, data, state.v, n_rep)
    log_ratio = -math.inf if loglik == -math.inf else loglik - state.loglik_estimate
    accepted = metropolis_accept(log_ratio, rng)
    if accepted:
        state.loglik_estimate = loglik
    else:
        state.v[idx] = old
    return state, StepRecord(accepted=accepted, k=k_v, log_ratio=log_ratio, log_target=state.loglik_estimate)


def flat_triangle_log_prior(a: float, d: float) -> float:
    """Flat prior on the triangle a, d > 0, a + d < 1."""
    return 0.0 if is_valid_params(a, d) else -math.inf


def update_params_rwm(
    state: BdmLatentState,
    params: BdmParams,
    data: ClusterData,
    scales,
    rng: np.random.Generator,
    target_size: int,
    n_rep: int = DEFAULT_N_REP,
    log_prior: Callable[[float, float], float] = flat_triangle_log_prior,
) -> tuple[BdmParams, StepRecord]:
    """
    Gaussian random walk Metropolis on (a, d) at fixed latents.

    Proposals outside the triangle are rejected without simulating. On acceptance
    the state's population and likelihood estimate are replaced in place.
    """
    populations: dict[tuple[float, float], tuple[BdmPopulation, float]] = {}

    def logpost(x: np.ndarray) -> float:
        a, d = float(x[0]), float(x[1])
        prior = log_prior(a, d)
        if prior == -math.inf or not is_valid_params(a, d):
            return -math.inf
        pop = simulate_bdm(BdmParams(a, d), state.u, state.w, target_size)
        loglik = estimate_obs_loglik(pop, data, state.v, n_rep)
        populations[(a, d)] = (pop, loglik)
        return loglik + prior

    current = state.loglik_estimate + log_prior(params.a, params.d)
    position, record = rwm_step(np.array([params.a, params.d]), logpost, np.asarray(scales, dtype=float), rng, current_logpost=current)
    if not record.accepted:
        return params, record
    new_params = BdmParams(float(position[0]), float(position[1]))
    if (new_params.a, new_params.d) in populations:
        state.population, state.loglik_estimate = populations[(new_params.a, new_params.d)]
    return new_params, record


@dataclass
class BdmRunResult:
    """Latent-update tuning row, (a, d) traces and their ESS for one BDM chain."""

    row: TuningRow
    traces: dict[str, Trace] = field(default_factory=dict)
    ess: dict[str, EssReport] = field(default_factory=dict)
    final_params: Optional[BdmParams] = None


def default_k_v(k: int, n_latent: int, n_v: int) -> int:
    """v block size refreshing the same fraction of v as k refreshes of u."""
    return min(n_v, max(1, round(k * n_v / n_latent)))


def _ess_or_nan(trace: Trace, logger: Optional[logging.Logger]) -> EssReport:
    try:
        return effective_sample_size(trace)
    except ValueError as e:
        if logger:
            logger.warning(f"  ESS of {trace.label} unavailable: {e}")
        return EssReport(ess=math.nan, iact=math.nan, n=len(trace), label=trace.label)


def run_bdm_mcmc(
    data: ClusterData,
    n_latent: int,
    target_size: int,
    k: int,
    iterations: int,
    burn_in: int = 0,
    seed: SeedLike = None,
    initial_params: Optional[BdmParams] = None,
    n_rep: int = DEFAULT_N_REP,
    k_v: Optional[int] = None,
    scales: tuple[float, float] = DEFAULT_PARAM_SCALES,
    logger: Optional[logging.Logger] = None,
) -> BdmRunResult:
    """
    Pseudo-marginal MCMC cycling update_params_rwm, update_latents_block and update_v_block.

    Returns:
        BdmRunResult whose row holds the latent acceptance, mean_moved = k x acceptance,
        and extras for the v and parameter acceptance, mean events used and ESS of a and d
    """
    if not iterations > burn_in >= 0:
        msg = f"Need iterations > burn_in >= 0, got iterations={iterations}, burn_in={burn_in}"
        raise ValueError(msg)
    check_block_size(k, n_latent)
    rng = as_generator(seed)
    params = initial_params or BdmParams(a=0.6, d=0.2)
    state = initial_latent_state(params, data, n_latent, target_size, rng, n_rep=n_rep, logger=logger)
    block_v = default_k_v(k, n_latent, state.v.size) if k_v is None else k_v

    kept = iterations - burn_in
    latent_accepted = np.zeros(kept, dtype=bool)
    v_accepted = np.zeros(kept, dtype=bool)
    param_accepted = np.zeros(kept, dtype=bool)
    events = np.zeros(kept)
    a_trace = np.empty(kept)
    d_trace = np.empty(kept)
    for step in range(iterations):
        params, param_record = update_params_rwm(state, params, data, scales, rng, target_size, n_rep)
        state, latent_record = update_latents_block(state, params, data, k, target_size, rng, n_rep)
        state, v_record = update_v_block(state, data, block_v, rng, n_rep)
        index = step - burn_in
        if index >= 0:
            latent_accepted[index] = latent_record.accepted
            v_accepted[index] = v_record.accepted
            param_accepted[index] = param_record.accepted
            events[index] = state.population.events_used
            a_trace[index] = params.a
            d_trace[index] = params.d

    traces = {"a": Trace(a_trace, label="a"), "d": Trace(d_trace, label="d")}
    ess = {name: _ess_or_nan(trace, logger) for name, trace in traces.items()}
    row = TuningRow.from_acceptance(
        k,
        float(latent_accepted.mean()),
        mc_se=batch_means_se(latent_accepted),
        v_acceptance=float(v_accepted.mean()),
        params_acceptance=float(param_accepted.mean()),
        mean_events_used=float(events.mean()),
        ess_a=ess["a"].ess,
        ess_d=ess["d"].ess,
        n_latent=float(n_latent),
    )
    if logger:
        logger.debug(f"  BDM k={k}: latent acceptance {row.acceptance:.3f}, ESS(a)={ess['a'].ess:.0f}")
    return BdmRunResult(row=row, traces=traces, ess=ess, final_params=params)


def _bdm_task(
    clusters: tuple[tuple[int, int], ...],
    n_latent: int,
    target_size: int,
    k: int,
    iterations: int,
    burn_in: int,
    n_rep: int,
    seed,
) -> BdmRunResult:
    """Worker entry for run_bdm_grid."""
    data = ClusterData(clusters=clusters)
    return run_bdm_mcmc(data, n_latent, target_size, k, iterations, burn_in, seed=seed, n_rep=n_rep)


def run_bdm_grid(
    data: ClusterData,
    k_grid: list[int],
    n_latent_values: list[int],
    target_size: int,
    iterations: int,
    burn_in: int = 0,
    seed: SeedLike = None,
    n_rep: int = DEFAULT_N_REP,
    threads: int = 1,
    logger: Optional[logging.Logger] = None,
) -> list[BdmRunResult]:
    """
    One BDM chain per (n_latent, k) on private streams.

    Returns:
        Run results ordered by n_latent, then k
    """
    grid = sorted(set(k_grid))
    tasks = []
    for n_latent in n_latent_values:
        for k in grid:
            check_block_size(k, n_latent)
            tasks.append({
                "clusters": data.clusters,
                "n_latent": n_latent,
                "target_size": target_size,
                "k": k,
                "iterations": iterations,
                "burn_in": burn_in,
                "n_rep": n_rep,
            })
    if logger:
        logger.info(f"BDM sweep: N_T={target_size}, n_latent={list(n_latent_values)}, {len(grid)} k values")
    return run_tasks(_bdm_task, seeded_tasks(seed, tasks), threads=threads, logger=logger)


def bdm_tuning_tables(
    runs: list[BdmRunResult],
    data: ClusterData,
    target_size: int,
    iterations: int,
    burn_in: int,
    n_rep: int = DEFAULT_N_REP,
) -> dict[int, TuningTable]:
    """Tuning table per n_latent, rows sorted by k."""
    by_latent: dict[int, list[TuningRow]] = {}
    for run in runs:
        by_latent.setdefault(int(run.row.extras["n_latent"]), []).append(run.row)
    return {
        n_latent: tuning_summary(
            rows,
            {
                "model": "bdm",
                "n_latent": n_latent,
                "target_size": target_size,
                "iterations": iterations,
                "burn_in": burn_in,
                "n_rep": n_rep,
                "sample_size": data.sample_size,
                "source": data.source,
                "k_grid": sorted(row.k for row in rows),
            },
        )
        for n_latent, rows in by_latent.items()
    }


def sweep_bdm(
    data: ClusterData,
    k_grid: list[int],
    n_latent_values: list[int],
    target_size: int,
    iterations: int,
    burn_in: int = 0,
    seed: SeedLike = None,
    n_rep: int = DEFAULT_N_REP,
    threads: int = 1,
    logger: Optional[logging.Logger] = None,
) -> dict[int, TuningTable]:
    """run_bdm_grid summarised as one TuningTable per n_latent."""
    runs = run_bdm_grid(data, k_grid, n_latent_values, target_size, iterations, burn_in, seed, n_rep, threads, logger)
    return bdm_tuning_tables(runs, data, target_size, iterations, burn_in, n_rep)


def simulate_cluster_data(
    params: BdmParams,
    target_size: int,
    sample_size: int,
    seed: SeedLike = None,
    n_latent: Optional[int] = None,
    max_attempts: int = MAX_INIT_ATTEMPTS,
) -> ClusterData:
    """
    Synthetic cluster data: simulate a successful population and sample without replacement.

    Raises:
        ValueError: If sample_size exceeds target_size
        RuntimeError: If no simulation succeeds within max_attempts
    """
    if sample_size > target_size:
        msg = f"sample_size {sample_size} exceeds target_size {target_size}"
        raise ValueError(msg)
    rng = as_generator(seed)
    length = n_latent or max(20 * target_size, 1_000)
    for _ in range(max_attempts):
        pop = simulate_bdm(params, rng.random(length), rng.random(length), target_size)
        if pop.is_success:
            sampled = rng.multivariate_hypergeometric(pop.type_counts, sample_size)
            return ClusterData.from_type_counts(sampled, source=f"simulated(a={params.a:g}, d={params.d:g}, N_T={target_size})")
    msg = f"no BDM simulation reached {target_size} in {max_attempts} attempts"
    raise RuntimeError(msg)
