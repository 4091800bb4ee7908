"""
Markov kernels: the k-component block independence sampler and random walk Metropolis.

The block kernel selects k components uniformly without replacement, proposes
fresh values y ~ q for them and accepts the whole block with probability
min{1, prod_j omega(y_j)/omega(x_j)}. The ratio is formed in log space from a
per-component cache of g(x_i) = log omega(x_i), so a step costs O(k) whatever n is.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..densities import DensityPair, log_weight
from ..records import StepRecord


@dataclass
class ChainState:
    """Current position of an n-component chain with cached log weights."""

    x: np.ndarray
    cached_log_weight: np.ndarray
    iteration: int = 0

    @property
    def n(self) -> int:
        """Number of components."""
        return int(self.x.size)

    @classmethod
    def from_values(cls, pair: DensityPair, x) -> "ChainState":
        """
        Build a state from explicit component values.

        Raises:
            ValueError: If any component has zero target weight
        """
        values = np.array(x, dtype=float, ndmin=1)
        weights = np.array(log_weight(pair, values), dtype=float, ndmin=1)
        if np.any(np.isneginf(weights)):
            msg = f"start state has components with zero target weight for pair {pair.label}"
            raise ValueError(msg)
        return cls(x=values, cached_log_weight=weights)

    @classmethod
    def stationary(cls, pair: DensityPair, n: int, rng: np.random.Generator) -> "ChainState":
        """Draw every component independently from the target."""
        return cls.from_values(pair, pair.target_sampler(rng, n))

    def cache_is_valid(self, pair: DensityPair) -> bool:
        """Recompute g(x) for every component and compare with the cache."""
        return bool(np.array_equal(np.array(log_weight(pair, self.x), ndmin=1), self.cached_log_weight))


@dataclass(frozen=True)
class BlockPlan:
    """The k component indices updated together in one step."""

    k: int
    indices: np.ndarray = field(repr=False)

    def __post_init__(self):
        """Check the indices form a set of size k."""
        if len(self.indices) != self.k or len(np.unique(self.indices)) != self.k:
            msg = f"Block plan needs {self.k} distinct indices, got {list(self.indices)}"
            raise ValueError(msg)

    @classmethod
    def draw(cls, n: int, k: int, rng: np.random.Generator) -> "BlockPlan":
        """
        Sample k of n indices uniformly without replacement.

        Raises:
            ValueError: If k is outside 1..n
        """
        check_block_size(k, n)
        return cls(k=k, indices=rng.choice(n, size=k, replace=False))

    def validate(self, n: int) -> None:
        """Raise ValueError unless every index lies in 0..n-1."""
        if np.any(self.indices < 0) or np.any(self.indices >= n):
            msg = f"Block plan indices out of range for n={n}"
            raise ValueError(msg)


def check_block_size(k: int, n: int) -> None:
    """Raise ValueError unless 1 <= k <= n."""
    if not 1 <= k <= n:
        msg = f"block size k={k} out of range 1..{n}"
        raise ValueError(msg)


def metropolis_accept(log_ratio: float, rng: np.random.Generator) -> bool:
    """Accept with probability min(1, exp(log_ratio)); one uniform is always consumed."""
    if math.isnan(log_ratio):
        msg = "Metropolis log ratio is NaN"
        raise ValueError(msg)
    u = rng.random()
    return bool(u < math.exp(min(0.0, log_ratio)))


def block_independence_step(
    state: ChainState,
    pair: DensityPair,
    k: int,
    rng: np.random.Generator,
    plan: Optional[BlockPlan] = None,
    proposal: Optional[np.ndarray] = None,
) -> tuple[ChainState, StepRecord]:
    """
    One block independence-sampler step, updating ``state`` in place.

    Args:
        state: Chain state with a valid log-weight cache
        pair: Target/proposal pair
        k: Block size, 1 <= k <= n
        rng: Random generator
        plan: Optional fixed block (otherwise drawn uniformly)
        proposal: Optional forced proposal values for the block (otherwise y ~ q)

    Returns:
        (state, StepRecord) where log_ratio = sum_j [g(y_j) - g(x_{I_j})]

    Raises:
        ValueError: If k is out of range
        RuntimeError: If a selected component has zero target weight
    """
    check_block_size(k, state.n)
    if plan is None:
        plan = BlockPlan.draw(state.n, k, rng)
    elif plan.k != k:
        msg = f"Block plan size {plan.k} does not match k={k}"
        raise ValueError(msg)
    else:
        plan.validate(state.n)

    y = pair.proposal_sampler(rng, k) if proposal is None else np.array(proposal, dtype=float, ndmin=1)
    g_y = np.array(log_weight(pair, y), dtype=float, ndmin=1)
    g_x = state.cached_log_weight[plan.indices]
    if np.any(np.isneginf(g_x)):
        msg = "chain state has zero target weight at a selected component"
        raise RuntimeError(msg)

    log_ratio = float(np.sum(g_y - g_x))
    accepted = metropolis_accept(log_ratio, rng)
    if accepted:
        state.x[plan.indices] = y
        state.cached_log_weight[plan.indices] = g_y
    state.iteration += 1
    return state, StepRecord(accepted=accepted, k=k, log_ratio=log_ratio)


def rwm_step(
    state: np.ndarray,
    logpost: Callable[[np.ndarray], float],
    step_scale,
    rng: np.random.Generator,
    current_logpost: Optional[float] = None,
) -> tuple[np.ndarray, StepRecord]:
    """
    Random walk Metropolis step with a Gaussian increment.

    Proposals where ``logpost`` is -inf are rejected.

    Args:
        state: Current position
        logpost: Log target density (up to a constant)
        step_scale: Per-coordinate increment standard deviations (scalar or vector)
        rng: Random generator
        current_logpost: Cached logpost(state), recomputed when None

    Returns:
        (new state, StepRecord with log_target at the returned state)
    """
    x = np.array(state, dtype=float, ndmin=1)
    current = float(logpost(x)) if current_logpost is None else float(current_logpost)
    proposal = x + np.asarray(step_scale, dtype=float) * rng.standard_normal(x.shape)
    proposed = float(logpost(proposal))

    log_ratio = -math.inf if proposed == -math.inf else proposed - current
    accepted = metropolis_accept(log_ratio, rng)
    if accepted:
        return proposal, StepRecord(accepted=True, k=int(x.size), log_ratio=log_ratio, log_target=proposed)
    return x, StepRecord(accepted=False, k=int(x.size), log_ratio=log_ratio, log_target=current)
