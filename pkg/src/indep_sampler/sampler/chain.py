"""Run a block independence-sampler chain and summarise it as a tuning row."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..densities import DensityPair
from ..diagnostics.ess import batch_means_se
from ..records import Trace, TuningRow
from ..rng import SeedLike, as_generator
from .kernels import BlockPlan, ChainState, block_independence_step, check_block_size

START_STATIONARY = "stationary"
START_CUSTOM = "custom"


@dataclass
class ChainResult:
    """Acceptance summary, acceptance indicators and optional component-0 trace of one chain."""

    row: TuningRow
    accepted: np.ndarray
    trace: Optional[Trace] = None
    final_state: Optional[ChainState] = None


def run_chain(
    pair: DensityPair,
    n: int,
    k: int,
    iterations: int,
    burn_in: int = 0,
    seed: SeedLike = None,
    start: str = START_STATIONARY,
    x0: Optional[np.ndarray] = None,
    trace_thin: Optional[int] = None,
) -> ChainResult:
    """
    Run the n-component block independence sampler.

    Args:
        pair: Target/proposal pair
        n: Number of components
        k: Block size
        iterations: Total steps, burn-in included
        burn_in: Leading steps excluded from the summaries
        seed: Seed, SeedSequence or Generator
        start: 'stationary' (x0 ~ f) or 'custom' (x0 required)
        x0: Custom start values
        trace_thin: Record component 0 every ``trace_thin`` post-burn-in steps when set

    Returns:
        ChainResult whose row has mean_moved = k x acceptance

    Raises:
        ValueError: On an invalid iteration budget, block size or start
    """
    if not iterations > burn_in >= 0:
        msg = f"Need iterations > burn_in >= 0, got iterations={iterations}, burn_in={burn_in}"
        raise ValueError(msg)
    check_block_size(k, n)
    rng = as_generator(seed)

    if start == START_STATIONARY:
        state = ChainState.stationary(pair, n, rng)
    elif start == START_CUSTOM:
        if x0 is None or len(x0) != n:
            msg = f"Custom start needs x0 of length {n}"
            raise ValueError(msg)
        state = ChainState.from_values(pair, x0)
    else:
        msg = f"Unknown start '{start}' (expected stationary or custom)"
        raise ValueError(msg)

    kept = iterations - burn_in
    accepted = np.zeros(kept, dtype=bool)
    trace_values = []
    for step in range(iterations):
        plan = BlockPlan.draw(n, k, rng)
        state, record = block_independence_step(state, pair, k, rng, plan=plan)
        index = step - burn_in
        if index < 0:
            continue
        accepted[index] = record.accepted
        if trace_thin and index % trace_thin == 0:
            trace_values.append(state.x[0])

    acceptance = float(accepted.mean())
    row = TuningRow.from_acceptance(k, acceptance, mc_se=batch_means_se(accepted))
    trace = Trace(np.asarray(trace_values), label=f"{pair.label} k={k} x[0]") if trace_thin else None
    return ChainResult(row=row, accepted=accepted, trace=trace, final_state=state)
