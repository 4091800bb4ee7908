"""Seeded random streams: every chain, replicate and grid point owns a stream derived from (master seed, index)."""

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Return a Generator for an int seed, a SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_seed(seed: SeedLike, index: int) -> np.random.SeedSequence:
    """
    Independent stream number ``index`` under a master seed.

    The result depends only on (seed, index), not on how many streams are drawn.
    A Generator master contributes fresh entropy drawn from it.
    """
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(0, 2**63))
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=(*seed.spawn_key, index))
    return np.random.SeedSequence(seed, spawn_key=(index,))


def spawn_generators(seed: SeedLike, count: int) -> list[np.random.Generator]:
    """Generators for streams 0..count-1 under a master seed."""
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(0, 2**63))
    return [np.random.default_rng(child_seed(seed, index)) for index in range(count)]
