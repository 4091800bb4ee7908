"""
Straightforward re-implementations used as test oracles.

Each oracle favours obviousness over speed: explicit individual lists for the
BDM process, exhaustive enumeration of samples, and piecewise integration of the
epidemic exposure.
"""

import itertools
import math
from collections import Counter

import numpy as np
from scipy import stats


def brute_force_bdm(a: float, d: float, u, w, target_size: int) -> tuple[list[int], int, str]:
    """
    Simulate the BDM process with one explicit list of individuals per type.

    Returns:
        (type counts in creation order with empty types dropped, events used, outcome)
    """
    groups: list[list[int]] = [[0]]
    next_id = 1
    if target_size == 1:
        return [1], 0, "success"
    events = 0
    for u_i, w_i in zip(u, w):
        events += 1
        total = sum(len(group) for group in groups)
        individuals = [(t, j) for t, group in enumerate(groups) for j in range(len(group))]
        index = max(1, math.ceil(w_i * total))
        chosen_type, position = individuals[index - 1]
        if u_i < a:
            groups[chosen_type].append(next_id)
            next_id += 1
        elif u_i < a + d:
            groups[chosen_type].pop(position)
        else:
            groups[chosen_type].pop(position)
            groups.append([next_id])
            next_id += 1
        total = sum(len(group) for group in groups)
        if total == target_size:
            return [len(group) for group in groups if group], events, "success"
        if total == 0:
            return [], events, "extinct"
    return [len(group) for group in groups if group], events, "latent_exhausted"


def exhaustive_partition_probability(type_counts, cluster_sizes) -> float:
    """Probability that a uniform without-replacement sample shows the given cluster sizes."""
    individuals = [t for t, count in enumerate(type_counts) for _ in range(count)]
    sample_size = sum(cluster_sizes)
    target = sorted(cluster_sizes)
    hits = total = 0
    for sample in itertools.combinations(range(len(individuals)), sample_size):
        counts = Counter(individuals[i] for i in sample)
        total += 1
        hits += sorted(counts.values()) == target
    return hits / total


def piecewise_exposure(I, R, N: int) -> float:
    """Integral of S(t) Inf(t) dt by summing over intervals between events."""
    I = np.asarray(I, dtype=float)
    R = np.asarray(R, dtype=float)
    times = np.unique(np.concatenate([I, R]))
    total = 0.0
    for start, end in zip(times[:-1], times[1:]):
        infected = np.sum(I <= start)
        removed = np.sum(R <= start)
        total += (N - infected) * (infected - removed) * (end - start)
    return float(total)


def naive_sir_log_likelihood(I, R, beta: float, alpha: float, delta: float, N: int) -> float:
    """Completed-epidemic log-likelihood from explicit counts, piecewise exposure and scipy Gamma densities."""
    I = np.asarray(I, dtype=float)
    R = np.asarray(R, dtype=float)
    if np.any(I >= R):
        return -math.inf
    initial = int(np.argmin(I))
    total = 0.0
    for j in range(I.size):
        if j == initial:
            continue
        infectives = int(np.sum(I < I[j]) - np.sum(R <= I[j]))
        if infectives <= 0:
            return -math.inf
        total += math.log(beta * infectives / N)
    total -= beta / N * piecewise_exposure(I, R, N)
    total += float(np.sum(stats.gamma.logpdf(R - I, alpha, scale=1.0 / delta)))
    return total


def ar1_series(phi: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Stationary AR(1) series with unit innovation variance."""
    noise = rng.standard_normal(n)
    values = np.empty(n)
    values[0] = noise[0] / math.sqrt(1.0 - phi * phi)
    for i in range(1, n):
        values[i] = phi * values[i - 1] + noise[i]
    return values
