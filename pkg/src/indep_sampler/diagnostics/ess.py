"""Effective sample size and Monte Carlo standard errors for chain output."""

import math
from typing import Optional, Union

import arviz as az
import numpy as np

from ..records import EssReport, Trace

# Shortest trace accepted by effective_sample_size
MIN_ESS_LENGTH = 100
DEFAULT_BATCHES = 20


def autocovariance(values: np.ndarray) -> np.ndarray:
    """
    Biased autocovariance at every lag (arviz FFT estimator).

    Args:
        values: 1-d sample

    Returns:
        Array of length len(values); entry t is (1/n) sum_i (x_i - mean)(x_{i+t} - mean)
    """
    return np.asarray(az.autocov(np.asarray(values, dtype=float)), dtype=float)


def effective_sample_size(trace: Union[Trace, np.ndarray], label: Optional[str] = None) -> EssReport:
    """
    Effective sample size with Geyer's initial positive sequence.

    The integrated autocorrelation time is -1 + 2 * sum of the pair sums
    rho(2m) + rho(2m+1), truncated before the first non-positive pair, and is
    floored at 1. Autocorrelations come from arviz.autocov.

    Args:
        trace: Trace (or raw array) of at least 100 values
        label: Report label; defaults to the trace label

    Returns:
        EssReport with ess = n / iact

    Raises:
        ValueError: If the trace is too short or has zero variance
    """
    if isinstance(trace, Trace):
        values = trace.values
        label = trace.label if label is None else label
    else:
        values = np.asarray(trace, dtype=float)
    n = int(values.size)
    if n < MIN_ESS_LENGTH:
        msg = f"effective_sample_size needs at least {MIN_ESS_LENGTH} values, got {n}"
        raise ValueError(msg)

    acov = autocovariance(values)
    if not acov[0] > 0:
        msg = "zero variance"
        raise ValueError(msg)
    rho = acov / acov[0]

    usable = n - (n % 2)
    pair_sums = rho[0:usable:2] + rho[1:usable:2]
    non_positive = np.flatnonzero(pair_sums <= 0)
    stop = int(non_positive[0]) if non_positive.size else pair_sums.size
    iact = max(-1.0 + 2.0 * float(pair_sums[:stop].sum()), 1.0)
    return EssReport(ess=n / iact, iact=iact, n=n, label=label or "")


def batch_means_se(values: np.ndarray, batches: int = DEFAULT_BATCHES) -> float:
    """
    Standard error of a chain average by non-overlapping batch means.

    Falls back to the i.i.d. formula when there are fewer values than batches.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:  # noqa: PLR2004
        return 0.0
    if n < batches:
        return float(x.std(ddof=1) / math.sqrt(n))
    size = n // batches
    means = x[: size * batches].reshape(batches, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(batches))
