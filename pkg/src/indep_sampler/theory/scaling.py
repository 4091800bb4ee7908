"""
Optimal-scaling theory for the block independence sampler.

In stationarity the acceptance ratio of a k-block is W_k* = prod_{i<=k} omega(Y_i)/omega(X_i)
with Y_i ~ q and X_i ~ f. Its log V_k* = sum_i g(Y_i) - g(X_i) has mean -kI and
variance kJ, where I is the symmetrised KL discrepancy. Treating V_k* as Gaussian gives

    E[1 ^ exp(V)] = Phi(-kI/sqrt(kJ)) + exp(-kI + kJ/2) Phi(-sqrt(kJ) + kI/sqrt(kJ)),

which with J = 2I is 2 Phi(-sqrt(kI/2)). The mean number of components moved
k E[1 ^ W_k*] is then maximised at kI = 2.835, where the acceptance is 0.234.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy import optimize, special

from ..densities import DensityPair, log_weight
from ..records import MonteCarloEstimate
from ..rng import SeedLike, as_generator

EFFICIENCY_CONSTANT = 2.835
OPTIMAL_ACCEPTANCE = 0.234
# max over z of 2 z^2 Phi(-z/2)
EFFICIENCY_NORMALIZER = 1.3257

MIN_MC_SAMPLES = 10_000
DEFAULT_HSTAR_SAMPLES = 1_000
# Largest number of weight draws held in memory at once
_CHUNK_DRAWS = 2_000_000


@dataclass(frozen=True)
class AcceptanceApprox:
    """Gaussian approximation of the stationary mean acceptance at block size k."""

    k: float
    I: float
    J: float
    value: float

    @property
    def mean_moved(self) -> float:
        """Predicted mean number of components moved per step."""
        return self.k * self.value


def gaussian_acceptance_approx(k: float, I: float, J: float) -> float:
    """
    E[1 ^ exp(V)] for V ~ N(-kI, kJ).

    The second term is evaluated as exp(-kI + kJ/2 + log Phi(.)) so that a large
    exponent never overflows. Real k is allowed (used when maximising over k).

    Raises:
        ValueError: If k, I or J is not positive
    """
    if not (k > 0 and I > 0 and J > 0):
        msg = f"gaussian_acceptance_approx needs k, I, J > 0, got k={k}, I={I}, J={J}"
        raise ValueError(msg)
    mean = k * I
    sd = math.sqrt(k * J)
    first = float(special.ndtr(-mean / sd))
    log_second = -mean + 0.5 * sd * sd + float(special.log_ndtr(-sd + mean / sd))
    return min(1.0, first + math.exp(log_second))


def predict_acceptance(k: float, I: float, J: Optional[float] = None) -> AcceptanceApprox:
    """
    Predicted acceptance at block size k; J defaults to 2I.

    I = 0 predicts acceptance 1 and I = inf predicts 0.
    """
    if I < 0 or math.isnan(I):
        msg = f"Discrepancy must be non-negative, got {I}"
        raise ValueError(msg)
    j_value = 2.0 * I if J is None else J
    if I == 0:
        return AcceptanceApprox(k=k, I=I, J=j_value, value=1.0)
    if math.isinf(I):
        return AcceptanceApprox(k=k, I=I, J=j_value, value=0.0)
    return AcceptanceApprox(k=k, I=I, J=j_value, value=gaussian_acceptance_approx(k, I, j_value))


def optimal_k(I: float, n: int) -> int:
    """
    Integer block size closest to 2.835/I, ties rounded down, clamped to [1, n].

    I = 0 (perfect proposal) gives n; I = inf gives 1.

    Raises:
        ValueError: If I is negative or NaN, or n < 1
    """
    if n < 1:
        msg = f"n must be at least 1, got {n}"
        raise ValueError(msg)
    if math.isnan(I) or I < 0:
        msg = f"Discrepancy must be non-negative, got {I}"
        raise ValueError(msg)
    if I == 0:
        return n
    if math.isinf(I):
        return 1
    target = EFFICIENCY_CONSTANT / I
    if target >= n:
        return n
    return max(1, math.ceil(target - 0.5))


def theoretical_efficiency(acceptance: float) -> float:
    """
    Normalised theoretical efficiency at a given acceptance rate.

    With z = -2 Phi^{-1}(acceptance/2) the efficiency is z^2 acceptance / 1.3257.

    Raises:
        ValueError: If acceptance is not strictly between 0 and 1
    """
    if not 0.0 < acceptance < 1.0:
        msg = f"theoretical_efficiency needs 0 < acceptance < 1, got {acceptance}"
        raise ValueError(msg)
    z = -2.0 * float(special.ndtri(acceptance / 2.0))
    return z * z * acceptance / EFFICIENCY_NORMALIZER


def theoretical_curve(points: int = 99) -> pd.DataFrame:
    """Theoretical efficiency on an even acceptance grid strictly inside (0, 1)."""
    if points < 1:
        msg = f"points must be positive, got {points}"
        raise ValueError(msg)
    acceptance = np.linspace(0.0, 1.0, points + 2)[1:-1]
    efficiency = [theoretical_efficiency(float(a)) for a in acceptance]
    return pd.DataFrame({"acceptance": acceptance, "normalized_efficiency": efficiency})


def maximize_efficiency_constant() -> tuple[float, float]:
    """
    Numerically maximise kI x 2 Phi(-sqrt(kI/2)) over kI.

    Returns:
        (kI at the maximum, acceptance there); close to (2.835, 0.234)
    """

    def negative_efficiency(x: float) -> float:
        return -x * gaussian_acceptance_approx(1.0, x, 2.0 * x)

    result = optimize.minimize_scalar(negative_efficiency, bounds=(0.01, 20.0), method="bounded", options={"xatol": 1e-10})
    best = float(result.x)
    return best, gaussian_acceptance_approx(1.0, best, 2.0 * best)


def uniform_acceptance(eps: float, k: int) -> float:
    """Exact acceptance (1 + eps)^-k for the U(0,1) target with U(0,1+eps) proposal."""
    if eps < 0 or k < 0:
        msg = f"uniform_acceptance needs eps >= 0 and k >= 0, got eps={eps}, k={k}"
        raise ValueError(msg)
    return (1.0 + eps) ** (-k)


def uniform_case(eps: float) -> tuple[float, float]:
    """
    Optimum for the uniform pair: k = 1/log(1+eps) and the acceptance there.

    The acceptance equals exp(-1) for every eps.

    Raises:
        ValueError: If eps is not positive
    """
    if not eps > 0:
        msg = f"uniform_case needs eps > 0, got {eps}"
        raise ValueError(msg)
    log_width = math.log1p(eps)
    k_opt = 1.0 / log_width
    return k_opt, math.exp(-log_width * k_opt)


def _log_ratio_sums(pair: DensityPair, terms: int, rows: int, rng: np.random.Generator) -> np.ndarray:
    """Row sums of g(Y) - g(X) over ``terms`` fresh (Y ~ q, X ~ f) pairs, for ``rows`` rows."""
    if terms == 0:
        return np.zeros(rows)
    g_y = log_weight(pair, pair.proposal_sampler(rng, rows * terms)).reshape(rows, terms)
    g_x = log_weight(pair, pair.target_sampler(rng, rows * terms)).reshape(rows, terms)
    return (g_y - g_x).sum(axis=1)


def _chunked_acceptance(
    pair: DensityPair,
    terms: int,
    samples: int,
    offset: float,
    rng: np.random.Generator,
) -> MonteCarloEstimate:
    """Monte Carlo mean of 1 ^ exp(offset + sum of ``terms`` log-weight differences)."""
    values = np.empty(samples)
    rows_per_chunk = max(1, _CHUNK_DRAWS // max(terms, 1))
    for start in range(0, samples, rows_per_chunk):
        rows = min(rows_per_chunk, samples - start)
        log_ratio = offset + _log_ratio_sums(pair, terms, rows, rng)
        values[start : start + rows] = np.exp(np.minimum(log_ratio, 0.0))
    return MonteCarloEstimate.from_samples(values)


def estimate_mean_acceptance(
    pair: DensityPair,
    k: int,
    mc_samples: int = 100_000,
    seed: SeedLike = None,
) -> MonteCarloEstimate:
    """
    Monte Carlo estimate of the stationary mean acceptance E[1 ^ W_k*].

    Raises:
        ValueError: If k < 1 or mc_samples is below 10^4
    """
    if k < 1:
        msg = f"k must be at least 1, got {k}"
        raise ValueError(msg)
    if mc_samples < MIN_MC_SAMPLES:
        msg = f"mc_samples must be at least {MIN_MC_SAMPLES}, got {mc_samples}"
        raise ValueError(msg)
    return _chunked_acceptance(pair, k, mc_samples, 0.0, as_generator(seed))


def estimate_H_star(
    pair: DensityPair,
    y: float,
    x1: float,
    k: int,
    mc_samples: int = DEFAULT_HSTAR_SAMPLES,
    seed: SeedLike = None,
) -> MonteCarloEstimate:
    """
    Stationary-averaged acceptance of moving the tracked component from x1 to y.

    H*(y, x1) = E[1 ^ (omega(y)/omega(x1)) prod_{i<k} omega(Y_i)/omega(X_i)] with the
    other k-1 block members at stationarity. For k = 1 the product is empty and
    the value is exact.

    Raises:
        ValueError: If omega(x1) = 0 or k < 1
    """
    if k < 1:
        msg = f"k must be at least 1, got {k}"
        raise ValueError(msg)
    g_x1 = log_weight(pair, x1)
    if g_x1 == -math.inf:
        msg = f"H* needs omega(x1) > 0, got x1={x1}"
        raise ValueError(msg)
    offset = log_weight(pair, y) - g_x1
    if k == 1:
        return MonteCarloEstimate(value=math.exp(min(offset, 0.0)), std_error=0.0, samples=1)
    if offset == -math.inf:
        return MonteCarloEstimate(value=0.0, std_error=0.0, samples=1)
    return _chunked_acceptance(pair, k - 1, mc_samples, offset, as_generator(seed))


@dataclass(frozen=True)
class HVarianceReport:
    """Spread of H(y, x^n) over resampled x^n around H*(y, x1)."""

    h_star: MonteCarloEstimate
    h_mean: float
    h_variance: float
    resamples: int

    @property
    def h_std(self) -> float:
        """Standard deviation of H across resampled x^n."""
        return math.sqrt(self.h_variance)


def h_variance_diagnostic(
    pair: DensityPair,
    y: float,
    x1: float,
    n: int,
    k: int,
    resamples: int = 50,
    inner_samples: int = 2_000,
    seed: SeedLike = None,
) -> HVarianceReport:
    """
    Sanity check on H(y, x^n) = acceptance of moving component 1 to y given the rest of x^n.

    For each of ``resamples`` draws of x_2..x_n ~ f, H is estimated by averaging over
    random blocks containing component 1 and fresh proposals; the spread of those
    values around H* shrinks as n grows.
    """
    if not 1 <= k <= n:
        msg = f"block size k={k} out of range 1..{n}"
        raise ValueError(msg)
    rng = as_generator(seed)
    h_star = estimate_H_star(pair, y, x1, k, mc_samples=max(inner_samples, MIN_MC_SAMPLES), seed=rng)
    offset = log_weight(pair, y) - log_weight(pair, x1)

    h_values = np.empty(resamples)
    for r in range(resamples):
        g_rest = log_weight(pair, pair.target_sampler(rng, n - 1))
        if k == 1:
            h_values[r] = math.exp(min(offset, 0.0))
            continue
        others = np.stack([rng.choice(n - 1, size=k - 1, replace=False) for _ in range(inner_samples)])
        g_y = log_weight(pair, pair.proposal_sampler(rng, inner_samples * (k - 1))).reshape(inner_samples, k - 1)
        log_ratio = offset + (g_y - g_rest[others]).sum(axis=1)
        h_values[r] = float(np.exp(np.minimum(log_ratio, 0.0)).mean())

    return HVarianceReport(
        h_star=h_star,
        h_mean=float(h_values.mean()),
        h_variance=float(h_values.var(ddof=1)) if resamples > 1 else 0.0,
        resamples=resamples,
    )
