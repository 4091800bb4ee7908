"""
Target/proposal density pairs for the independence sampler.

A pair holds a univariate target f and proposal q. The weight function is
omega(x) = f(x)/q(x) and its log is g(x) = log f(x) - log q(x). Every pair built
here has sup omega < infinity, certified analytically per family:

- gaussian(lambda): f = N(0, 1), q = N(0, lambda^2), bounded iff lambda >= 1
- t(nu): f = N(0, 1), q = t_nu, bounded for every nu >= 1
- uniform_eps(eps): f = U(0, 1), q = U(0, 1 + eps), bounded for eps >= 0
"""

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special, stats

from .records import CLOSED_FORM, DIVERGENT, MONTE_CARLO, DiscrepancyResult, MonteCarloEstimate
from .rng import SeedLike, as_generator

LogDensity = Callable[[np.ndarray], np.ndarray]
Sampler = Callable[[np.random.Generator, int], np.ndarray]

# Monte Carlo floor for the t-proposal discrepancy estimator
MIN_T_SAMPLES = 10_000

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class DensityPair:
    """Target f and proposal q with log-densities, samplers and the target CDF."""

    target_logpdf: LogDensity
    proposal_logpdf: LogDensity
    proposal_sampler: Sampler
    target_sampler: Sampler
    label: str
    family: str = "custom"
    parameter: float = math.nan
    target_cdf: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @property
    def spec(self) -> str:
        """Registry spec string (``family:parameter``) that rebuilds this pair."""
        if self.family == "t":
            return f"t:{int(self.parameter)}"
        return f"{self.family}:{self.parameter!r}"


def _std_normal_logpdf(x: np.ndarray) -> np.ndarray:
    return -0.5 * np.square(x) - _LOG_SQRT_2PI


def gaussian_pair(lam: float) -> DensityPair:
    """
    Standard Gaussian target with N(0, lambda^2) proposal.

    Raises:
        ValueError: If lambda < 1 (the weight f/q is then unbounded)
    """
    if not lam >= 1.0:
        msg = f"unbounded weight: gaussian proposal needs lambda >= 1, got {lam}"
        raise ValueError(msg)
    log_norm = math.log(lam) + _LOG_SQRT_2PI
    inv_var = 1.0 / (lam * lam)

    def proposal_logpdf(x):
        return -0.5 * np.square(x) * inv_var - log_norm

    def proposal_sampler(rng, size):
        return lam * rng.standard_normal(size)

    def target_sampler(rng, size):
        return rng.standard_normal(size)

    return DensityPair(
        target_logpdf=_std_normal_logpdf,
        proposal_logpdf=proposal_logpdf,
        proposal_sampler=proposal_sampler,
        target_sampler=target_sampler,
        label=f"gaussian(lambda={lam:g})",
        family="gaussian",
        parameter=float(lam),
        target_cdf=special.ndtr,
    )


def t_pair(nu: int) -> DensityPair:
    """Standard Gaussian target with Student-t(nu) proposal."""
    if int(nu) != nu or nu < 1:
        msg = f"t proposal needs an integer nu >= 1, got {nu}"
        raise ValueError(msg)
    nu = int(nu)
    log_norm = special.gammaln((nu + 1) / 2) - special.gammaln(nu / 2) - 0.5 * math.log(nu * math.pi)
    power = (nu + 1) / 2

    def proposal_logpdf(x):
        return log_norm - power * np.log1p(np.square(x) / nu)

    def proposal_sampler(rng, size):
        return rng.standard_t(nu, size)

    def target_sampler(rng, size):
        return rng.standard_normal(size)

    return DensityPair(
        target_logpdf=_std_normal_logpdf,
        proposal_logpdf=proposal_logpdf,
        proposal_sampler=proposal_sampler,
        target_sampler=target_sampler,
        label=f"t(nu={nu})",
        family="t",
        parameter=float(nu),
        target_cdf=special.ndtr,
    )


def uniform_pair(eps: float) -> DensityPair:
    """U(0, 1) target with U(0, 1 + eps) proposal; the weight is zero on (1, 1 + eps]."""
    if not eps >= 0.0:
        msg = f"uniform proposal needs eps >= 0, got {eps}"
        raise ValueError(msg)
    width = 1.0 + eps
    log_q = -math.log(width)

    def target_logpdf(x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= 0.0) & (x <= 1.0), 0.0, -np.inf)

    def proposal_logpdf(x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= 0.0) & (x <= width), log_q, -np.inf)

    def proposal_sampler(rng, size):
        return rng.uniform(0.0, width, size)

    def target_sampler(rng, size):
        return rng.uniform(0.0, 1.0, size)

    return DensityPair(
        target_logpdf=target_logpdf,
        proposal_logpdf=proposal_logpdf,
        proposal_sampler=proposal_sampler,
        target_sampler=target_sampler,
        label=f"uniform_eps(eps={eps:g})",
        family="uniform_eps",
        parameter=float(eps),
        target_cdf=stats.uniform(0.0, 1.0).cdf,
    )


_PAIR_FACTORIES = {
    "gaussian": lambda value: gaussian_pair(float(value)),
    "t": lambda value: t_pair(int(float(value))),
    "uniform_eps": lambda value: uniform_pair(float(value)),
}

_SPEC_PATTERN = re.compile(r"^\s*([a-z_]+)\s*(?::\s*|\(\s*)([-+0-9.eE]+)\s*\)?\s*$")


def pair_from_spec(spec: str) -> DensityPair:
    """
    Build a density pair from ``family:value`` or ``family(value)``.

    Args:
        spec: e.g. 'gaussian:1.2', 't:5', 'uniform_eps(0.05)'

    Returns:
        The registered DensityPair

    Raises:
        ValueError: If the family is unknown or the pair string is malformed
    """
    match = _SPEC_PATTERN.match(spec)
    if not match:
        msg = f"Malformed density pair spec: '{spec}' (expected e.g. gaussian:1.2, t:5, uniform_eps:0.05)"
        raise ValueError(msg)
    family, value = match.groups()
    if family not in _PAIR_FACTORIES:
        msg = f"Unknown density family '{family}' (known: {', '.join(sorted(_PAIR_FACTORIES))})"
        raise ValueError(msg)
    return _PAIR_FACTORIES[family](value)


def log_weight(pair: DensityPair, x):
    """
    g(x) = log f(x) - log q(x), vectorised over x.

    A value of -inf means the target has no mass at x (weight zero), which is
    legitimate for proposals with wider support than the target.

    Raises:
        ValueError: If any value is NaN or +inf
    """
    values = np.asarray(pair.target_logpdf(x), dtype=float) - np.asarray(pair.proposal_logpdf(x), dtype=float)
    if np.any(np.isnan(values)) or np.any(values == np.inf):
        msg = f"non-finite log weight for pair {pair.label}"
        raise ValueError(msg)
    if np.ndim(values) == 0:
        return float(values)
    return values


def discrepancy_gaussian(lam: float) -> DiscrepancyResult:
    """Closed form I = (lambda - 1/lambda)^2 / 2 for the Gaussian pair."""
    if not lam >= 1.0:
        msg = f"unbounded weight: gaussian discrepancy needs lambda >= 1, got {lam}"
        raise ValueError(msg)
    return DiscrepancyResult(value=0.5 * (lam - 1.0 / lam) ** 2, std_error=0.0, method=CLOSED_FORM)


def discrepancy_t(nu: int, mc_samples: int = 1_000_000, seed: SeedLike = None) -> DiscrepancyResult:
    """
    Discrepancy between a N(0, 1) target and a t_nu proposal.

    Uses I = 1/(nu - 2) + (nu + 1)/2 * {E log(1 + X^2/nu) - E log(1 + Y^2/nu)}
    with paired draws X ~ N(0, 1), Y ~ t_nu. For nu in {1, 2} the proposal has no
    second moment and I is infinite.

    Raises:
        ValueError: If nu >= 3 and mc_samples is below the Monte Carlo floor
    """
    if int(nu) != nu or nu < 1:
        msg = f"t discrepancy needs an integer nu >= 1, got {nu}"
        raise ValueError(msg)
    if nu <= 2:  # noqa: PLR2004 - the proposal variance is infinite for nu <= 2
        return DiscrepancyResult(value=math.inf, std_error=0.0, method=DIVERGENT)
    if mc_samples < MIN_T_SAMPLES:
        msg = f"mc_samples must be at least {MIN_T_SAMPLES} for the t discrepancy, got {mc_samples}"
        raise ValueError(msg)

    rng = as_generator(seed)
    x = rng.standard_normal(mc_samples)
    y = rng.standard_t(nu, mc_samples)
    integrand = np.log1p(np.square(x) / nu) - np.log1p(np.square(y) / nu)
    estimate = MonteCarloEstimate.from_samples(integrand)
    scale = (nu + 1) / 2
    return DiscrepancyResult(
        value=1.0 / (nu - 2) + scale * estimate.value,
        std_error=scale * estimate.std_error,
        method=MONTE_CARLO,
    )


def discrepancy_generic(pair: DensityPair, mc_samples: int = 1_000_000, seed: SeedLike = None) -> DiscrepancyResult:
    """
    Monte Carlo I = E[g(X)] - E[g(Y)] with X ~ f and Y ~ q drawn independently.

    Any proposal draw with zero target weight makes D(q||f) infinite and the
    result is reported as divergent.
    """
    rng = as_generator(seed)
    g_x = log_weight(pair, pair.target_sampler(rng, mc_samples))
    g_y = log_weight(pair, pair.proposal_sampler(rng, mc_samples))
    if np.any(np.isneginf(g_y)):
        return DiscrepancyResult(value=math.inf, std_error=0.0, method=DIVERGENT)
    value = float(g_x.mean() - g_y.mean())
    std_error = math.sqrt(float(g_x.var(ddof=1) + g_y.var(ddof=1)) / mc_samples)
    return DiscrepancyResult(value=value, std_error=std_error, method=MONTE_CARLO)


def pair_discrepancy(pair: DensityPair, mc_samples: int = 1_000_000, seed: SeedLike = None) -> DiscrepancyResult:
    """Discrepancy for a registered pair: closed form, t estimator, divergent or generic Monte Carlo."""
    if pair.family == "gaussian":
        return discrepancy_gaussian(pair.parameter)
    if pair.family == "t":
        return discrepancy_t(int(pair.parameter), mc_samples=max(mc_samples, MIN_T_SAMPLES), seed=seed)
    if pair.family == "uniform_eps":
        if pair.parameter == 0.0:
            return DiscrepancyResult(value=0.0, std_error=0.0, method=CLOSED_FORM)
        return DiscrepancyResult(value=math.inf, std_error=0.0, method=DIVERGENT)
    return discrepancy_generic(pair, mc_samples=mc_samples, seed=seed)


@dataclass(frozen=True)
class WeightDiagnostics:
    """Moments of the importance weights under target and proposal draws."""

    mean_weight: MonteCarloEstimate  # E[omega(Y)], Y ~ q; equals 1
    mean_g_proposal: MonteCarloEstimate  # E[g(Y)] = -D(q||f)
    mean_g_target: MonteCarloEstimate  # E[g(X)] = D(f||q)
    j_value: float  # Var(g(Y) - g(X))
    discrepancy: float  # E[g(X)] - E[g(Y)]

    @property
    def j_over_i(self) -> float:
        """Ratio J/I, close to 2 when f and q nearly agree."""
        return self.j_value / self.discrepancy if self.discrepancy > 0 else math.nan


def weight_diagnostics(pair: DensityPair, mc_samples: int = 200_000, seed: SeedLike = None) -> WeightDiagnostics:
    """Estimate weight normalisation, the signed KL terms and J for a pair."""
    rng = as_generator(seed)
    g_x = log_weight(pair, pair.target_sampler(rng, mc_samples))
    g_y = log_weight(pair, pair.proposal_sampler(rng, mc_samples))
    diff = g_y - g_x
    finite = np.isfinite(diff)
    j_value = float(diff[finite].var(ddof=1)) if finite.all() else math.inf
    return WeightDiagnostics(
        mean_weight=MonteCarloEstimate.from_samples(np.exp(g_y)),
        mean_g_proposal=MonteCarloEstimate.from_samples(g_y),
        mean_g_target=MonteCarloEstimate.from_samples(g_x),
        j_value=j_value,
        discrepancy=float(g_x.mean() - g_y.mean()),
    )
