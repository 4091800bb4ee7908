"""Tests for the optimal-scaling formulas and Monte Carlo estimators."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from indep_sampler.densities import discrepancy_gaussian, gaussian_pair, uniform_pair
from indep_sampler.theory.scaling import (
    EFFICIENCY_CONSTANT,
    estimate_H_star,
    estimate_mean_acceptance,
    gaussian_acceptance_approx,
    h_variance_diagnostic,
    maximize_efficiency_constant,
    optimal_k,
    predict_acceptance,
    theoretical_curve,
    theoretical_efficiency,
    uniform_acceptance,
    uniform_case,
)


class TestAcceptanceApproximation:
    """Test the Gaussian approximation of the stationary acceptance."""

    @given(k=st.floats(0.5, 500), I=st.floats(1e-3, 5))
    def test_j_equal_2i_reduces_to_two_phi(self, k, I):
        """Test J = 2I gives 2 Phi(-sqrt(kI/2))."""
        expected = 2 * special.ndtr(-math.sqrt(k * I / 2))
        assert gaussian_acceptance_approx(k, I, 2 * I) == pytest.approx(expected, rel=1e-9, abs=1e-300)

    @given(k=st.floats(0.1, 1e6), I=st.floats(1e-4, 50), J=st.floats(1e-4, 100))
    def test_is_probability(self, k, I, J):
        """Test the approximation lies in [0, 1] without overflow."""
        value = gaussian_acceptance_approx(k, I, J)
        assert 0.0 <= value <= 1.0

    def test_non_positive_inputs(self):
        """Test zero arguments are rejected."""
        with pytest.raises(ValueError, match="k, I, J > 0"):
            gaussian_acceptance_approx(1, 0.0, 1.0)

    def test_predict_edge_cases(self):
        """Test I = 0 predicts 1 and I = inf predicts 0."""
        assert predict_acceptance(10, 0.0).value == 1.0
        assert predict_acceptance(10, math.inf).value == 0.0

    def test_predict_at_optimum(self):
        """Test the predicted acceptance at the optimal k is about 0.234."""
        I = discrepancy_gaussian(1.2).value
        approx = predict_acceptance(42, I)
        assert approx.value == pytest.approx(0.234, abs=0.002)
        assert approx.mean_moved == pytest.approx(42 * approx.value)
        assert approx.J == pytest.approx(2 * I)


class TestOptimalK:
    """Test the integer optimal block size."""

    def test_gaussian_12(self):
        """Test lambda = 1.2 with n = 100 gives k = 42."""
        assert optimal_k(discrepancy_gaussian(1.2).value, 100) == 42

    def test_clamped_to_n(self):
        """Test the optimum is clamped to n."""
        assert optimal_k(0.001, 100) == 100

    def test_large_discrepancy_gives_one(self):
        """Test a large discrepancy gives k = 1."""
        assert optimal_k(50.0, 100) == 1

    def test_zero_and_infinite(self):
        """Test I = 0 gives n and I = inf gives 1."""
        assert optimal_k(0.0, 17) == 17
        assert optimal_k(math.inf, 17) == 1

    def test_rounds_to_nearest(self):
        """Test 2.835/I is rounded to the nearest integer."""
        assert optimal_k(EFFICIENCY_CONSTANT / 4.4, 100) == 4
        assert optimal_k(EFFICIENCY_CONSTANT / 4.6, 100) == 5

    @pytest.mark.parametrize(("I", "n"), [(-0.1, 10), (math.nan, 10), (0.1, 0)])
    def test_invalid(self, I, n):
        """Test negative or NaN discrepancies and n < 1 are rejected."""
        with pytest.raises(ValueError):
            optimal_k(I, n)

    @given(I=st.floats(1e-4, 100), n=st.integers(1, 10_000))
    def test_in_range(self, I, n):
        """Test the optimum always lies in 1..n."""
        assert 1 <= optimal_k(I, n) <= n


class TestEfficiency:
    """Test the efficiency constants and curve."""

    def test_maximum(self):
        """Test numerical maximisation recovers kI = 2.835 and acceptance 0.234."""
        best, acceptance = maximize_efficiency_constant()
        assert best == pytest.approx(2.835, abs=0.005)
        assert acceptance == pytest.approx(0.234, abs=0.001)

    def test_efficiency_peaks_at_one(self):
        """Test normalised efficiency is 1 at acceptance 0.234 and lower elsewhere."""
        assert theoretical_efficiency(0.234) == pytest.approx(1.0, abs=1e-3)
        assert theoretical_efficiency(0.1) < 1.0
        assert theoretical_efficiency(0.5) < 1.0

    @pytest.mark.parametrize("acceptance", [0.0, 1.0, -0.2])
    def test_efficiency_domain(self, acceptance):
        """Test acceptance must lie strictly inside (0, 1)."""
        with pytest.raises(ValueError, match="0 < acceptance < 1"):
            theoretical_efficiency(acceptance)

    def test_curve(self):
        """Test the curve grid excludes the endpoints."""
        curve = theoretical_curve(9)
        assert list(curve.columns) == ["acceptance", "normalized_efficiency"]
        assert curve["acceptance"].iloc[0] == pytest.approx(0.1)
        assert curve["normalized_efficiency"].max() <= 1.0 + 1e-3


class TestUniformCase:
    """Test the exact uniform-pair results."""

    def test_uniform_acceptance(self):
        """Test acceptance (1 + eps)^-k."""
        assert uniform_acceptance(0.05, 20) == pytest.approx(1.05**-20)
        assert uniform_acceptance(0.05, 0) == 1.0

    @pytest.mark.parametrize("eps", [0.01, 0.05, 0.5])
    def test_optimum_acceptance_is_exp_minus_one(self, eps):
        """Test acceptance at the optimum is exp(-1) for every eps."""
        k_opt, acceptance = uniform_case(eps)
        assert k_opt == pytest.approx(1 / math.log1p(eps))
        assert acceptance == pytest.approx(math.exp(-1))

    def test_eps_must_be_positive(self):
        """Test eps = 0 has no finite optimum."""
        with pytest.raises(ValueError, match="eps > 0"):
            uniform_case(0.0)


class TestMonteCarloEstimators:
    """Test stationary acceptance and H* estimators."""

    def test_uniform_acceptance_estimate(self):
        """Test the estimator against the exact uniform acceptance."""
        estimate = estimate_mean_acceptance(uniform_pair(0.05), 20, mc_samples=100_000, seed=1)
        assert estimate.within(1.05**-20, n_se=4)

    def test_gaussian_estimate_near_approximation(self):
        """Test the estimate at k = 42 is close to the Gaussian approximation."""
        estimate = estimate_mean_acceptance(gaussian_pair(1.2), 42, mc_samples=50_000, seed=2)
        assert estimate.value == pytest.approx(0.234, abs=0.03)

    def test_estimator_arguments(self, gaussian_12):
        """Test k and sample-size validation."""
        with pytest.raises(ValueError, match="k must be"):
            estimate_mean_acceptance(gaussian_12, 0)
        with pytest.raises(ValueError, match="at least"):
            estimate_mean_acceptance(gaussian_12, 2, mc_samples=100)

    def test_h_star_k1_exact(self, gaussian_12):
        """Test H* for k = 1 is min(1, omega(y)/omega(x1))."""
        lam = 1.2
        c = 1 - 1 / lam**2
        expected = math.exp(min(0.0, -0.5 * c * (2.0**2 - 0.5**2)))
        estimate = estimate_H_star(gaussian_12, 2.0, 0.5, 1)
        assert estimate.value == pytest.approx(expected)
        assert estimate.std_error == 0.0

    def test_h_star_zero_weight(self, uniform_05):
        """Test H* is zero for a proposal outside the target support and x1 must have weight."""
        assert estimate_H_star(uniform_05, 1.03, 0.5, 3).value == 0.0
        with pytest.raises(ValueError, match="omega"):
            estimate_H_star(uniform_05, 0.5, 1.03, 3)

    def test_h_star_uniform_exact(self, uniform_05):
        """Test H* for the uniform pair equals (1 + eps)^-(k-1) inside the support."""
        estimate = estimate_H_star(uniform_05, 0.3, 0.7, 5, mc_samples=50_000, seed=3)
        assert estimate.within(1.05**-4, n_se=4)

    def test_h_variance_diagnostic(self, gaussian_12):
        """Test H(y, x^n) centres on H* and has no spread when k = 1."""
        report = h_variance_diagnostic(gaussian_12, 0.2, 1.0, n=200, k=3, resamples=20, inner_samples=500, seed=4)
        assert report.h_mean == pytest.approx(report.h_star.value, abs=0.05)
        single = h_variance_diagnostic(gaussian_12, 0.2, 1.0, n=10, k=1, resamples=5, seed=5)
        assert single.h_variance == 0.0
        assert single.h_std == 0.0
