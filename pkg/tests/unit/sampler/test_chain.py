"""Tests for running block independence-sampler chains."""

import numpy as np
import pytest
from scipy import stats

from indep_sampler.densities import gaussian_pair, uniform_pair
from indep_sampler.sampler.chain import START_CUSTOM, run_chain
from indep_sampler.theory.scaling import estimate_mean_acceptance, uniform_acceptance


class TestRunChain:
    """Test chain summaries, validation and reproducibility."""

    def test_mean_moved_is_k_times_acceptance(self, gaussian_12):
        """Test rows satisfy mean_moved = k x acceptance."""
        result = run_chain(gaussian_12, n=20, k=4, iterations=400, burn_in=50, seed=1)
        assert result.row.mean_moved == pytest.approx(4 * result.row.acceptance)
        assert result.accepted.size == 350

    def test_same_seed_same_chain(self, gaussian_12):
        """Test identical seeds reproduce the chain exactly."""
        a = run_chain(gaussian_12, n=10, k=3, iterations=300, seed=9, trace_thin=1)
        b = run_chain(gaussian_12, n=10, k=3, iterations=300, seed=9, trace_thin=1)
        np.testing.assert_array_equal(a.accepted, b.accepted)
        np.testing.assert_array_equal(a.trace.values, b.trace.values)

    def test_identity_proposal_always_accepts(self):
        """Test lambda = 1 accepts every proposal."""
        result = run_chain(gaussian_pair(1.0), n=5, k=5, iterations=200, seed=2)
        assert result.row.acceptance == 1.0

    @pytest.mark.parametrize(
        ("iterations", "burn_in", "k", "match"),
        [(10, 10, 1, "burn_in"), (10, -1, 1, "burn_in"), (10, 0, 11, "out of range")],
    )
    def test_invalid_arguments(self, gaussian_12, iterations, burn_in, k, match):
        """Test invalid budgets and block sizes are rejected."""
        with pytest.raises(ValueError, match=match):
            run_chain(gaussian_12, n=10, k=k, iterations=iterations, burn_in=burn_in)

    def test_custom_start_requires_x0(self, gaussian_12):
        """Test a custom start needs x0 of length n."""
        with pytest.raises(ValueError, match="x0"):
            run_chain(gaussian_12, n=3, k=1, iterations=10, start=START_CUSTOM)

    def test_unknown_start(self, gaussian_12):
        """Test unknown start modes are rejected."""
        with pytest.raises(ValueError, match="Unknown start"):
            run_chain(gaussian_12, n=3, k=1, iterations=10, start="overdispersed")

    def test_custom_start_used(self, gaussian_12):
        """Test the chain starts from x0."""
        result = run_chain(gaussian_12, n=2, k=1, iterations=1, start=START_CUSTOM, x0=np.array([50.0, 50.0]), seed=3)
        assert result.final_state.n == 2


@pytest.mark.slow
class TestChainStatistics:
    """Test long-run chain behaviour against exact and Monte Carlo values."""

    def test_uniform_acceptance_exact(self):
        """Test the uniform pair accepts at rate (1 + eps)^-k."""
        result = run_chain(uniform_pair(0.05), n=50, k=10, iterations=20_000, burn_in=1_000, seed=4)
        expected = uniform_acceptance(0.05, 10)
        assert abs(result.row.acceptance - expected) <= 4 * result.row.mc_se + 0.005

    def test_acceptance_matches_stationary_expectation(self, gaussian_12):
        """Test chain acceptance agrees with E[1 ^ W_k*]."""
        result = run_chain(gaussian_12, n=100, k=42, iterations=20_000, burn_in=1_000, seed=5)
        estimate = estimate_mean_acceptance(gaussian_12, 42, mc_samples=100_000, seed=6)
        assert abs(result.row.acceptance - estimate.value) <= 4 * result.row.mc_se + 4 * estimate.std_error + 0.005

    @pytest.mark.parametrize("k", [1, 2])
    def test_stationary_marginal(self, k):
        """Test component 0 of a two-component chain passes a KS test against the N(0, 1) target."""
        result = run_chain(gaussian_pair(1.5), n=2, k=k, iterations=41_000, burn_in=1_000, seed=7 + k, trace_thin=20)
        values = result.trace.values
        assert values.size == 2_000
        assert stats.kstest(values, "norm").pvalue > 0.01
