"""Tests for effective sample size and batch-means standard errors."""

import math

import arviz as az
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from indep_sampler.diagnostics.ess import autocovariance, batch_means_se, effective_sample_size
from indep_sampler.records import Trace
from tests.helpers.oracles import ar1_series

AR1_TRACE = ar1_series(0.6, 2_000, np.random.default_rng(5))


class TestAutocovariance:
    """Test the autocovariance against a direct sum."""

    def test_matches_direct_sum(self, rng):
        """Test every lag against the explicit formula."""
        x = rng.standard_normal(50)
        centered = x - x.mean()
        direct = [np.sum(centered[: 50 - t] * centered[t:]) / 50 for t in range(50)]
        np.testing.assert_allclose(autocovariance(x), direct, atol=1e-12)


class TestEffectiveSampleSize:
    """Test ESS from the initial positive sequence."""

    def test_ar1_iact(self):
        """Test an AR(1) chain has IACT close to (1 + phi)/(1 - phi)."""
        values = ar1_series(0.5, 100_000, np.random.default_rng(1))
        report = effective_sample_size(values, label="ar1")
        assert report.iact == pytest.approx(3.0, rel=0.1)
        assert report.ess == pytest.approx(report.n / report.iact)
        assert report.label == "ar1"

    def test_agrees_with_arviz_mean_ess(self):
        """Test a long AR(1) chain gives about the same ESS as arviz's mean estimator."""
        values = ar1_series(0.5, 100_000, np.random.default_rng(6))
        reference = float(az.ess(values[None, :], method="mean"))
        assert effective_sample_size(values).ess == pytest.approx(reference, rel=0.1)

    def test_iid_close_to_n(self, rng):
        """Test an i.i.d. sample has ESS close to n."""
        report = effective_sample_size(rng.standard_normal(20_000))
        assert report.ess == pytest.approx(20_000, rel=0.1)

    def test_antithetic_clipped_at_n(self):
        """Test negative autocorrelation is floored at IACT 1."""
        values = np.tile([1.0, -1.0], 100)
        report = effective_sample_size(values)
        assert report.iact == 1.0
        assert report.ess == 200

    def test_trace_label_used(self, rng):
        """Test Trace input keeps its label."""
        report = effective_sample_size(Trace(rng.standard_normal(200), label="beta"))
        assert report.label == "beta"

    @given(scale=st.floats(0.01, 100.0), shift=st.floats(-1000.0, 1000.0), flip=st.booleans())
    def test_affine_invariance(self, scale, shift, flip):
        """Test ESS ignores shifts and rescaling of the trace."""
        scaled = (-scale if flip else scale) * AR1_TRACE + shift
        assert effective_sample_size(scaled).iact == pytest.approx(effective_sample_size(AR1_TRACE).iact, rel=1e-6)

    def test_too_short(self):
        """Test traces shorter than 100 are rejected."""
        with pytest.raises(ValueError, match="at least 100"):
            effective_sample_size(np.arange(99.0))

    def test_constant_trace(self):
        """Test a constant trace reports zero variance."""
        with pytest.raises(ValueError, match="zero variance"):
            effective_sample_size(np.ones(500))


class TestBatchMeans:
    """Test batch-means standard errors."""

    def test_iid_close_to_classical(self, rng):
        """Test i.i.d. data gives about sigma/sqrt(n)."""
        values = rng.standard_normal(40_000)
        assert batch_means_se(values) == pytest.approx(1 / math.sqrt(40_000), rel=0.5)

    def test_correlated_inflated(self):
        """Test positive autocorrelation inflates the error."""
        values = ar1_series(0.9, 40_000, np.random.default_rng(2))
        naive = values.std(ddof=1) / math.sqrt(values.size)
        assert batch_means_se(values) > 2 * naive

    def test_short_inputs(self):
        """Test tiny inputs fall back to simple formulas."""
        assert batch_means_se(np.array([1.0])) == 0.0
        assert batch_means_se(np.array([0.0, 2.0]), batches=20) == pytest.approx(1.0)
