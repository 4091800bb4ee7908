"""Tests for the block independence kernel and random walk Metropolis."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from indep_sampler.densities import log_weight
from indep_sampler.sampler.kernels import (
    BlockPlan,
    ChainState,
    block_independence_step,
    check_block_size,
    metropolis_accept,
    rwm_step,
)


class TestChainState:
    """Test chain state construction and the log-weight cache."""

    def test_from_values_caches_weights(self, gaussian_12):
        """Test the cache holds g(x) for each component."""
        state = ChainState.from_values(gaussian_12, [0.0, 1.0, 2.0])
        np.testing.assert_allclose(state.cached_log_weight, log_weight(gaussian_12, np.array([0.0, 1.0, 2.0])))
        assert state.n == 3
        assert state.cache_is_valid(gaussian_12)

    def test_zero_weight_start_rejected(self, uniform_05):
        """Test a start outside the target support is rejected."""
        with pytest.raises(ValueError, match="zero target weight"):
            ChainState.from_values(uniform_05, [0.5, 1.03])

    def test_stationary_start(self, gaussian_12, rng):
        """Test stationary starts have n components."""
        assert ChainState.stationary(gaussian_12, 7, rng).n == 7


class TestBlockPlan:
    """Test block index plans."""

    def test_draw_distinct(self, rng):
        """Test drawn blocks are k distinct indices."""
        plan = BlockPlan.draw(10, 4, rng)
        assert len(set(plan.indices.tolist())) == 4

    @given(n=st.integers(1, 300), data=st.data())
    def test_draw_is_k_subset_of_range(self, n, data):
        """Test every drawn plan is a k-subset of 0..n-1."""
        k = data.draw(st.integers(1, n))
        seed = data.draw(st.integers(0, 2**32 - 1))
        plan = BlockPlan.draw(n, k, np.random.default_rng(seed))
        indices = plan.indices.tolist()
        assert len(set(indices)) == k
        assert all(0 <= index < n for index in indices)

    def test_duplicates_rejected(self):
        """Test repeated indices are rejected."""
        with pytest.raises(ValueError, match="distinct"):
            BlockPlan(k=2, indices=np.array([1, 1]))

    @pytest.mark.parametrize("k", [0, 6])
    def test_block_size_range(self, k):
        """Test k outside 1..n is rejected."""
        with pytest.raises(ValueError, match="out of range"):
            check_block_size(k, 5)

    def test_out_of_range_indices(self):
        """Test validate catches indices beyond n."""
        with pytest.raises(ValueError, match="out of range"):
            BlockPlan(k=2, indices=np.array([0, 9])).validate(5)


class TestMetropolisAccept:
    """Test the accept/reject decision."""

    def test_non_negative_ratio_always_accepts(self, rng):
        """Test log ratios >= 0 are always accepted."""
        assert all(metropolis_accept(0.0, rng) for _ in range(100))

    def test_consumes_one_uniform(self):
        """Test exactly one uniform is drawn per decision."""
        a = np.random.default_rng(3)
        b = np.random.default_rng(3)
        metropolis_accept(5.0, a)
        b.random()
        assert a.random() == b.random()

    def test_nan_raises(self, rng):
        """Test a NaN ratio raises."""
        with pytest.raises(ValueError, match="NaN"):
            metropolis_accept(math.nan, rng)

    def test_acceptance_frequency(self):
        """Test acceptance frequency matches exp(log_ratio)."""
        rng = np.random.default_rng(4)
        hits = sum(metropolis_accept(math.log(0.3), rng) for _ in range(20_000))
        assert hits / 20_000 == pytest.approx(0.3, abs=0.015)


class TestBlockIndependenceStep:
    """Test one block step with forced blocks and proposals."""

    def test_log_ratio_and_acceptance(self, gaussian_12, rng):
        """Test the ratio sums g differences and an uphill move is accepted."""
        state = ChainState.from_values(gaussian_12, [2.0, 1.0, 3.0])
        plan = BlockPlan(k=2, indices=np.array([0, 2]))
        proposal = np.array([0.0, 0.5])
        expected = float(np.sum(log_weight(gaussian_12, proposal) - log_weight(gaussian_12, np.array([2.0, 3.0]))))

        state, record = block_independence_step(state, gaussian_12, 2, rng, plan=plan, proposal=proposal)

        assert record.log_ratio == pytest.approx(expected)
        assert record.accepted
        np.testing.assert_allclose(state.x, [0.0, 1.0, 0.5])
        assert state.cache_is_valid(gaussian_12)
        assert state.iteration == 1

    def test_rejection_leaves_state(self, gaussian_12, rng):
        """Test a hopeless proposal leaves state and cache untouched."""
        state = ChainState.from_values(gaussian_12, [0.0, 0.1])
        before = state.x.copy()
        plan = BlockPlan(k=1, indices=np.array([1]))
        state, record = block_independence_step(state, gaussian_12, 1, rng, plan=plan, proposal=np.array([60.0]))
        assert not record.accepted
        np.testing.assert_array_equal(state.x, before)
        assert state.cache_is_valid(gaussian_12)

    def test_zero_weight_proposal_rejected(self, uniform_05, rng):
        """Test proposals outside the target support are never accepted."""
        state = ChainState.from_values(uniform_05, [0.2, 0.4])
        plan = BlockPlan(k=2, indices=np.array([0, 1]))
        _, record = block_independence_step(state, uniform_05, 2, rng, plan=plan, proposal=np.array([0.5, 1.02]))
        assert record.log_ratio == -math.inf
        assert not record.accepted

    def test_log_ratio_ignores_unselected_order(self, t_5, rng):
        """Test permuting the components outside the block leaves the log ratio unchanged."""
        x = t_5.target_sampler(rng, 8)
        plan = BlockPlan(k=3, indices=np.array([1, 4, 6]))
        proposal = t_5.proposal_sampler(rng, 3)
        _, reference = block_independence_step(ChainState.from_values(t_5, x), t_5, 3, rng, plan=plan, proposal=proposal)
        outside = np.array([0, 2, 3, 5, 7])
        for _ in range(10):
            shuffled = x.copy()
            shuffled[outside] = x[rng.permutation(outside)]
            state = ChainState.from_values(t_5, shuffled)
            _, record = block_independence_step(state, t_5, 3, rng, plan=plan, proposal=proposal)
            assert record.log_ratio == pytest.approx(reference.log_ratio, abs=1e-12)

    def test_plan_size_mismatch(self, gaussian_12, rng):
        """Test a plan whose size differs from k is rejected."""
        state = ChainState.from_values(gaussian_12, [0.0, 0.1, 0.2])
        with pytest.raises(ValueError, match="does not match"):
            block_independence_step(state, gaussian_12, 2, rng, plan=BlockPlan(k=1, indices=np.array([0])))

    def test_cache_stays_valid_over_many_steps(self, t_5, rng):
        """Test the incremental cache equals a full recomputation after many steps."""
        state = ChainState.stationary(t_5, 20, rng)
        for _ in range(500):
            state, _ = block_independence_step(state, t_5, 5, rng)
        assert state.cache_is_valid(t_5)


class TestRwmStep:
    """Test random walk Metropolis."""

    def test_outside_support_rejected(self, rng):
        """Test proposals with -inf log target are rejected."""

        def logpost(x):
            return 0.0 if np.all(x == 0.5) else -math.inf

        x, record = rwm_step(np.array([0.5]), logpost, 1.0, rng)
        assert not record.accepted
        assert record.log_ratio == -math.inf
        assert record.log_target == 0.0
        np.testing.assert_array_equal(x, [0.5])

    def test_flat_target_accepts(self, rng):
        """Test a flat target accepts every move and reports log_target."""
        x, record = rwm_step(np.zeros(3), lambda x: 0.0, 0.1, rng)
        assert record.accepted
        assert record.log_target == 0.0
        assert record.k == 3
        assert x.shape == (3,)
