"""Long-running reproduction checks of the block-size scaling results on product targets and the SIR model."""

import math

import pytest

from indep_sampler.densities import discrepancy_t, gaussian_pair, pair_from_spec
from indep_sampler.diagnostics.tuning import efficiency_fraction, k_nearest_acceptance
from indep_sampler.experiments.product import ExperimentConfig, default_k_grid, efficiency_vs_theory, run_sweep
from indep_sampler.models.sir import simulated_dataset, sweep_sir
from indep_sampler.theory.limit_process import convergence_in_n, gap_is_decreasing
from indep_sampler.theory.scaling import OPTIMAL_ACCEPTANCE, uniform_case

pytestmark = [pytest.mark.slow, pytest.mark.integration]

T_DISCREPANCIES = {5: 0.1582, 10: 0.0338, 20: 0.0083}


class TestDiscrepancyTable:
    """Test the t-proposal discrepancies at one million draws."""

    @pytest.mark.parametrize(("nu", "expected"), sorted(T_DISCREPANCIES.items()))
    def test_t_values(self, nu, expected):
        """Test each value lies within Monte Carlo error of the tabulated one."""
        result = discrepancy_t(nu, mc_samples=1_000_000, seed=nu)
        assert abs(result.value - expected) <= 4 * result.std_error + 5e-4


class TestProductSweeps:
    """Test where the most efficient block size falls on product targets."""

    def test_gaussian_optimum_near_0234(self):
        """Test the best k for lambda = 1.2 sits at or next to the predicted 42, with acceptance near 0.234."""
        pair = pair_from_spec("gaussian:1.2")
        grid = default_k_grid(pair, 1000)
        position = grid.index(42)
        config = ExperimentConfig(pair_spec=pair.spec, n=1000, k_grid=grid, iterations=50_000, burn_in=500, seed=11, replicates=1)
        table = run_sweep(config)
        best = table.argmax
        assert best.k in grid[position - 1 : position + 2]
        assert 0.15 <= best.acceptance <= 0.33
        k42 = next(row for row in table.rows if row.k == 42)
        assert k42.acceptance == pytest.approx(0.2348, abs=0.03)

    def test_cauchy_optimum_small(self):
        """Test a t_1 proposal is most efficient near k = 3 with acceptance about 0.383."""
        config = ExperimentConfig(pair_spec="t:1", n=1000, k_grid=list(range(1, 9)), iterations=50_000, burn_in=500, seed=3, replicates=1)
        table = run_sweep(config)
        assert 2 <= table.argmax.k <= 4
        k3 = next(row for row in table.rows if row.k == 3)
        assert k3.acceptance == pytest.approx(0.383, abs=0.05)


class TestUniformOptimum:
    """Test the uniform pair optimum as the support mismatch vanishes."""

    def test_acceptance_tends_to_inverse_e(self):
        """Test acceptance at the optimum is within 1e-3 of exp(-1)."""
        _, acceptance = uniform_case(1e-4)
        assert abs(acceptance - math.exp(-1)) < 1e-3


@pytest.fixture(scope="module")
def gaussian_sweep():
    """Desk-scale Gaussian sweeps on the default grid, computed once per lambda."""
    tables = {}

    def sweep(lam):
        if lam not in tables:
            pair = pair_from_spec(f"gaussian:{lam}")
            grid = default_k_grid(pair, 1000)
            config = ExperimentConfig(pair_spec=pair.spec, n=1000, k_grid=grid, iterations=20_000, burn_in=500, seed=21, replicates=1)
            tables[lam] = run_sweep(config)
        return tables[lam]

    return sweep


class TestGaussianSweepsAcrossLambda:
    """Test the optimum acceptance and the agreement with the theoretical efficiency curve."""

    @pytest.mark.parametrize("lam", [1.05, 1.1, 1.2, 1.5, 2.0])
    def test_argmax_acceptance_window(self, gaussian_sweep, lam):
        """Test the most efficient grid k has acceptance in [0.15, 0.35]."""
        assert 0.15 <= gaussian_sweep(lam).argmax.acceptance <= 0.35

    def test_efficiency_close_to_theory_near_one(self, gaussian_sweep):
        """Test observed normalised efficiency stays within 0.1 of the theoretical curve at lambda = 1.05."""
        comparison = efficiency_vs_theory(gaussian_sweep(1.05))
        assert comparison.k_values
        assert comparison.sup_gap < 0.1

    def test_agreement_worsens_away_from_one(self, gaussian_sweep):
        """Test the lambda = 2 sweep departs further from the theoretical curve than lambda = 1.05."""
        near = efficiency_vs_theory(gaussian_sweep(1.05))
        far = efficiency_vs_theory(gaussian_sweep(2.0))
        assert far.sup_gap > near.sup_gap


class TestWeakLimit:
    """Test the scaled chain against its jump-process limit for lambda = 1.5, k = 8."""

    def test_rates_agree_and_kernel_spread_shrinks(self):
        """Test every (n, seed) row matches the limit and theory rates, and the H spread falls over n = 100, 300, 1000."""
        frame = convergence_in_n(
            gaussian_pair(1.5), [100, 300, 1000], 8, horizon=50, seeds=[1, 2, 3], hstar_samples=500, spread_samples=(100, 3_000)
        )
        assert len(frame) == 9
        for row in frame.itertuples():
            assert abs(row.chain_rate - row.limit_rate) <= 4 * math.hypot(row.chain_rate_se, row.limit_rate_se)
            assert abs(row.chain_rate - row.theory_rate) <= 4 * math.hypot(row.chain_rate_se, row.theory_rate_se)
        assert gap_is_decreasing(frame)


@pytest.fixture(scope="module")
def stand_in_outbreak():
    """Simulated outbreak used in place of an observed removal-times file (N = 120, seed 0)."""
    return simulated_dataset(seed=0).data


class TestSirGate:
    """Test the infection-time block size on the simulated stand-in outbreak."""

    def test_fixed_alpha_optimum(self, stand_in_outbreak):
        """Test alpha = 1 puts the best k in [3, 20] and the k nearest 0.234 within 90% of the best mean moved."""
        m = stand_in_outbreak.m
        table = sweep_sir(stand_in_outbreak, 1.0, list(range(1, m + 1)), iterations=10_000, burn_in=500, seed=13)
        best = table.argmax
        assert 3 <= best.k <= 20
        nearest = k_nearest_acceptance(table, OPTIMAL_ACCEPTANCE)
        assert efficiency_fraction(table, nearest) >= 0.9

    def test_unknown_alpha_acceptance_above_0234(self, stand_in_outbreak):
        """Test sampling alpha keeps infection-time acceptance above 0.234 from single-site to full blocks."""
        m = stand_in_outbreak.m
        table = sweep_sir(stand_in_outbreak, None, sorted({1, m // 2, m}), iterations=5_000, burn_in=500, seed=17)
        assert all(row.acceptance > OPTIMAL_ACCEPTANCE for row in table.rows)
