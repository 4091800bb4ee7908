"""Block independence-sampler MCMC with optimal block-size tuning."""

from indep_sampler.densities import pair_discrepancy, pair_from_spec
from indep_sampler.sampler.chain import run_chain
from indep_sampler.theory.scaling import optimal_k, predict_acceptance

__version__ = "0.1.0"

__all__ = ["__version__", "optimal_k", "pair_discrepancy", "pair_from_spec", "predict_acceptance", "run_chain"]
