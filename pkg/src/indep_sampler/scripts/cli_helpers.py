"""
Helper functions for the indep-sampler subcommands.

Each ``run_*`` function carries out one subcommand for a resolved RunConfig,
writes its files into the output directory and returns the output file names
plus headline results for the manifest. They are called from cli.py.
"""

import logging
import math
from dataclasses import asdict, replace
from pathlib import Path
from typing import Any, Optional

import pandas as pd

from indep_sampler.config import RunConfig
from indep_sampler.densities import pair_discrepancy, pair_from_spec
from indep_sampler.diagnostics.io import (
    load_clusters,
    load_removal_times,
    write_csv,
    write_ess_csv,
    write_frame,
    write_trace_csv,
)
from indep_sampler.diagnostics.report import ReportWriter
from indep_sampler.diagnostics.tuning import k_nearest_acceptance
from indep_sampler.experiments.product import ExperimentConfig, compare_with_rwm, default_k_grid, efficiency_vs_theory, run_sweep
from indep_sampler.models.bdm import BdmParams, bdm_tuning_tables, run_bdm_grid, simulate_cluster_data
from indep_sampler.models.sir import default_sir_grid, run_sir_grid, simulated_dataset, sir_tuning_table
from indep_sampler.theory.limit_process import convergence_in_n, gap_is_decreasing, scaled_chain_vs_limit
from indep_sampler.theory.scaling import (
    EFFICIENCY_CONSTANT,
    maximize_efficiency_constant,
    optimal_k,
    predict_acceptance,
    theoretical_curve,
    uniform_case,
)

# Parameters of the synthetic BDM dataset used when no cluster file is given at desk scale
SYNTHETIC_BDM_PARAMS = BdmParams(a=0.6, d=0.2)
CONVERGENCE_SEEDS = 3

Outcome = tuple[list[str], dict[str, Any]]


def _log(message: str, logger: Optional[logging.Logger] = None):
    """Log message using logger if provided, otherwise print."""
    if logger:
        logger.info(message)
    else:
        print(message)


def _require(config: RunConfig, key: str) -> Any:
    value = config.get(key)
    if value is None:
        msg = f"'{config.subcommand}' needs '{key}' (flag --{key.replace('_', '-')} or config file)"
        raise ValueError(msg)
    return value


def _out(config: RunConfig, name: str) -> Path:
    return Path(config.out_dir) / name


def run_theory(config: RunConfig, logger: Optional[logging.Logger] = None) -> Outcome:
    """Discrepancy, optimal block size and predicted acceptance for one pair, plus the efficiency curve."""
    pair = pair_from_spec(_require(config, "pair"))
    n = config.get("n", 1000)
    discrepancy = pair_discrepancy(pair, mc_samples=config.get("mc_samples", 1_000_000), seed=config.seed)
    results: dict[str, Any] = {
        "pair": pair.spec,
        "discrepancy": discrepancy.value,
        "discrepancy_se": discrepancy.std_error,
        "discrepancy_method": discrepancy.method,
    }

    if discrepancy.is_finite:
        _log(f"  I = {discrepancy.value:.4f} ({discrepancy.method})", logger)
    else:
        _log("  I = inf (divergent)", logger)

    k_best = optimal_k(discrepancy.value, n)
    results["optimal_k"] = k_best
    _log(f"  optimal k = {k_best} (n = {n})", logger)
    if 0 < discrepancy.value < math.inf:
        prediction = predict_acceptance(k_best, discrepancy.value)
        results["predicted_acceptance"] = prediction.value
        results["predicted_mean_moved"] = prediction.mean_moved
        _log(f"  predicted acceptance = {prediction.value:.4f} (kI = {k_best * discrepancy.value:.3f})", logger)

    if pair.family == "uniform_eps" and pair.parameter > 0:
        k_uniform, acceptance = uniform_case(pair.parameter)
        results["uniform_k"] = k_uniform
        results["uniform_acceptance"] = acceptance
        _log(f"  uniform optimum: k = {k_uniform:.2f}, acceptance = {acceptance:.4f}", logger)

    constant, acceptance_at_max = maximize_efficiency_constant()
    results["efficiency_constant"] = constant
    results["acceptance_at_constant"] = acceptance_at_max
    _log(f"  kI maximising efficiency = {constant:.4f} (reference {EFFICIENCY_CONSTANT}), acceptance {acceptance_at_max:.4f}", logger)

    curve = theoretical_curve(config.get("curve_points", 99))
    curve_path = _out(config, "theory_curve.csv")
    write_frame(curve, curve_path)
    return [curve_path.name], results


def run_product(config: RunConfig, logger: Optional[logging.Logger] = None) -> Outcome:
    """Block-size sweep on a product target; writes the tuning CSV and the theory comparison."""
    pair = pair_from_spec(_require(config, "pair"))
    n = config.get("n", 1000)
    k_grid = config.get("k_grid") or default_k_grid(pair, n, points=config.get("grid_points", 10), logger=logger)
    experiment = ExperimentConfig(
        pair_spec=pair.spec,
        n=n,
        k_grid=sorted(set(k_grid)),
        iterations=config.get("iterations", 100_000),
        burn_in=config.get("burn_in", 1_000),
        seed=config.seed,
        replicates=config.get("replicates", 3),
    )
    table = run_sweep(experiment, threads=config.threads, logger=logger)
    outputs = [write_csv(table, _out(config, "tuning.csv")).name]

    comparison = efficiency_vs_theory(table, logger=logger)
    frame = pd.DataFrame({"k": comparison.k_values, "observed": comparison.observed, "theoretical": comparison.theoretical})
    write_frame(frame, _out(config, "efficiency_vs_theory.csv"))
    outputs.append("efficiency_vs_theory.csv")

    best = table.argmax
    results: dict[str, Any] = {
        "pair": pair.spec,
        "discrepancy": table.metadata["discrepancy"],
        "predicted_optimal_k": table.metadata["optimal_k"],
        "best_k": best.k,
        "best_acceptance": best.acceptance,
        "sup_gap": comparison.sup_gap,
    }

    if config.get("compare_rwm"):
        if pair.family != "gaussian":
            _log("  ⚠ RWM comparison needs a Gaussian pair; skipped", logger)
        else:
            rwm = compare_with_rwm(pair.parameter, n=min(n, 100), seed=config.seed)
            write_frame(pd.DataFrame([asdict(rwm)]), _out(config, "rwm_comparison.csv"))
            outputs.append("rwm_comparison.csv")
            results["rwm_ess_per_iteration"] = rwm.rwm_ess_per_iteration
            results["independence_ess_per_iteration"] = rwm.independence_ess_per_iteration

    outputs.append(ReportWriter.write_markdown_summary({pair.label: table}, config.out_dir, "Product-density sweep").name)
    ReportWriter.print_summary(pair.label, table)
    return outputs, results


def run_jumplim(config: RunConfig, logger: Optional[logging.Logger] = None) -> Outcome:
    """Scaled chain against the limiting jump process, at n and over the n ladder."""
    pair = pair_from_spec(_require(config, "pair"))
    n, k, horizon = config.get("n", 1000), config.get("k", 8), config.get("horizon", 200.0)
    hstar_samples = config.get("hstar_samples", 1000)

    comparison = scaled_chain_vs_limit(pair, n, k, horizon, seed=config.seed, hstar_samples=hstar_samples, logger=logger)
    _log(
        f"  n={n}: chain rate {comparison.chain_rate.value:.4f} ± {comparison.chain_rate.std_error:.4f}, "
        f"limit rate {comparison.limit_rate.value:.4f} ± {comparison.limit_rate.std_error:.4f}, "
        f"k E[1 ^ W] = {comparison.theory_rate.value:.4f}",
        logger,
    )
    if not comparison.passed:
        _log("  ⚠ chain and limit process disagree at 3 SE or a KS test failed", logger)
    write_frame(pd.DataFrame([comparison.to_dict()]), _out(config, "limit_comparison.csv"))

    seeds = [config.seed + offset for offset in range(CONVERGENCE_SEEDS)]
    frame = convergence_in_n(pair, config.get("ns", [100, 300, 1000]), k, horizon, seeds, hstar_samples=hstar_samples, logger=logger)
    write_frame(frame, _out(config, "convergence_in_n.csv"))
    decreasing = gap_is_decreasing(frame)
    _log(f"  H spread around H* decreasing in n: {decreasing}", logger)

    results = {"pair": pair.spec, **comparison.to_dict(), "gap_decreasing_in_n": decreasing}
    return ["limit_comparison.csv", "convergence_in_n.csv"], results


def run_sir(config: RunConfig, logger: Optional[logging.Logger] = None) -> Outcome:
    """SIR data-augmentation k-sweep on a removal-times file or a simulated outbreak."""
    population = config.get("population", 120)
    data_path = config.get("data")
    if data_path and not config.get("simulate"):
        data = load_removal_times(data_path, population)
    else:
        _log("  No removal-times file given; using a simulated outbreak", logger)
        data = simulated_dataset(population_size=population, seed=config.seed).data
    _log(f"  {data.m} removals in a population of {data.population_size}", logger)

    alpha = config.get("alpha")
    k_grid = config.get("k") or default_sir_grid(data.m, config.get("grid_points"))
    iterations, burn_in = config.get("iterations", 100_000), config.get("burn_in", 5_000)
    runs = run_sir_grid(data, alpha, k_grid, iterations, burn_in, seed=config.seed, threads=config.threads, logger=logger)
    table = sir_tuning_table(runs, data, alpha, iterations, burn_in)

    best = table.argmax
    best_run = next(run for run in runs if run.row.k == best.k)
    outputs = [
        write_csv(table, _out(config, "tuning.csv")).name,
        write_trace_csv(list(best_run.traces.values()), _out(config, "traces.csv")).name,
    ]
    nearest = k_nearest_acceptance(table)
    title = f"SIR alpha={'unknown' if alpha is None else alpha}"
    outputs.append(ReportWriter.write_markdown_summary({title: table}, config.out_dir, "SIR data augmentation").name)
    ReportWriter.print_summary(title, table)
    results = {
        "m": data.m,
        "alpha": "unknown" if alpha is None else alpha,
        "best_k": best.k,
        "best_acceptance": best.acceptance,
        "k_nearest_optimal_acceptance": nearest.k,
        "nearest_fraction_of_best": nearest.mean_moved / best.mean_moved if best.mean_moved > 0 else math.nan,
        **best_run.posterior_means,
    }
    return outputs, results


def run_bdm(config: RunConfig, logger: Optional[logging.Logger] = None) -> Outcome:
    """BDM pseudo-marginal k-sweep on a cluster file, the bundled table or synthetic data."""
    target_size = config.get("ntarget", 500)
    data_path = config.get("data")
    if data_path:
        data = load_clusters(data_path)
    elif config.scale == "full":
        data = load_clusters()
    else:
        sample_size = min(config.get("sample_size", 120), target_size)
        _log(f"  No cluster file given; simulating {sample_size} samples at a={SYNTHETIC_BDM_PARAMS.a}, d={SYNTHETIC_BDM_PARAMS.d}", logger)
        data = simulate_cluster_data(SYNTHETIC_BDM_PARAMS, target_size, sample_size, seed=config.seed)
    _log(f"  {data.sample_size} samples in {data.n_clusters} clusters ({data.singletons} singletons)", logger)

    n_latent = config.get("nlatent", 6000)
    n_rep = config.get("nrep", 25)
    iterations, burn_in = config.get("iterations", 100_000), config.get("burn_in", 10_000)
    requested = config.get("k") or config.get("k_grid") or []
    k_grid = [k for k in requested if k <= n_latent]
    if not k_grid:
        msg = f"no block size in {requested} fits nlatent={n_latent}"
        raise ValueError(msg)
    runs = run_bdm_grid(data, k_grid, [n_latent], target_size, iterations, burn_in, config.seed, n_rep, config.threads, logger)
    table = bdm_tuning_tables(runs, data, target_size, iterations, burn_in, n_rep)[n_latent]

    best = table.argmax
    best_run = next(run for run in runs if run.row.k == best.k)
    reports = []
    for run in runs:
        for name, report in run.ess.items():
            reports.append(replace(report, label=f"{name}@k={run.row.k}"))
    outputs = [
        write_csv(table, _out(config, "tuning.csv")).name,
        write_trace_csv(list(best_run.traces.values()), _out(config, "traces.csv")).name,
        write_ess_csv(reports, _out(config, "ess.csv")).name,
    ]
    title = f"BDM n_latent={n_latent}"
    outputs.append(ReportWriter.write_markdown_summary({title: table}, config.out_dir, "BDM pseudo-marginal MCMC").name)
    ReportWriter.print_summary(title, table)
    results = {
        "sample_size": data.sample_size,
        "n_clusters": data.n_clusters,
        "best_k": best.k,
        "best_acceptance": best.acceptance,
        "posterior_mean_a": float(best_run.traces["a"].values.mean()),
        "posterior_mean_d": float(best_run.traces["d"].values.mean()),
    }
    return outputs, results


RUNNERS = {
    "theory": run_theory,
    "product": run_product,
    "jumplim": run_jumplim,
    "sir": run_sir,
    "bdm": run_bdm,
}
