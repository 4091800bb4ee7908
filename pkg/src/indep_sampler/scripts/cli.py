#!/usr/bin/env python3
"""
Block independence-sampler experiments

Subcommands:
    theory   - discrepancy I, optimal block size and predicted acceptance for a pair
    product  - block-size sweep on an i.i.d. product target
    jumplim  - scaled chain against its limiting jump process
    sir      - SIR epidemic data augmentation k-sweep
    bdm      - birth-death-mutation pseudo-marginal k-sweep

Usage:
    indep-sampler theory --pair gaussian:1.2
    indep-sampler product --pair t:1 --scale desk
    indep-sampler sir --data removals.txt --alpha 3 --threads 4

Exit codes:
    0 - Run completed successfully
    1 - Run failed (runtime error)
    2 - Usage, configuration or data error
"""

import argparse
import logging
import sys
import traceback
from typing import Optional

from indep_sampler.config import SCALES, build_run_config
from indep_sampler.diagnostics.report import ReportWriter

from .cli_helpers import RUNNERS, _log

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

SUBCOMMAND_HELP = {
    "theory": "Discrepancy I, optimal block size and predicted acceptance for a pair",
    "product": "Block-size sweep on an i.i.d. product target",
    "jumplim": "Scaled chain against its limiting jump process",
    "sir": "SIR epidemic data augmentation k-sweep",
    "bdm": "Birth-death-mutation pseudo-marginal k-sweep",
}

# flag dest -> (config key, help), per subcommand
SUBCOMMAND_FLAGS: dict[str, dict[str, tuple[str, str]]] = {
    "theory": {
        "pair": ("pair", "Target/proposal pair, e.g. gaussian:1.2, t:5, uniform_eps:0.05"),
        "n": ("n", "Number of components (default: preset)"),
        "mc_samples": ("mc_samples", "Monte Carlo samples for the discrepancy"),
        "curve_points": ("curve_points", "Points on the theoretical efficiency curve"),
    },
    "product": {
        "pair": ("pair", "Target/proposal pair, e.g. gaussian:1.05 or t:1"),
        "n": ("n", "Number of components"),
        "k_grid": ("k_grid", "Block sizes, e.g. '1,2,5-10', or 'sweep' for the default grid"),
        "grid_points": ("grid_points", "Points in the default grid"),
        "iters": ("iterations", "Iterations per chain, burn-in included"),
        "burnin": ("burn_in", "Burn-in iterations"),
        "replicates": ("replicates", "Independent chains per block size"),
    },
    "jumplim": {
        "pair": ("pair", "Target/proposal pair"),
        "n": ("n", "Number of components"),
        "k": ("k", "Block size"),
        "horizon": ("horizon", "Time horizon in units of n steps"),
        "hstar_samples": ("hstar_samples", "Monte Carlo samples per H* evaluation"),
        "ns": ("ns", "Component counts for the convergence ladder, e.g. '100,300,1000'"),
    },
    "sir": {
        "data": ("data", "Removal-times file (one time per line)"),
        "population": ("population", "Population size N"),
        "alpha": ("alpha", "Gamma shape of the infectious period, or 'unknown'"),
        "k": ("k", "Block sizes, e.g. '1-30', or 'sweep'"),
        "grid_points": ("grid_points", "Points in the default grid when m is large"),
        "iters": ("iterations", "Iterations per chain, burn-in included"),
        "burnin": ("burn_in", "Burn-in iterations"),
    },
    "bdm": {
        "data": ("data", "Cluster file with 'size,count' lines (default: synthetic at desk scale)"),
        "ntarget": ("ntarget", "Target population size N_T"),
        "nlatent": ("nlatent", "Length of the latent vectors u and w"),
        "k": ("k", "Block sizes, e.g. '100,300,1000'"),
        "iters": ("iterations", "Iterations per chain, burn-in included"),
        "burnin": ("burn_in", "Burn-in iterations"),
        "nrep": ("nrep", "Blocks of v in the likelihood estimate"),
        "sample_size": ("sample_size", "Sample size of the synthetic dataset"),
    },
}

SWITCHES = {
    "product": {"compare_rwm": "Also compare with random walk Metropolis (Gaussian pairs)"},
    "sir": {"simulate": "Use a simulated outbreak even when --data is given"},
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Flat 'key = value' config file")
    parser.add_argument("--seed", help="Master seed (64-bit unsigned)")
    parser.add_argument("--out-dir", dest="out_dir", help="Output directory (default: $INDEP_SAMPLER_OUT_DIR or results)")
    parser.add_argument("--scale", choices=SCALES, help="Preset scale (default: desk)")
    parser.add_argument("--threads", help="Worker processes for sweeps (default: 1)")
    parser.add_argument("--env-file", dest="env_file", help="Path to .env file (default: .env in working dir or system env vars)")
    parser.add_argument("--verbose", action="store_true", help="Debug-level progress output")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    parser = argparse.ArgumentParser(
        prog="indep-sampler",
        description="Block independence-sampler MCMC: scaling theory, tuning sweeps and applied models",
        epilog="Exit codes: 0 ok, 1 runtime failure, 2 usage/config/data error",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for subcommand, flags in SUBCOMMAND_FLAGS.items():
        sub = subparsers.add_parser(subcommand, help=SUBCOMMAND_HELP[subcommand])
        for dest, (_, help_text) in flags.items():
            sub.add_argument(f"--{dest.replace('_', '-')}", dest=dest, help=help_text)
        for dest, help_text in SWITCHES.get(subcommand, {}).items():
            sub.add_argument(f"--{dest.replace('_', '-')}", dest=dest, action="store_true", default=None, help=help_text)
        _add_common_flags(sub)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Optional[str]]:
    """Map parsed flags onto config keys."""
    flags = SUBCOMMAND_FLAGS[args.subcommand]
    overrides = {key: getattr(args, dest) for dest, (key, _) in flags.items()}
    overrides.update({dest: getattr(args, dest) for dest in SWITCHES.get(args.subcommand, {})})
    overrides.update({key: getattr(args, key) for key in ("seed", "out_dir", "scale", "threads")})
    return overrides


def _console_logger(verbose: bool) -> logging.Logger:
    """Console logger that prints bare messages."""
    console_logger = logging.getLogger("indep_sampler")
    console_logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    # Rebind to the current stdout on every run
    for old in list(console_logger.handlers):
        console_logger.removeHandler(old)
    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter("%(message)s"))
    console_logger.addHandler(handler)
    return console_logger


def dispatch(argv: Optional[list[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and return its exit code.

    Args:
        argv: Command-line arguments without the program name (default: sys.argv[1:])

    Returns:
        0 on success, 1 on a runtime failure, 2 on a usage, config or data error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    print("=" * 60)
    print(f"INDEPENDENCE SAMPLER: {args.subcommand.upper()}")
    print("=" * 60)
    logger = _console_logger(args.verbose)

    # [1] Load configuration
    try:
        _log("\n[1/3] Loading configuration...", logger)
        config = build_run_config(args.subcommand, _overrides(args), config_file=args.config, env_file=args.env_file)
        _log(f"✓ Configuration loaded (scale={config.scale}, seed={config.seed}, out_dir={config.out_dir})", logger)
    except (ValueError, TypeError, FileNotFoundError) as e:
        print(f"\n❌ CONFIGURATION ERROR: {e}")
        return EXIT_USAGE

    # [2] Run the experiment
    try:
        _log(f"\n[2/3] Running {config.subcommand}...", logger)
        outputs, results = RUNNERS[config.subcommand](config, logger)
        _log(f"✓ {config.subcommand} finished", logger)
    except (ValueError, TypeError, FileNotFoundError) as e:
        print(f"\n❌ DATA ERROR: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\n\nInterrupted by user")
        return EXIT_RUNTIME
    except Exception as e:
        print(f"\n❌ RUN FAILED: {e}")
        traceback.print_exc()
        return EXIT_RUNTIME

    # [3] Manifest
    _log("\n[3/3] Writing manifest...", logger)
    manifest = ReportWriter.write_manifest(config.to_dict(), [*outputs, "manifest.json"], config.out_dir, results)
    _log(f"✓ Manifest saved to: {manifest}", logger)
    return EXIT_OK


def main():
    """CLI entry point for the indep-sampler command."""
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
