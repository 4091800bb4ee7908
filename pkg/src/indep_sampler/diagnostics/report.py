"""Run reports: the JSON manifest, a Markdown summary of tuning tables and a console summary."""

import json
import math
import pathlib
import platform
from datetime import datetime, timezone
from typing import Any, Optional

import arviz as az
import numpy as np
import pandas as pd
import scipy

from ..records import TuningTable
from ..theory.scaling import OPTIMAL_ACCEPTANCE
from .tuning import k_nearest_acceptance

MANIFEST_NAME = "manifest.json"
SUMMARY_NAME = "summary.md"


def _jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats for json.dump."""
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _format(value: float) -> str:
    return "nan" if math.isnan(value) else f"{value:.4g}"


class ReportWriter:
    """Writes run manifests and tuning summaries."""

    @staticmethod
    def versions() -> dict[str, str]:
        """Versions of the package and its numeric stack."""
        from .. import __version__  # noqa: PLC0415 - package __init__ imports this module's siblings

        return {
            "indep_sampler": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
            "arviz": az.__version__,
        }

    @staticmethod
    def write_manifest(
        config: dict[str, Any],
        outputs: list[str],
        out_dir: str,
        results: Optional[dict[str, Any]] = None,
    ) -> pathlib.Path:
        """
        Write manifest.json echoing the resolved config, versions and output files.

        The manifest carries no timestamp so identical runs give identical manifests.

        Args:
            config: Resolved run configuration (RunConfig.to_dict())
            outputs: Output file names relative to out_dir
            out_dir: Output directory
            results: Optional headline results (discrepancy, best k, ...)

        Returns:
            Path of the manifest
        """
        manifest = {
            "config": config,
            "versions": ReportWriter.versions(),
            "outputs": sorted(outputs),
            "results": results or {},
        }
        path = pathlib.Path(out_dir) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as f:
            json.dump(_jsonable(manifest), f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    @staticmethod
    def _build_header(title: str) -> list[str]:
        return [
            f"# {title}",
            "",
            f"**Generated:** {datetime.now(timezone.utc).strftime('%Y-%m-%d %H:%M:%S UTC')}",
            "",
        ]

    @staticmethod
    def _build_metadata_section(table: TuningTable) -> list[str]:
        lines = []
        for key in sorted(table.metadata):
            value = table.metadata[key]
            if isinstance(value, (list, tuple)) and len(value) > 12:
                value = f"{len(value)} values from {value[0]} to {value[-1]}"
            lines.append(f"- **{key}:** `{value}`")
        lines.append("")
        return lines

    @staticmethod
    def _build_table_section(table: TuningTable) -> list[str]:
        lines = [
            "| k | acceptance | SE | mean moved | normalised | theoretical |",
            "|---|---|---|---|---|---|",
        ]
        best_k = table.argmax.k
        for row in table.rows:
            marker = " **(best)**" if row.k == best_k else ""
            lines.append(
                f"| {row.k}{marker} | {_format(row.acceptance)} | {_format(row.mc_se)} | {_format(row.mean_moved)} "
                f"| {_format(row.normalized_efficiency)} | {_format(row.theoretical_efficiency)} |"
            )
        lines.append("")
        return lines

    @staticmethod
    def _build_selection_section(table: TuningTable) -> list[str]:
        best = table.argmax
        nearest = k_nearest_acceptance(table)
        fraction = nearest.mean_moved / best.mean_moved if best.mean_moved > 0 else math.nan
        return [
            "## Selection",
            "",
            f"- Best k: {best.k} (acceptance {_format(best.acceptance)})",
            f"- k nearest {OPTIMAL_ACCEPTANCE:.1%} acceptance: {nearest.k} "
            f"(acceptance {_format(nearest.acceptance)}, {_format(fraction)} of the best mean moved)",
            "",
        ]

    @staticmethod
    def write_markdown_summary(tables: dict[str, TuningTable], out_dir: str, title: str) -> pathlib.Path:
        """
        Write summary.md with one section per tuning table.

        Args:
            tables: Tables keyed by section name
            out_dir: Output directory
            title: Report title

        Returns:
            Path of the summary
        """
        lines = ReportWriter._build_header(title)
        for name, table in tables.items():
            lines.extend([f"## {name}", ""])
            lines.extend(ReportWriter._build_metadata_section(table))
            lines.extend(ReportWriter._build_table_section(table))
            lines.extend(ReportWriter._build_selection_section(table))

        path = pathlib.Path(out_dir) / SUMMARY_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as f:
            f.write("\n".join(lines))
        return path

    @staticmethod
    def print_summary(name: str, table: TuningTable) -> None:
        """Print the headline numbers of a tuning table to the console."""
        best = table.argmax
        nearest = k_nearest_acceptance(table)
        print("\n" + "=" * 60)
        print(f"{name.upper()} SUMMARY")
        print("=" * 60)
        print(f"Grid points: {len(table)} (k = {table.k_values[0]}..{table.k_values[-1]})")
        print(f"Best k: {best.k}  acceptance {best.acceptance:.3f}  mean moved {best.mean_moved:.3f}")
        print(f"k nearest {OPTIMAL_ACCEPTANCE:.1%}: {nearest.k}  acceptance {nearest.acceptance:.3f}")
        print("=" * 60)
