"""Tests for run manifests and summaries."""

import json
import math

import numpy as np

from indep_sampler import __version__
from indep_sampler.diagnostics.report import MANIFEST_NAME, SUMMARY_NAME, ReportWriter
from indep_sampler.diagnostics.tuning import tuning_summary
from indep_sampler.records import TuningRow


def _table():
    rows = [TuningRow.from_acceptance(k, a) for k, a in [(1, 0.9), (10, 0.25), (40, 0.02)]]
    return tuning_summary(rows, {"pair": "gaussian:1.2", "k_grid": list(range(1, 20))})


class TestManifest:
    """Test manifest.json."""

    def test_contents(self, tmp_path):
        """Test config, versions, sorted outputs and results."""
        path = ReportWriter.write_manifest(
            {"subcommand": "theory", "seed": 1},
            ["tuning.csv", "manifest.json"],
            str(tmp_path),
            {"discrepancy": np.float64(0.5), "optimal_k": np.int64(42), "limit": math.inf},
        )
        assert path.name == MANIFEST_NAME
        manifest = json.loads(path.read_text())
        assert manifest["config"]["subcommand"] == "theory"
        assert manifest["versions"]["indep_sampler"] == __version__
        assert manifest["outputs"] == ["manifest.json", "tuning.csv"]
        assert manifest["results"] == {"discrepancy": 0.5, "limit": "inf", "optimal_k": 42}

    def test_identical_runs_identical_manifest(self, tmp_path):
        """Test the manifest carries nothing run-specific."""
        first = ReportWriter.write_manifest({"seed": 3}, ["a.csv"], str(tmp_path / "one")).read_bytes()
        second = ReportWriter.write_manifest({"seed": 3}, ["a.csv"], str(tmp_path / "two")).read_bytes()
        assert first == second


class TestSummaries:
    """Test the Markdown and console summaries."""

    def test_markdown(self, tmp_path):
        """Test sections, the best-row marker and the selection lines."""
        path = ReportWriter.write_markdown_summary({"gaussian:1.2": _table()}, str(tmp_path), "Product sweep")
        assert path.name == SUMMARY_NAME
        text = path.read_text()
        assert text.startswith("# Product sweep")
        assert "## gaussian:1.2" in text
        assert "| 10 **(best)** |" in text
        assert "- Best k: 10" in text
        assert "k nearest 23.4% acceptance: 10" in text
        assert "19 values from 1 to 19" in text

    def test_print_summary(self, capsys):
        """Test the console banner and headline numbers."""
        ReportWriter.print_summary("product", _table())
        out = capsys.readouterr().out
        assert "PRODUCT SUMMARY" in out
        assert "Best k: 10" in out
        assert "Grid points: 3 (k = 1..40)" in out
