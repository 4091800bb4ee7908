"""Tests for tuning-table summaries and selection rules."""

import math

import pytest

from indep_sampler.diagnostics.tuning import efficiency_fraction, is_monotone, k_nearest_acceptance, tuning_summary
from indep_sampler.records import TuningRow


def _rows(pairs):
    return [TuningRow.from_acceptance(k, acceptance) for k, acceptance in pairs]


class TestTuningSummary:
    """Test normalisation and theoretical efficiencies."""

    def test_normalised_to_best(self):
        """Test the best row has normalised efficiency 1."""
        table = tuning_summary(_rows([(1, 0.9), (10, 0.3), (40, 0.05)]), metadata={"pair": "t:5"})
        assert table.argmax.k == 10
        assert table.argmax.normalized_efficiency == 1.0
        assert table.rows[0].normalized_efficiency == pytest.approx(0.9 / 3.0)
        assert table.metadata == {"pair": "t:5"}

    def test_theoretical_efficiency_undefined_at_edges(self):
        """Test acceptance 0 or 1 leaves the theoretical efficiency NaN."""
        table = tuning_summary(_rows([(1, 1.0), (2, 0.234)]))
        assert math.isnan(table.rows[0].theoretical_efficiency)
        assert table.rows[1].theoretical_efficiency == pytest.approx(1.0, abs=1e-3)

    def test_empty(self):
        """Test empty input is rejected."""
        with pytest.raises(ValueError, match="at least one row"):
            tuning_summary([])


class TestSelection:
    """Test acceptance-targeted selection."""

    def test_nearest_acceptance(self):
        """Test the row nearest 0.234 is chosen."""
        table = tuning_summary(_rows([(5, 0.5), (20, 0.25), (40, 0.1)]))
        assert k_nearest_acceptance(table).k == 20

    def test_ties_choose_smallest_k(self):
        """Test equal distances pick the smaller k."""
        table = tuning_summary(_rows([(30, 0.3), (10, 0.5), (50, 0.1)]))
        assert k_nearest_acceptance(table, target=0.2).k == 30

    def test_efficiency_fraction(self):
        """Test the fraction of the best mean moved."""
        table = tuning_summary(_rows([(2, 0.5), (4, 0.5)]))
        assert efficiency_fraction(table, table.rows[0]) == pytest.approx(0.5)


class TestIsMonotone:
    """Test monotonicity up to noise."""

    def test_decreasing_with_noise(self):
        """Test small upticks within tolerance are allowed."""
        assert is_monotone([0.9, 0.5, 0.51, 0.2], [0.01] * 4)
        assert not is_monotone([0.9, 0.5, 0.7], [0.01] * 3)

    def test_increasing(self):
        """Test the increasing direction."""
        assert is_monotone([1, 2, 3], [0, 0, 0], increasing=True)
        assert not is_monotone([1, 3, 2], [0, 0, 0], increasing=True)
