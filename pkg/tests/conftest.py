"""Shared pytest fixtures for all tests."""

import numpy as np
import pytest

from indep_sampler.densities import gaussian_pair, t_pair, uniform_pair
from indep_sampler.models.bdm import BdmPopulation, ClusterData
from indep_sampler.models.sir import EpidemicData


@pytest.fixture
def rng():
    """Fixed-seed generator so statistical assertions are reproducible."""
    return np.random.default_rng(20240101)


@pytest.fixture
def gaussian_12():
    """Gaussian pair with lambda = 1.2 (I = 0.0672)."""
    return gaussian_pair(1.2)


@pytest.fixture
def t_5():
    """Student-t(5) proposal for a standard Gaussian target."""
    return t_pair(5)


@pytest.fixture
def uniform_05():
    """U(0,1) target with U(0, 1.05) proposal."""
    return uniform_pair(0.05)


@pytest.fixture
def small_epidemic():
    """Six removals in a population of ten."""
    return EpidemicData(removal_times=np.array([1.0, 2.0, 2.5, 4.0, 5.5, 6.0]), population_size=10)


@pytest.fixture
def toy_population():
    """Successful population with type counts 3, 2, 1."""
    return BdmPopulation(type_counts=np.array([3, 2, 1]), total=6, events_used=8, outcome="success", born=7, died=1)


@pytest.fixture
def toy_clusters():
    """Observed clusters of sizes 2, 1, 1 (sample of four)."""
    return ClusterData(clusters=((2, 1), (1, 2)))


@pytest.fixture
def out_dir(tmp_path):
    """Output directory for CLI runs."""
    return tmp_path / "results"
