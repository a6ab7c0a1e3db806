import numpy as np
import pytest

from csa_floor.distributions import DegreeDistribution, parse_distribution


@pytest.fixture
def ref_dist() -> DegreeDistribution:
    return parse_distribution("2:0.25,3:0.6,8:0.15")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
