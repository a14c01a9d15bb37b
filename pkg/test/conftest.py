import numpy as np
import pytest

from tss.predictor import GaussianDataSpec, GaussianOracle
from tss.schedule import build_sawtooth_plan, build_schedule


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def schedule():
    return build_schedule(1000)


@pytest.fixture
def small_schedule():
    return build_schedule(50)


@pytest.fixture
def k2_plan():
    """DDIM-K2 over the default 1000-step schedule."""
    _, plan = build_sawtooth_plan(100, 2, 1000)
    return plan


@pytest.fixture
def ar1_oracle():
    return GaussianOracle(GaussianDataSpec.ar1(1, 8, rho=0.9))
