import math

import numpy as np
import pytest

from enclose3d.scenario import bundled_scenario
from enclose3d.simulate import run_scenario

D2R = math.pi / 180.0


@pytest.fixture(scope="session")
def st_result():
    """Full bundled ST run, shared across tests (deterministic)."""
    return run_scenario(bundled_scenario("st"))


@pytest.fixture(scope="session")
def mt_result():
    return run_scenario(bundled_scenario("mt"))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
