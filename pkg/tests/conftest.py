import numpy as np
import pytest

from gpbreather import analytic


@pytest.fixture(scope="session")
def free_spec():
    return analytic.scenario_preset("free")


@pytest.fixture(scope="session")
def harmonic_i_spec():
    return analytic.scenario_preset("harmonic_i")


@pytest.fixture(scope="session")
def harmonic_ii_spec():
    return analytic.scenario_preset("harmonic_ii")


@pytest.fixture(scope="session")
def linear_spec():
    return analytic.scenario_preset("linear")


@pytest.fixture(scope="session")
def all_presets(free_spec, harmonic_i_spec, harmonic_ii_spec, linear_spec):
    return {
        "free": free_spec,
        "harmonic_i": harmonic_i_spec,
        "harmonic_ii": harmonic_ii_spec,
        "linear": linear_spec,
    }


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
