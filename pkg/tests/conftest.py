import numpy as np
import pytest

from blendifs import load_config


@pytest.fixture(scope="session")
def two_cfg():
    return load_config("sierpinski-maple")


@pytest.fixture(scope="session")
def three_cfg():
    return load_config("sierpinski-maple-r3")


@pytest.fixture(scope="session")
def two_system(two_cfg):
    return two_cfg.blend_system()


@pytest.fixture(scope="session")
def three_system(three_cfg):
    return three_cfg.blend_system()


@pytest.fixture(scope="session")
def sierpinski(two_system):
    return two_system.systems[0]


@pytest.fixture(scope="session")
def maple(two_system):
    return two_system.systems[1]


@pytest.fixture(scope="session")
def pinwheel(three_system):
    return three_system.systems[2]


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
