import numpy as np
import pytest

from holonomic.path import make_cap_loop, make_hadamard_path


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def hadamard_path():
    return make_hadamard_path()


@pytest.fixture(scope="session", params=[0.4, np.pi / 2, 2.3])
def loop(request):
    return make_cap_loop(request.param)
