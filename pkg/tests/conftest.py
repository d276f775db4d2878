import numpy as np
import pytest

from curveflow.generators import circle, perturbed_circle, rounded_square


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def unit_circle():
    return circle(256)


@pytest.fixture(scope="session")
def wobbly():
    return perturbed_circle(256, seed=7)


@pytest.fixture(scope="session")
def square_ish():
    return rounded_square(256)
