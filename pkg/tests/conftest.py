import numpy as np
import pytest

from herzmorrey.exponent import (
    bump_exponent,
    constant_exponent,
    decay_exponent,
    piecewise_exponent,
)
from herzmorrey.sampling import Grid


@pytest.fixture(scope="session")
def grid1k():
    """Small 1-d grid for unit tests (h = 1/64)."""
    return Grid(dimension=1, radius=8.0, points_per_axis=1024)


@pytest.fixture(scope="session")
def grid4k():
    """Default 1-d desk-scale grid (h = 1/256)."""
    return Grid(dimension=1, radius=8.0, points_per_axis=4096)


@pytest.fixture(scope="session")
def grid2d():
    """Small 2-d grid for unit tests."""
    return Grid(dimension=2, radius=8.0, points_per_axis=128)


@pytest.fixture(scope="session")
def families():
    """The four exponent families at the default domain radius."""
    return {
        "constant": constant_exponent(2.0),
        "piecewise": piecewise_exponent(2.0, 3.0),
        "decay": decay_exponent(2.0, 1.0, 8.0, 1),
        "bump": bump_exponent(2.0, 1.0, 2.0, 8.0, 1),
    }


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
