import numpy as np
import pytest

from voicelab.grids import GridParams, build_grid
from voicelab.groups import AFFINE, AFFINE_CIRCLE, LINE


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def line_grid():
    return build_grid(LINE)


@pytest.fixture(scope="session")
def affine_grid():
    return build_grid(AFFINE)


@pytest.fixture(scope="session")
def small_affine():
    """1024-node b-axis with the default scale axis."""
    return build_grid(AFFINE, GridParams.dyadic(n_b=1024))


@pytest.fixture(scope="session")
def small_circle():
    return build_grid(AFFINE_CIRCLE, GridParams.dyadic(n_b=512, n_a=32, per_octave=4))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
