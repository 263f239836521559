import numpy as np
import pytest
from hypothesis import settings

from hurwitz_frobenius import CoveringG0, CoveringG1

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def anchor():
    """lambda = z^3 - 3z: critical points +-1, critical values -+2."""
    return CoveringG0.polynomial([-3, 0])


@pytest.fixture
def torus2():
    return CoveringG1(1j, 0.0, (1.0,))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
