import numpy as np
import pytest

from topo_slepians.complex import build_complex

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def T3():
    """Filled triangle, edges (e12, e13, e23)."""
    return build_complex(3, [(0, 1), (0, 2), (1, 2)], [(0, 1, 2)])


@pytest.fixture
def H3():
    """Hollow triangle."""
    return build_complex(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def two_triangles():
    """Two filled triangles glued along e23 (V=4, E=5, T=2)."""
    return build_complex(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], [(0, 1, 2), (1, 2, 3)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
