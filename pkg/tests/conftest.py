import math
from pathlib import Path

import numpy as np
import pytest

from netresonance.graph import Graph, edge_laplacian, laplacian, load_graph, spectral_decomposition

DATA = Path(__file__).parent / "data"


def triangle_graph() -> Graph:
    return load_graph((DATA / "tri.txt").read_text())


def path3_graph() -> Graph:
    return load_graph((DATA / "path3.txt").read_text())


def sqrt2_2_graph() -> Graph:
    """Triangle with natural frequencies {sqrt(2), 2} (eigenvalues 0, 2, 4)."""
    return Graph(3, ((0, 1, 2.0 / 3.0), (1, 2, 2.0 / 3.0), (0, 2, 5.0 / 3.0)))


@pytest.fixture
def triangle():
    L = laplacian(triangle_graph())
    return L, spectral_decomposition(L), edge_laplacian(3, 0, 1)


@pytest.fixture
def path3():
    L = laplacian(path3_graph())
    return L, spectral_decomposition(L)


@pytest.fixture
def sqrt2_2():
    L = laplacian(sqrt2_2_graph())
    s = spectral_decomposition(L)
    np.testing.assert_allclose(s.eigenvalues, [0.0, 2.0, 4.0], atol=1e-12)
    return L, s


SQRT3 = math.sqrt(3.0)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
