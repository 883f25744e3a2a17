import itertools

import numpy as np
import pytest

from deform_gsp.graph_core import Graph, Mode


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j, 1.0) for i, j in itertools.combinations(range(n), 2)])


def random_graph(rng, n, p=0.4, weighted=False, signed=False, neg_p=0.5):
    a = np.triu(rng.random((n, n)) < p, k=1).astype(float)
    if weighted:
        a *= rng.uniform(0.2, 2.0, size=(n, n))
    if signed:
        a *= np.where(rng.random((n, n)) < neg_p, -1.0, 1.0)
    a = a + a.T
    return Graph(a, Mode.SIGNED if signed else Mode.NONNEGATIVE)


def random_integer_graph(rng, n, p=0.4, wmax=3):
    a = np.triu((rng.random((n, n)) < p) * rng.integers(1, wmax + 1, size=(n, n)), k=1).astype(float)
    return Graph(a + a.T)


def brute_force_coloring(g, signs):
    """First +-1 labeling with l_i l_j signs_ij > 0 on every edge, or None."""
    n = g.n_nodes
    iu, ju = np.nonzero(np.triu(g.weights != 0, k=1))
    for bits in itertools.product((1, -1), repeat=n):
        l = np.array(bits)
        if np.all(l[iu] * l[ju] * signs[iu, ju] > 0):
            return l
    return None


@pytest.fixture
def p2():
    return path_graph(2)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def signed_p2():
    return Graph.from_edges(2, [(0, 1, -1.0)], Mode.SIGNED)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
