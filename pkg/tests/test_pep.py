import json

import numpy as np
import pytest

from deform_gsp import graph_core as gc
from deform_gsp.errors import InvalidParams
from deform_gsp.graph_core import Graph
from deform_gsp.laplacian_ops import deformed_laplacian, signless_laplacian
from deform_gsp.pep import companion_matrix, kernel_dim, pep_spectrum, structure_report

from conftest import complete_graph, path_graph, random_graph, random_integer_graph
from oracles import (
    balanced_components_brute,
    bipartite_components_brute,
    hausdorff,
    interpolation_roots,
)

W = np.exp(2j * np.pi / 3)


def test_companion_examples(p2, p3, k3):
    np.testing.assert_array_equal(companion_matrix(p2),
                                  [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 1, 0]])
    np.testing.assert_allclose(np.poly(companion_matrix(p3)), [1, 0, -1, 0, 0, 0, 0], atol=1e-12)
    expected = np.polymul(np.polymul([1, -1], [1, -1]), np.polymul([1, 1, 1], [1, 1, 1]))
    np.testing.assert_allclose(np.poly(companion_matrix(k3)), expected, atol=1e-10)


def test_pep_examples(p2, p3, k3):
    s = pep_spectrum(p2)
    np.testing.assert_allclose(s.finite_eigenvalues, [-1, 1], atol=1e-8)
    assert (s.infinite_multiplicity, s.infinite_geometric) == (2, 2)
    s = pep_spectrum(p3)
    np.testing.assert_allclose(s.finite_eigenvalues, [-1, 1], atol=1e-8)
    assert (s.infinite_multiplicity, s.infinite_geometric) == (4, 2)
    s = pep_spectrum(k3)
    assert s.infinite_multiplicity == 0
    assert hausdorff(s.finite_eigenvalues, [1, 1, W, W, W.conjugate(), W.conjugate()]) <= 1e-7
    assert len(s.finite_eigenvalues) == 6


def test_pep_json(p2):
    data = json.loads(pep_spectrum(p2).to_json())
    assert data["infinite_algebraic"] == 2
    assert sorted(round(re) for re, _ in data["finite"]) == [-1, 1]


def test_pep_rejects_bad_tol(p2):
    with pytest.raises(InvalidParams):
        pep_spectrum(p2, zero_tol=0)
    with pytest.raises(InvalidParams):
        pep_spectrum(p2, method="qz")


@pytest.mark.parametrize("n", [4, 5, 6, 8])
def test_long_paths_count_infinite_eigenvalues(n):
    # det(L_DF) of a path is 1 - lam^2, so 2N - 2 eigenvalues sit at infinity
    s = pep_spectrum(path_graph(n))
    assert s.infinite_multiplicity == 2 * n - 2
    np.testing.assert_allclose(s.finite_eigenvalues, [-1, 1], atol=1e-7)


def test_eigenvalue_count_invariant():
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(1, 12)), weighted=bool(rng.integers(2)))
        s = pep_spectrum(g)
        assert len(s.finite_eigenvalues) + s.infinite_multiplicity == 2 * g.n_nodes
        assert s.infinite_geometric <= s.infinite_multiplicity


@pytest.mark.parametrize("seed", range(25))
def test_interpolation_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    g = random_integer_graph(rng, int(rng.integers(2, 7)), p=0.6, wmax=1 + seed % 3)
    roots, n_inf = interpolation_roots(g)
    s = pep_spectrum(g)
    assert s.infinite_multiplicity == n_inf
    assert len(s.finite_eigenvalues) == len(roots)
    assert hausdorff(s.finite_eigenvalues, roots) <= 1e-6


def test_staircase_beats_plain_threshold_on_paths():
    # documents why the deflation exists: the plain threshold misses chains at infinity
    g = path_graph(5)
    assert pep_spectrum(g).infinite_multiplicity == 8
    assert pep_spectrum(g, method="direct").infinite_multiplicity < 8


def test_structure_report_examples(p2, k3):
    r = structure_report(p2)
    assert (r.has_one, r.one_multiplicity, r.has_minus_one, r.minus_one_multiplicity) == (True, 1, True, 1)
    assert r.bipartite_components == 1 and not r.has_zero
    r = structure_report(k3)
    assert (r.has_one, r.one_multiplicity, r.has_minus_one) == (True, 1, False)
    assert r.max_finite_modulus == pytest.approx(1.0, abs=1e-7)
    g = gc.signed_balanced((10, 10), seed=0)
    r = structure_report(g)
    assert r.has_one and r.balanced_components == 1
    assert set(r.to_dict()) >= {"has_one", "balanced_components", "max_finite_modulus"}
    with pytest.raises(InvalidParams):
        structure_report(p2, tol=0)


def _graphs(seed, count=100, signed=False, nmax=12):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, nmax + 1))
        yield random_graph(rng, n, p=rng.uniform(0.1, 0.6), weighted=bool(rng.integers(2)),
                           signed=signed, neg_p=rng.uniform(0, 0.5))


def test_zero_is_never_an_eigenvalue():
    for g in _graphs(21):
        assert np.array_equal(deformed_laplacian(g, 0.0).entries, np.eye(g.n_nodes))
        s = pep_spectrum(g)
        assert np.all(np.abs(s.finite_eigenvalues) > 1e-6)


def test_one_multiplicity_equals_components():
    for g in _graphs(22):
        assert kernel_dim(deformed_laplacian(g, 1.0)) == gc.connected_components(g)[0]


def test_infinite_eigenvalues_and_unit_degrees():
    rng = np.random.default_rng(23)
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(2, 13)), p=rng.uniform(0.1, 0.5))
        s = pep_spectrum(g)
        ones = int(np.count_nonzero(gc.degrees(g) == 1))
        assert s.infinite_geometric == ones
        assert (s.infinite_multiplicity > 0) == (ones > 0)
    for g in _graphs(24, count=30):
        ones = int(np.count_nonzero(np.abs(gc.degrees(g) - 1) <= 1e-8))
        assert pep_spectrum(g).infinite_geometric == ones


def test_minus_one_counts_bipartite_components():
    for g in _graphs(25):
        k = kernel_dim(deformed_laplacian(g, -1.0))
        b = bipartite_components_brute(g)
        assert k == b
        assert (k > 0) == (b > 0)
        assert gc.bipartite_component_count(g) == b


def test_signed_one_counts_balanced_components():
    for g in _graphs(26, signed=True):
        b = balanced_components_brute(g)
        assert kernel_dim(deformed_laplacian(g, 1.0)) == b
        assert structure_report(g).balanced_components == b


def test_signless_smallest_eigenvalue_and_bipartiteness():
    for g in _graphs(27):
        lam = np.linalg.eigvalsh(signless_laplacian(g).entries)
        b = bipartite_components_brute(g)
        assert (abs(lam[0]) <= 1e-8) == (b > 0)
        assert int(np.count_nonzero(np.abs(lam) <= 1e-8)) == b


def test_binary_graph_moduli_bounded():
    rng = np.random.default_rng(28)
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(2, 13)), p=rng.uniform(0.1, 0.8))
        assert pep_spectrum(g).max_finite_modulus <= 1 + 1e-6


def test_karate_report():
    r = structure_report(gc.karate())
    assert r.one_multiplicity == 1 and r.connected_components == 1
    assert r.max_finite_modulus <= 1 + 1e-6


def test_defective_eigenvalue_reported_once_per_multiplicity(k3):
    # lam = 1 is a double eigenvalue of K3 with a one-dimensional eigenspace
    finite = pep_spectrum(k3).finite_eigenvalues
    near_one = finite[np.abs(finite - 1) < 1e-3]
    assert len(near_one) == 2
    assert np.abs(near_one - 1).max() <= 1e-12
