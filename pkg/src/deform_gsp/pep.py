"""Polynomial eigenvalue problem ``det(L_DF(lam)) = 0`` and structural spectral checks.

``L_DF(lam) = (D - I) lam^2 - A lam + I`` is comonic (``L_DF(0) = I``), so its
reversal ``rev(mu) = mu^2 I - A mu + (D - I)`` is monic and has the companion
linearization ``[[0, I], [-(D - I), A]]``.  Finite eigenvalues are
``lam = 1 / mu`` for the nonzero companion eigenvalues; the zero eigenvalue of
the companion carries the infinite eigenvalues.

Zero eigenvalues of the companion often sit in long Jordan blocks (every
degree-1 vertex starts a chain), and a dense eigensolver smears them to
``eps**(1/k)``.  :func:`pep_spectrum` therefore peels the zero eigenvalue off
with an orthogonal staircase reduction (repeated null-space compression with
SVD rank decisions) before calling the eigensolver on what remains.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceFailure, InvalidParams
from .graph_core import (
    Graph,
    balanced_component_count,
    bipartite_component_count,
    connected_components,
    degrees,
)
from .laplacian_ops import deformed_laplacian

__all__ = [
    "PepSpectrum",
    "StructureReport",
    "companion_matrix",
    "pep_spectrum",
    "kernel_dim",
    "structure_report",
    "ZERO_TOL",
]

ZERO_TOL = 1e-8
CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class PepSpectrum:
    finite_eigenvalues: np.ndarray
    infinite_multiplicity: int
    infinite_geometric: int

    def to_json(self):
        return json.dumps({
            "finite": [[float(z.real), float(z.imag)] for z in self.finite_eigenvalues],
            "infinite_algebraic": int(self.infinite_multiplicity),
            "infinite_geometric": int(self.infinite_geometric),
        })

    @property
    def max_finite_modulus(self):
        if len(self.finite_eigenvalues) == 0:
            return 0.0
        return float(np.abs(self.finite_eigenvalues).max())


@dataclass(frozen=True)
class StructureReport:
    has_one: bool
    one_multiplicity: int
    has_minus_one: bool
    minus_one_multiplicity: int
    has_zero: bool
    bipartite_components: int
    balanced_components: int
    connected_components: int
    max_finite_modulus: float
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "has_one": self.has_one,
            "one_multiplicity": self.one_multiplicity,
            "has_minus_one": self.has_minus_one,
            "minus_one_multiplicity": self.minus_one_multiplicity,
            "has_zero": self.has_zero,
            "bipartite_components": self.bipartite_components,
            "balanced_components": self.balanced_components,
            "connected_components": self.connected_components,
            "max_finite_modulus": self.max_finite_modulus,
        }


def companion_matrix(g: Graph) -> np.ndarray:
    """``2N x 2N`` companion ``[[0, I], [-(D - I), A]]`` of the reversal polynomial."""
    n = g.n_nodes
    c = np.zeros((2 * n, 2 * n))
    c[:n, n:] = np.eye(n)
    c[n:, :n] = -(np.diag(degrees(g)) - np.eye(n))
    c[n:, n:] = g.weights
    return c


def _deflate_zero(c, tol):
    """Split off the zero eigenvalue of ``c`` by orthogonal null-space compression.

    Returns ``(algebraic, geometric, rest)`` where ``rest`` is a square matrix
    holding every remaining eigenvalue of ``c``.
    """
    algebraic = 0
    geometric = None
    while c.shape[0]:
        try:
            _, sv, vt = np.linalg.svd(c)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(str(exc)) from exc
        cutoff = tol * max(1.0, sv[0])
        k = int(np.count_nonzero(sv <= cutoff))
        if geometric is None:
            geometric = k
        if k == 0:
            break
        algebraic += k
        # rows of vt past the rank span the complement of the null space
        keep = vt[: c.shape[0] - k].T
        c = keep.T @ c @ keep
    return algebraic, geometric or 0, c


def _merge_clusters(z, tol):
    """Replace each tight cluster of eigenvalues by its mean.

    A defective eigenvalue with a Jordan block of size ``k`` comes back from
    the eigensolver as ``k`` points spread by about ``eps**(1/k)``; their mean
    is accurate to working precision.
    """
    z = np.asarray(z, dtype=complex).copy()
    n = len(z)
    if n < 2:
        return z
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    close = np.abs(z[:, None] - z[None, :]) <= tol * np.maximum(1.0, np.abs(z))[:, None]
    for i, j in zip(*np.nonzero(np.triu(close, 1))):
        parent[find(i)] = find(j)
    roots = np.array([find(i) for i in range(n)])
    for r in np.unique(roots):
        members = roots == r
        if members.sum() > 1:
            z[members] = z[members].mean()
    return z


def _sort_complex(z):
    z = np.asarray(z, dtype=complex)
    order = np.lexsort((np.round(z.imag, 12), np.round(z.real, 12)))
    return z[order]


def pep_spectrum(g: Graph, zero_tol: float = ZERO_TOL, method: str = "staircase") -> PepSpectrum:
    """All eigenvalues of ``L_DF``: finite ones plus infinite multiplicities.

    ``method="staircase"`` (default) deflates the zero companion eigenvalue
    before the dense eigensolve.  ``method="direct"`` runs the eigensolver on
    the full companion and treats ``|mu| <= zero_tol`` as infinite; it is kept
    for comparison and misclassifies graphs with long Jordan chains at infinity.
    Finite eigenvalues closer than ``1e-6`` (relative) are reported as one
    repeated value, the mean of the cluster.
    """
    if zero_tol <= 0:
        raise InvalidParams("zero_tol must be positive")
    c = companion_matrix(g)
    if method == "staircase":
        algebraic, _, rest = _deflate_zero(c, zero_tol)
    elif method == "direct":
        algebraic, rest = 0, c
    else:
        raise InvalidParams(f"unknown method {method!r}")
    try:
        mu = np.linalg.eigvals(rest) if rest.shape[0] else np.zeros(0, dtype=complex)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    tiny = np.abs(mu) <= zero_tol
    algebraic += int(np.count_nonzero(tiny))
    lam = _merge_clusters(1.0 / mu[~tiny], CLUSTER_TOL)
    lam = np.where(np.abs(lam.imag) <= zero_tol * np.abs(lam), lam.real + 0j, lam)
    geometric = int(np.count_nonzero(np.abs(degrees(g) - 1.0) <= zero_tol))
    return PepSpectrum(_sort_complex(lam), algebraic, geometric)


def kernel_dim(m, tol: float = ZERO_TOL) -> int:
    """Numerical nullity: singular values at most ``tol * sigma_max``."""
    a = np.asarray(getattr(m, "entries", m), dtype=float)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0:
        return 0
    return int(np.count_nonzero(sv <= tol * sv[0]))


def structure_report(g: Graph, tol: float = ZERO_TOL) -> StructureReport:
    """Eigenvalues ``1``, ``-1`` and ``0`` of ``L_DF`` read off as graph structure.

    The multiplicity of ``1`` is the nullity of ``L_DF(1)`` (connected or
    balanced components), that of ``-1`` the nullity of ``L_DF(-1)``
    (bipartite components, nonnegative graphs).
    """
    if tol <= 0:
        raise InvalidParams("tol must be positive")
    one = kernel_dim(deformed_laplacian(g, 1.0), tol)
    minus_one = kernel_dim(deformed_laplacian(g, -1.0), tol)
    has_zero = abs(np.linalg.det(deformed_laplacian(g, 0.0).entries) - 1.0) > tol
    count, _ = connected_components(g)
    unsigned = Graph(np.abs(g.weights))
    pep = pep_spectrum(g, tol)
    return StructureReport(
        has_one=one > 0,
        one_multiplicity=one,
        has_minus_one=minus_one > 0,
        minus_one_multiplicity=minus_one,
        has_zero=bool(has_zero),
        bipartite_components=bipartite_component_count(unsigned),
        balanced_components=balanced_component_count(g) if g.signed else count,
        connected_components=count,
        max_finite_modulus=pep.max_finite_modulus,
    )
