"""Deformed Laplacian and its classical special cases.

For a graph with (mode-appropriate) adjacency ``A`` and degree matrix ``D``
the deformed Laplacian is the quadratic matrix polynomial

    L_DF(r) = (D - I) r**2 - A r + I

It reduces to ``D - A`` at ``r = 1``, to ``D + A`` at ``r = -1`` for
nonnegative weights, and to the signed Laplacian at ``r = 1`` for signed
weights.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InvalidParams, WrongMode
from .graph_core import Graph, degrees

__all__ = [
    "OperatorMatrix",
    "deformed_laplacian",
    "combinatorial_laplacian",
    "signless_laplacian",
    "signed_laplacian",
    "quadratic_form",
    "is_psd",
    "PSD_TOL",
]

PSD_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense symmetric operator, optionally tagged with the ``r`` it was built at."""

    entries: np.ndarray
    r_value: Optional[float] = None

    def __post_init__(self):
        m = np.array(self.entries, dtype=float, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _as_matrix(m):
    return m.entries if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=float)


def deformed_laplacian(g: Graph, r: float) -> OperatorMatrix:
    """``(D - I) r^2 - A r + I`` with absolute-value degrees for signed graphs."""
    r = float(r)
    if not np.isfinite(r):
        raise InvalidParams("r must be finite")
    n = g.n_nodes
    # diagonal and off-diagonal parts are filled separately; both are symmetric by construction
    m = -r * g.weights
    m[np.diag_indices(n)] = (degrees(g) - 1.0) * r * r + 1.0
    return OperatorMatrix(m, r)


def combinatorial_laplacian(g: Graph) -> OperatorMatrix:
    if g.signed:
        raise WrongMode("combinatorial Laplacian requires a nonnegative graph")
    return OperatorMatrix(np.diag(degrees(g)) - g.weights)


def signless_laplacian(g: Graph) -> OperatorMatrix:
    if g.signed:
        raise WrongMode("signless Laplacian requires a nonnegative graph")
    return OperatorMatrix(np.diag(degrees(g)) + g.weights)


def signed_laplacian(g: Graph) -> OperatorMatrix:
    if not g.signed:
        raise WrongMode("signed Laplacian requires a signed graph")
    return OperatorMatrix(np.diag(degrees(g)) - g.weights)


def quadratic_form(m, x) -> float:
    """Quadratic total variation ``x^T M x``.

    For ``M = D - A`` this equals ``1/2 sum_ij a_ij (x_i - x_j)^2``.
    """
    mat = _as_matrix(m)
    x = np.asarray(x, dtype=float)
    if x.shape != (mat.shape[0],):
        raise DimensionMismatch(f"signal of shape {x.shape} does not match operator of size {mat.shape[0]}")
    return float(x @ mat @ x)


def is_psd(m, tol: float = PSD_TOL) -> bool:
    """True iff the smallest eigenvalue is >= ``-tol * max(1, max|entry|)``."""
    if tol < 0:
        raise InvalidParams("tol must be nonnegative")
    mat = _as_matrix(m)
    lam_min = np.linalg.eigvalsh(mat)[0]
    scale = max(1.0, float(np.abs(mat).max(initial=0.0)))
    return bool(lam_min >= -tol * scale)
