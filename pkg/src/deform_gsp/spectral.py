"""Deterministic symmetric eigendecomposition and the deformed graph Fourier transform."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, InvalidK, ZeroReference
from .laplacian_ops import OperatorMatrix

__all__ = [
    "SpectralBasis",
    "SparseCoefficients",
    "eig_sym",
    "dgft",
    "idgft",
    "topk_project",
    "nmse",
    "SIGN_EPS",
]

SIGN_EPS = 1e-12
# magnitudes equal to this relative precision count as ties in top-K selection
TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Ascending eigenvalues with orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    r_value: Optional[float] = None

    @property
    def n(self):
        return self.eigenvalues.shape[0]


@dataclass(frozen=True, eq=False)
class SparseCoefficients:
    """K-sparse spectral coefficients: ``values[k]`` pairs with column ``support[k]``."""

    support: np.ndarray
    values: np.ndarray
    full_dim: int

    def __post_init__(self):
        support = np.asarray(self.support, dtype=int)
        values = np.asarray(self.values, dtype=float)
        if support.shape != values.shape or support.ndim != 1:
            raise DimensionMismatch("support and values must be 1-D of equal length")
        if len(support) > self.full_dim or len(np.unique(support)) != len(support):
            raise InvalidK("support indices must be distinct and at most full_dim")
        if len(support) and (support.min() < 0 or support.max() >= self.full_dim):
            raise InvalidK("support index out of range")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    @property
    def k(self):
        return len(self.support)

    def dense(self):
        s = np.zeros(self.full_dim)
        s[self.support] = self.values
        return s


def eig_sym(m) -> SpectralBasis:
    """Eigendecomposition of a symmetric matrix with a reproducible sign convention.

    Eigenvalues are sorted ascending (stable, so solver order breaks ties) and
    each eigenvector is flipped so that its first entry with magnitude above
    ``SIGN_EPS`` is positive.
    """
    r_value = m.r_value if isinstance(m, OperatorMatrix) else None
    a = np.asarray(m.entries if isinstance(m, OperatorMatrix) else m, dtype=float)
    try:
        lam, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(lam, kind="stable")
    lam, u = lam[order], u[:, order]
    significant = np.abs(u) > SIGN_EPS
    first = np.argmax(significant, axis=0)
    pivot = u[first, np.arange(u.shape[1])]
    u = u * np.where(pivot < 0, -1.0, 1.0)
    lam.setflags(write=False)
    u.setflags(write=False)
    return SpectralBasis(lam, u, r_value)


def _check_dim(b, x, what):
    if x.shape[0] != b.n:
        raise DimensionMismatch(f"{what} has leading dimension {x.shape[0]}, basis has {b.n}")


def dgft(b: SpectralBasis, x):
    """Spectral coefficients ``U^T x`` (works column-wise on matrices)."""
    x = np.asarray(x, dtype=float)
    _check_dim(b, x, "signal")
    return b.eigenvectors.T @ x


def idgft(b: SpectralBasis, s):
    """Inverse transform ``U s``, or ``U_K s_K`` for sparse coefficients."""
    if isinstance(s, SparseCoefficients):
        if s.full_dim != b.n:
            raise DimensionMismatch(f"coefficients of dimension {s.full_dim} for basis of size {b.n}")
        return b.eigenvectors[:, s.support] @ s.values
    s = np.asarray(s, dtype=float)
    _check_dim(b, s, "coefficient vector")
    return b.eigenvectors @ s


def _topk_indices(coeffs, k):
    mag = np.abs(coeffs)
    scale = mag.max(initial=0.0)
    if scale > 0:
        # quantize so near-equal magnitudes tie and the stable sort favors the smaller index
        mag = np.round(mag / scale / TIE_RTOL) * TIE_RTOL
    order = np.argsort(-mag, kind="stable")
    return np.sort(order[:k])


def topk_project(b: SpectralBasis, x, k: int) -> SparseCoefficients:
    """Best K-term approximation of ``x`` in the basis (hard thresholding of ``U^T x``).

    Ties in magnitude go to the smaller index.  The support is returned sorted.
    """
    k = int(k)
    if not 1 <= k <= b.n:
        raise InvalidK(f"K={k} must lie in [1, {b.n}]")
    s = dgft(b, x)
    if s.ndim != 1:
        raise DimensionMismatch("topk_project expects a single signal vector")
    idx = _topk_indices(s, k)
    return SparseCoefficients(idx, s[idx], b.n)


def nmse(x_true, x_hat, mode="frobenius") -> float:
    """Normalized reconstruction error.

    ``mode="frobenius"`` gives ``||X - Xh||_F / ||X||_F``; ``mode="per_signal"``
    averages ``||x_i - xh_i||_2 / ||x_i||_2`` over the columns.
    """
    x_true = np.asarray(x_true, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    if x_true.shape != x_hat.shape:
        raise DimensionMismatch(f"shapes {x_true.shape} and {x_hat.shape} differ")
    if x_true.ndim == 1:
        x_true, x_hat = x_true[:, None], x_hat[:, None]
    mode = str(mode).lower().replace("-", "_")
    if mode == "frobenius":
        ref = np.linalg.norm(x_true)
        if ref == 0:
            raise ZeroReference("reference signal matrix is zero")
        return float(np.linalg.norm(x_true - x_hat) / ref)
    if mode in ("per_signal", "per_signal_mean", "persignalmean"):
        ref = np.linalg.norm(x_true, axis=0)
        if np.any(ref == 0):
            raise ZeroReference(f"reference signal {int(np.argmin(ref))} is zero")
        return float(np.mean(np.linalg.norm(x_true - x_hat, axis=0) / ref))
    raise ValueError(f"unknown NMSE mode {mode!r}")
