"""Linear reaction-diffusion dynamics generated by the deformed Laplacian.

Each node evolves as

    dphi_i/dt = -eta * r * sum_j a_ij (phi_i - phi_j) + h_i
    h_i       = phi_i * ((1 - d_i) r^2 + d_i r - 1)

which at ``eta = 1`` is exactly ``dphi/dt = -L_DF(r) phi``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidParams, UnstableStepSize, WrongMode
from .graph_core import Graph, degrees
from .spectral import eig_sym

__all__ = ["DynamicsState", "reaction_term", "rhs", "generator", "simulate", "trajectory_array"]


@dataclass(frozen=True)
class DynamicsState:
    phi: np.ndarray
    time: float
    r: float
    eta: float = 1.0


def _check(g, phi):
    if g.signed:
        raise WrongMode("reaction-diffusion dynamics are defined for nonnegative graphs")
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (g.n_nodes,):
        raise DimensionMismatch(f"state of shape {phi.shape} for {g.n_nodes} nodes")
    return phi


def reaction_term(g: Graph, r: float, phi):
    """Degree-dependent local reaction ``h``."""
    phi = _check(g, phi)
    d = degrees(g)
    return phi * ((1.0 - d) * r * r + d * r - 1.0)


def rhs(g: Graph, r: float, phi, eta: float = 1.0):
    """Right-hand side assembled node by node from edge differences plus reaction."""
    phi = _check(g, phi)
    a = g.weights
    diffusion = -eta * r * np.sum(a * (phi[:, None] - phi[None, :]), axis=1)
    return diffusion + reaction_term(g, r, phi)


def generator(g: Graph, r: float, eta: float = 1.0):
    """Matrix ``M`` with ``rhs(phi) == -M phi``; equals ``L_DF(r)`` when ``eta = 1``."""
    if g.signed:
        raise WrongMode("reaction-diffusion dynamics are defined for nonnegative graphs")
    d = degrees(g)
    lap = np.diag(d) - g.weights
    return eta * r * lap - np.diag((1.0 - d) * r * r + d * r - 1.0)


def simulate(g: Graph, r: float, phi0, dt: float, steps: int, method: str = "exact",
             eta: float = 1.0):
    """Trajectory of ``steps + 1`` states at times ``0, dt, ..., steps * dt``.

    ``method="euler"`` is forward Euler and requires ``dt * lambda_max < 2``;
    ``method="exact"`` evaluates ``U exp(-Lambda t) U^T phi0``.
    """
    phi0 = _check(g, phi0)
    if not dt > 0:
        raise InvalidParams("dt must be positive")
    if steps < 0:
        raise InvalidParams("steps must be nonnegative")
    if eta <= 0:
        raise InvalidParams("eta must be positive")
    method = method.lower()
    if method in ("spectral_exact", "spectralexact"):
        method = "exact"
    m = generator(g, r, eta)
    basis = eig_sym(m)
    states = [DynamicsState(phi0.copy(), 0.0, float(r), float(eta))]
    if method == "euler":
        lam_max = float(basis.eigenvalues[-1])
        if dt * lam_max >= 2.0:
            raise UnstableStepSize(
                f"dt * lambda_max = {dt * lam_max:.6g} >= 2 (lambda_max = {lam_max:.6g}); "
                f"use dt < {2.0 / lam_max:.6g}")
        phi = phi0.copy()
        for k in range(1, steps + 1):
            phi = phi + dt * rhs(g, r, phi, eta)
            states.append(DynamicsState(phi, k * dt, float(r), float(eta)))
    elif method == "exact":
        u, lam = basis.eigenvectors, basis.eigenvalues
        s0 = u.T @ phi0
        for k in range(1, steps + 1):
            t = k * dt
            states.append(DynamicsState(u @ (np.exp(-lam * t) * s0), t, float(r), float(eta)))
    else:
        raise InvalidParams(f"unknown integration method {method!r}")
    return states


def trajectory_array(states):
    """Stack a trajectory as rows ``[t, phi_0, ..., phi_{N-1}]``."""
    return np.array([np.r_[s.time, s.phi] for s in states])
