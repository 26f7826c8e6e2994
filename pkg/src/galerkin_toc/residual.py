"""Galerkin projection of the PMP boundary value problem onto the P1 basis.

The decision vector is laid out as::

    [x_0, y_0, th_0, x_1, y_1, th_1, ..., lam_x, lam_y, lt_0, ..., lt_{N-1}, T]

i.e. ``3N`` state coefficients (node-major), the two constant costates, ``N``
nodal values of lambda_theta and the free final time: ``4N + 3`` scalars.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .dubins import ProblemParams, hamiltonian_residual
from .mesh import Mesh, QuadratureRule


@dataclass(frozen=True)
class Unknowns:
    alpha: np.ndarray  # (N, 3) nodal x, y, theta
    lambda_xy: tuple[float, float]
    beta_theta: np.ndarray  # (N,) nodal lambda_theta
    T: float

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float)
        beta = np.array(self.beta_theta, dtype=float)
        if alpha.ndim != 2 or alpha.shape[1] != 3:
            raise ValueError(f"alpha must have shape (N, 3), got {alpha.shape}")
        if beta.shape != (alpha.shape[0],):
            raise ValueError(f"beta_theta must have shape ({alpha.shape[0]},), got {beta.shape}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T!r}")
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta_theta", beta)
        object.__setattr__(self, "lambda_xy", (float(self.lambda_xy[0]), float(self.lambda_xy[1])))
        object.__setattr__(self, "T", float(self.T))

    @property
    def n_nodes(self) -> int:
        return self.alpha.shape[0]

    @property
    def size(self) -> int:
        return 4 * self.n_nodes + 3

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.alpha.ravel(), self.lambda_xy, self.beta_theta, [self.T]])

    @classmethod
    def from_vector(cls, z) -> "Unknowns":
        z = np.asarray(z, dtype=float)
        if (z.size - 3) % 4:
            raise ValueError(f"vector length {z.size} is not of the form 4N + 3")
        N = (z.size - 3) // 4
        return cls(
            alpha=z[: 3 * N].reshape(N, 3),
            lambda_xy=(z[3 * N], z[3 * N + 1]),
            beta_theta=z[3 * N + 2 : 4 * N + 2],
            T=z[4 * N + 2],
        )


def boundary_indices(n_nodes: int) -> np.ndarray:
    """Vector indices of the pinned state coefficients at the first and last node."""
    last = 3 * (n_nodes - 1)
    return np.array([0, 1, 2, last, last + 1, last + 2])


@dataclass(frozen=True)
class ResidualSystem:
    b: np.ndarray
    d: np.ndarray
    A: np.ndarray
    C: np.ndarray


def _check(u: Unknowns, mesh: Mesh) -> None:
    if u.n_nodes != mesh.n_nodes:
        raise ValueError(f"unknowns have {u.n_nodes} nodes but the mesh has {mesh.n_nodes}")


def approximate_solution(u: Unknowns, mesh: Mesh, tau: float):
    """Interpolated state (x, y, theta) and lambda_theta at reference time ``tau``."""
    _check(u, mesh)
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau={tau} outside [0, 1]")
    e = mesh.element_of(tau)
    if tau == mesh.nodes[e + 1]:  # only reachable at tau = 1
        return u.alpha[e + 1].copy(), float(u.beta_theta[e + 1])
    s = (tau - mesh.nodes[e]) / mesh.element_length
    state = (1.0 - s) * u.alpha[e] + s * u.alpha[e + 1]
    lt = (1.0 - s) * u.beta_theta[e] + s * u.beta_theta[e + 1]
    return state, float(lt)


def sample_solution(u: Unknowns, tau) -> np.ndarray:
    """Vectorized interpolation; returns rows (x, y, theta, lambda_theta) at each ``tau``."""
    nodes = np.arange(u.n_nodes, dtype=float) / (u.n_nodes - 1)  # same grid as build_mesh
    table = np.column_stack([u.alpha, u.beta_theta])
    return np.column_stack([np.interp(tau, nodes, table[:, j]) for j in range(4)])


def assemble_system(u: Unknowns, mesh: Mesh, quad: QuadratureRule, params: ProblemParams) -> ResidualSystem:
    """Residuals and Jacobians in one pass over the elements."""
    _check(u, mesh)
    if quad.abscissae.shape[0] != mesh.n_el:
        raise ValueError("quadrature rule was built for a different mesh")
    lx, ly = u.lambda_xy
    b, A, d, C = kernels.assemble(
        u.alpha, lx, ly, u.beta_theta, u.T, mesh.nodes, quad.abscissae, quad.weights,
        params.mu_v, params.mu_w, params.mu_T,
    )
    return ResidualSystem(b=b, d=d, A=A, C=C)


def assemble_residual(u: Unknowns, mesh: Mesh, quad: QuadratureRule, params: ProblemParams) -> np.ndarray:
    return assemble_system(u, mesh, quad, params).b


def assemble_hamiltonian(u: Unknowns, mesh: Mesh, params: ProblemParams) -> np.ndarray:
    _check(u, mesh)
    lx, ly = u.lambda_xy
    return hamiltonian_residual(u.alpha[:, 2], lx, ly, u.beta_theta, params)


def assemble_jacobians(u: Unknowns, mesh: Mesh, quad: QuadratureRule, params: ProblemParams):
    """``(A, C)``: Jacobian of the Galerkin residual w.r.t. all unknowns, and of the
    nodal Hamiltonian residual w.r.t. everything except T."""
    system = assemble_system(u, mesh, quad, params)
    return system.A, system.C
