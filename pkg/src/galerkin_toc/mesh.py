"""Uniform mesh of the reference interval, P1 Lagrange basis and Gauss quadrature.

Nodes are indexed from 0 in code (node ``i`` here is node ``i + 1`` in the
usual 1-based finite element notation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Mesh:
    n_el: int
    nodes: np.ndarray
    element_length: float

    @property
    def n_nodes(self) -> int:
        return self.n_el + 1

    def element_of(self, tau: float) -> int:
        """Index of the element containing ``tau`` (the right element at interior nodes)."""
        e = int(np.searchsorted(self.nodes, tau, side="right")) - 1
        return min(max(e, 0), self.n_el - 1)


@dataclass(frozen=True)
class QuadratureRule:
    points_per_element: int
    abscissae: np.ndarray  # (n_el, p) reference times
    weights: np.ndarray  # (n_el, p)


def build_mesh(n_el: int) -> Mesh:
    if int(n_el) != n_el or n_el < 1:
        raise ValueError(f"n_el must be a positive integer, got {n_el!r}")
    n_el = int(n_el)
    nodes = np.arange(n_el + 1, dtype=float) / n_el
    nodes.setflags(write=False)
    return Mesh(n_el=n_el, nodes=nodes, element_length=1.0 / n_el)


def _check_node(mesh: Mesh, i: int, tau: float) -> None:
    if not 0 <= i < mesh.n_nodes:
        raise IndexError(f"node index {i} outside [0, {mesh.n_nodes - 1}]")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau={tau} outside the reference interval [0, 1]")


def eval_basis(mesh: Mesh, i: int, tau: float) -> float:
    """Value of the hat function attached to node ``i`` at ``tau``."""
    _check_node(mesh, i, tau)
    nodes = mesh.nodes
    if i > 0 and nodes[i - 1] <= tau <= nodes[i]:
        return (tau - nodes[i - 1]) / (nodes[i] - nodes[i - 1])
    if i < mesh.n_el and nodes[i] <= tau <= nodes[i + 1]:
        return (tau - nodes[i + 1]) / (nodes[i] - nodes[i + 1])
    return 0.0


def eval_basis_deriv(mesh: Mesh, i: int, tau: float, element: int | None = None) -> float:
    """Slope of the hat function of node ``i`` at ``tau``.

    The derivative is discontinuous at nodes. At a node shared by two elements
    the caller must name the element; otherwise a ``ValueError`` is raised.
    """
    _check_node(mesh, i, tau)
    h = mesh.element_length
    if element is None:
        k = tau / h
        on_node = abs(k - round(k)) < 1e-12
        if on_node and 0 < round(k) < mesh.n_el:
            raise ValueError(
                f"tau={tau} is an interior node; pass element= to pick a side"
            )
        element = mesh.element_of(tau)
    elif not 0 <= element < mesh.n_el:
        raise IndexError(f"element {element} outside [0, {mesh.n_el - 1}]")
    else:
        lo, hi = mesh.nodes[element], mesh.nodes[element + 1]
        if not lo - 1e-12 <= tau <= hi + 1e-12:
            raise ValueError(f"tau={tau} is not inside element {element}")
    if i == element:
        return -1.0 / h
    if i == element + 1:
        return 1.0 / h
    return 0.0


def build_quadrature(mesh: Mesh, points_per_element: int = 4) -> QuadratureRule:
    """Gauss-Legendre rule mapped onto every element of ``mesh``."""
    if points_per_element < 2:
        raise ValueError("points_per_element must be >= 2")
    xg, wg = np.polynomial.legendre.leggauss(points_per_element)
    h = mesh.element_length
    left = mesh.nodes[:-1, None]
    abscissae = left + 0.5 * h * (xg[None, :] + 1.0)
    weights = np.broadcast_to(0.5 * h * wg, abscissae.shape).copy()
    abscissae.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(points_per_element, abscissae, weights)
