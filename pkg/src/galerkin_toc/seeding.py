"""Initial guesses for the Galerkin/SCP solver and the shooting baseline."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .dubins import ProblemParams
from .mesh import Mesh
from .residual import Unknowns


def initial_time(X0, XT, mu_v: float, mu_T: float) -> float:
    """Final-time guess for straight constant-speed motion between the endpoints.

    Minimizing ``mu_T T + mu_v L^2 / T`` over T gives ``T = L sqrt(mu_v / mu_T)``.
    """
    dist2 = (XT[0] - X0[0]) ** 2 + (XT[1] - X0[1]) ** 2
    if dist2 == 0.0:
        warnings.warn("start and goal positions coincide; using T0 = 1", stacklevel=2)
        return 1.0
    return math.sqrt(mu_v / mu_T * dist2)


def _wrap(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


def initial_adjoints(X0, XT, mu_v: float = 1.0, mu_w: float = 1.0):
    """Unit-magnitude costates whose signs encode the intuitive first move.

    The car goes forward when the goal lies in the (closed) forward half-plane
    of its initial heading, backward otherwise; (lam_x, lam_y) in {-1, 1}^2 is
    picked so that the initial velocity has that sign and, among such choices,
    points most towards the goal. lam_theta follows the turn towards the goal
    bearing, with +1 when no turn is needed.

    ``mu_v``, ``mu_w`` only scale the controls and do not affect the signs.
    """
    dx, dy = XT[0] - X0[0], XT[1] - X0[1]
    c, s = math.cos(X0[2]), math.sin(X0[2])
    sigma = 1.0 if dx * c + dy * s >= 0.0 else -1.0

    best = None
    for lx in (1.0, -1.0):
        for ly in (1.0, -1.0):
            if sigma * (lx * c + ly * s) <= 1e-12:
                continue
            score = lx * dx + ly * dy
            if best is None or score > best[0] + 1e-12:
                best = (score, lx, ly)
    _, lam_x, lam_y = best

    if dx == 0.0 and dy == 0.0:
        turn = _wrap(XT[2] - X0[2])
    else:
        heading = X0[2] if sigma > 0 else X0[2] + math.pi
        turn = _wrap(math.atan2(dy, dx) - heading)
    lam_theta = -1.0 if turn < 0.0 else 1.0
    return lam_x, lam_y, lam_theta


def bezier_points(X0, XT, handle_scale: float = 1.0 / 3.0) -> np.ndarray:
    """The four planar control points of the seeding curve."""
    if not handle_scale > 0:
        raise ValueError("handle_scale must be positive")
    P0 = np.array(X0[:2], dtype=float)
    P3 = np.array(XT[:2], dtype=float)
    L = float(np.hypot(*(P3 - P0)))
    P1 = P0 + handle_scale * L * np.array([math.cos(X0[2]), math.sin(X0[2])])
    P2 = P3 - handle_scale * L * np.array([math.cos(XT[2]), math.sin(XT[2])])
    return np.stack([P0, P1, P2, P3])


def bezier_curve(P: np.ndarray, tau):
    """Cubic Bezier value and derivative at ``tau`` (arrays of shape (n, 2))."""
    t = np.asarray(tau, dtype=float)[:, None]
    u = 1.0 - t
    B = u**3 * P[0] + 3 * t * u**2 * P[1] + 3 * t**2 * u * P[2] + t**3 * P[3]
    dB = 3 * u**2 * (P[1] - P[0]) + 6 * t * u * (P[2] - P[1]) + 3 * t**2 * (P[3] - P[2])
    return B, dB


def bezier_seed(X0, XT, mesh: Mesh, handle_scale: float = 1.0 / 3.0) -> np.ndarray:
    """Nodal (x, y, theta) sampled from a cubic Bezier matching the end headings.

    Interior headings are the tangent angles, made continuous across nodes.
    """
    if not handle_scale > 0:
        raise ValueError("handle_scale must be positive")
    tau = mesh.nodes
    alpha = np.empty((mesh.n_nodes, 3))
    if X0[0] == XT[0] and X0[1] == XT[1]:
        alpha[:, 0] = X0[0]
        alpha[:, 1] = X0[1]
        alpha[:, 2] = (1.0 - tau) * X0[2] + tau * XT[2]
        return alpha
    B, dB = bezier_curve(bezier_points(X0, XT, handle_scale), tau)
    # Long handles make the curve back up on itself. The car can reverse, so the
    # heading follows the tangent line and ignores the sign flip at a cusp.
    theta = np.unwrap(np.arctan2(dB[:, 1], dB[:, 0]), period=np.pi)
    theta += 2.0 * np.pi * np.round((X0[2] - theta[0]) / (2.0 * np.pi))
    alpha[:, :2] = B
    alpha[:, 2] = theta
    alpha[0] = X0
    alpha[-1] = XT
    return alpha


def build_initial_unknowns(params: ProblemParams, mesh: Mesh, handle_scale: float = 1.0 / 3.0) -> Unknowns:
    X0, XT = params.X0, params.XT
    lam_x, lam_y, lam_theta = initial_adjoints(X0, XT, params.mu_v, params.mu_w)
    return Unknowns(
        alpha=bezier_seed(X0, XT, mesh, handle_scale),
        lambda_xy=(lam_x, lam_y),
        beta_theta=np.full(mesh.n_nodes, lam_theta),
        T=initial_time(X0, XT, params.mu_v, params.mu_T),
    )
