"""Dubins car dynamics and the conditions of the maximum principle for the
time/effort cost ``mu_T * T + int(mu_v v^2 + mu_w w^2) dt``.

All PMP right-hand sides are written on the reference interval tau in [0, 1],
with t = tau * T.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ProblemParams:
    X0: tuple[float, float, float]
    XT: tuple[float, float, float]
    mu_T: float = 0.25
    mu_v: float = 1.0
    mu_w: float = 1.0
    eta: int = 1

    def __post_init__(self):
        for name in ("mu_T", "mu_v", "mu_w"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if self.eta not in (0, 1):
            raise ValueError(f"eta must be 0 or 1, got {self.eta!r}")
        if self.eta == 0:
            warnings.warn("eta=0 (abnormal multiplier) is not supported; the normal-case equations are used",
                          stacklevel=2)
        for name in ("X0", "XT"):
            X = tuple(float(c) for c in getattr(self, name))
            if len(X) != 3 or not all(math.isfinite(c) for c in X):
                raise ValueError(f"{name} must be three finite numbers (x, y, theta)")
            object.__setattr__(self, name, X)


def dynamics(X, u) -> np.ndarray:
    """Time derivative of the state (x, y, theta) under control (v, omega)."""
    _, _, th = X
    v, w = u
    return np.array([v * math.cos(th), v * math.sin(th), w])


def pmp_rhs(theta, lam_theta, lam_x, lam_y, T, params: ProblemParams):
    """d/dtau of (x, y, theta, lambda_theta) along an extremal.

    Works elementwise on arrays as well as on scalars.
    """
    c, s = np.cos(theta), np.sin(theta)
    k = T / (2.0 * params.mu_v)
    dx = k * (lam_x * c * c + lam_y * c * s)
    dy = k * (lam_x * c * s + lam_y * s * s)
    dth = T / (2.0 * params.mu_w) * lam_theta
    dlt = k * ((lam_x**2 - lam_y**2) * c * s + lam_x * lam_y * (s * s - c * c))
    return dx, dy, dth, dlt


def optimal_controls(theta, lam_x, lam_y, lam_theta, params: ProblemParams):
    """Maximizer (v, omega) of the Hamiltonian for unconstrained controls."""
    v = (lam_x * np.cos(theta) + lam_y * np.sin(theta)) / (2.0 * params.mu_v)
    w = lam_theta / (2.0 * params.mu_w)
    return v, w


def hamiltonian_residual(theta, lam_x, lam_y, lam_theta, params: ProblemParams):
    """Maximized Hamiltonian minus mu_T; vanishes on a time-optimal extremal."""
    g = lam_x * np.cos(theta) + lam_y * np.sin(theta)
    return g * g / (4.0 * params.mu_v) + lam_theta**2 / (4.0 * params.mu_w) - params.mu_T


def hamiltonian(X, u, lam, params: ProblemParams) -> float:
    """General (not yet maximized) Hamiltonian ``lam . f - J`` with eta = 1."""
    v, w = u
    return float(np.dot(lam, dynamics(X, u)) - (params.mu_v * v * v + params.mu_w * w * w))


def trajectory_cost(tau, theta, lam_theta, lam_x, lam_y, T, params: ProblemParams) -> float:
    """Cost functional along PMP controls sampled on a ``tau`` grid (trapezoid rule)."""
    tau = np.asarray(tau, dtype=float)
    v, w = optimal_controls(np.asarray(theta, dtype=float), lam_x, lam_y, np.asarray(lam_theta, dtype=float), params)
    f = params.mu_v * v**2 + params.mu_w * w**2
    running = float(np.sum(0.5 * (f[1:] + f[:-1]) * np.diff(tau)))
    return params.mu_T * T + T * running
