"""Closed-loop tracking of the open-loop time-optimal trajectory.

Each control step solves the finite-horizon tracking problem with quadratic
stage/terminal weights on the Dubins model linearized (forward Euler) along
the nominal. Controls are unconstrained and the terminal set is a soft
``P_H`` penalty, so the problem is an unconstrained QP in the deviations and
is solved exactly by a backward Riccati recursion with affine terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dubins import ProblemParams, dynamics, optimal_controls
from .residual import Unknowns, sample_solution


@dataclass(frozen=True)
class NominalTrajectory:
    t: np.ndarray  # (K + 1,)
    states: np.ndarray  # (K + 1, 3)
    controls: np.ndarray  # (K + 1, 2)
    T_star: float

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("nominal times must be strictly increasing with at least two samples")
        if self.states.shape != (t.size, 3) or self.controls.shape != (t.size, 2):
            raise ValueError("nominal states/controls do not match the time grid")

    @property
    def n_steps(self) -> int:
        return self.t.size - 1


def nominal_from_unknowns(u: Unknowns, params: ProblemParams, dt: float) -> NominalTrajectory:
    """Resample a Galerkin solution at ``t_k = k dt`` (linear in tau = t / T)."""
    K = int(round(u.T / dt))
    if K < 1:
        raise ValueError(f"dt={dt} is longer than the trajectory (T={u.T})")
    t = dt * np.arange(K + 1)
    tau = np.minimum(t / u.T, 1.0)
    table = sample_solution(u, tau)
    lx, ly = u.lambda_xy
    v, w = optimal_controls(table[:, 2], lx, ly, table[:, 3], params)
    return NominalTrajectory(t=t, states=table[:, :3], controls=np.column_stack([v, w]), T_star=u.T)


def _as_matrix(value, n: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = float(arr) * np.eye(n)
    if arr.shape != (n, n):
        raise ValueError(f"{name} must be {n}x{n}")
    if not np.allclose(arr, arr.T):
        raise ValueError(f"{name} must be symmetric")
    return arr


@dataclass(frozen=True)
class MpcConfig:
    dt: float | None = None  # None: T* / control_steps
    control_steps: int = 1000
    horizon: int = 5
    P_H: np.ndarray = field(default_factory=lambda: np.eye(3))
    Q: np.ndarray = field(default_factory=lambda: np.eye(3))
    R: np.ndarray = field(default_factory=lambda: 1e-2 * np.eye(2))
    noise_scale: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if int(self.control_steps) != self.control_steps or self.control_steps < 1:
            raise ValueError("control_steps must be a positive integer")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ValueError("horizon must be a positive integer")
        if not self.noise_scale >= 0:
            raise ValueError("noise_scale must be non-negative")
        P_H = _as_matrix(self.P_H, 3, "P_H")
        Q = _as_matrix(self.Q, 3, "Q")
        R = _as_matrix(self.R, 2, "R")
        if np.linalg.eigvalsh(P_H).min() < -1e-12:
            raise ValueError("P_H must be positive semidefinite")
        if np.linalg.eigvalsh(Q).min() < -1e-12:
            raise ValueError("Q must be positive semidefinite")
        try:
            np.linalg.cholesky(R)
        except np.linalg.LinAlgError:
            raise ValueError("R must be positive definite") from None
        object.__setattr__(self, "P_H", P_H)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)

    def step_for(self, T_star: float) -> float:
        return self.dt if self.dt is not None else T_star / self.control_steps


def linearize_dynamics(X, u, dt: float):
    """Euler-discretized affine model ``X+ = A X + B u + c`` about ``(X, u)``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    th = X[2]
    v = u[0]
    c, s = math.cos(th), math.sin(th)
    A = np.eye(3)
    A[0, 2] = -dt * v * s
    A[1, 2] = dt * v * c
    B = np.array([[dt * c, 0.0], [dt * s, 0.0], [0.0, dt]])
    X = np.asarray(X, dtype=float)
    u = np.asarray(u, dtype=float)
    c_aff = X + dt * dynamics(X, u) - A @ X - B @ u
    return A, B, c_aff


def riccati_first_control(X, X_ref, u_ref, models, Q, R, P_H) -> np.ndarray:
    """First control of the finite-horizon affine tracking problem.

    ``X_ref`` has ``H + 1`` rows, ``u_ref`` and ``models`` (A, B, c) have
    ``H`` entries. Minimizes
    ``|X_H - X_ref_H|^2_P_H + sum_k |X_k - X_ref_k|^2_Q + |u_k - u_ref_k|^2_R``.
    """
    H = len(models)
    P = P_H.copy()
    p = np.zeros(3)
    gains = [None] * H
    for k in range(H - 1, -1, -1):
        A, B, c = models[k]
        # defect of the reference under the model: e_{k+1} = A e_k + B w_k + r
        r = A @ X_ref[k] + B @ u_ref[k] + c - X_ref[k + 1]
        BtP = B.T @ P
        Mk = R + BtP @ B
        K = -np.linalg.solve(Mk, BtP @ A)
        kff = -np.linalg.solve(Mk, BtP @ r + B.T @ p)
        Acl = A + B @ K
        p = K.T @ R @ kff + Acl.T @ (P @ (B @ kff + r) + p)
        P = Q + K.T @ R @ K + Acl.T @ P @ Acl
        P = 0.5 * (P + P.T)
        gains[k] = (K, kff)
    K0, k0 = gains[0]
    e0 = np.asarray(X, dtype=float) - X_ref[0]
    return u_ref[0] + K0 @ e0 + k0


def _horizon_models(k: int, nominal: NominalTrajectory, config: MpcConfig, dt: float):
    H = min(config.horizon, nominal.n_steps - k)
    models = [linearize_dynamics(nominal.states[k + i], nominal.controls[k + i], dt) for i in range(H)]
    return models, nominal.states[k : k + H + 1], nominal.controls[k : k + H]


def mpc_step(X, k: int, nominal: NominalTrajectory, config: MpcConfig) -> np.ndarray:
    """Control ``(v, omega)`` to apply at step ``k`` from state ``X``."""
    if not 0 <= k < nominal.n_steps:
        raise IndexError(f"step {k} outside [0, {nominal.n_steps - 1}]")
    dt = nominal.t[1] - nominal.t[0]
    models, X_ref, u_ref = _horizon_models(k, nominal, config, dt)
    return riccati_first_control(X, X_ref, u_ref, models, config.Q, config.R, config.P_H)


def rk4_plant(X, u, dt: float) -> np.ndarray:
    k1 = dynamics(X, u)
    k2 = dynamics(X + 0.5 * dt * k1, u)
    k3 = dynamics(X + 0.5 * dt * k2, u)
    k4 = dynamics(X + dt * k3, u)
    return X + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class TrackingLog:
    t: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    ref_states: np.ndarray
    ref_controls: np.ndarray
    err_norm: np.ndarray
    final_state: np.ndarray
    terminal_error: float
    seed: int

    @property
    def rms_error(self) -> float:
        return float(np.sqrt(np.mean(self.err_norm**2)))

    def __len__(self) -> int:
        return self.t.size


def simulate_tracking(nominal: NominalTrajectory, config: MpcConfig, noise: bool = True) -> TrackingLog:
    """Closed-loop rollout from the nominal initial state.

    The plant is the nonlinear model integrated by RK4 over each control
    period; with ``noise`` on, a zero-mean Gaussian with covariance
    ``dt^2 * noise_scale * I`` is added to the state after every step.
    """
    K = nominal.n_steps
    dt = nominal.t[1] - nominal.t[0]
    rng = np.random.default_rng(config.seed)
    sigma = dt * math.sqrt(config.noise_scale)
    X = nominal.states[0].copy()
    states = np.empty((K, 3))
    controls = np.empty((K, 2))
    for k in range(K):
        u = mpc_step(X, k, nominal, config)
        states[k] = X
        controls[k] = u
        X = rk4_plant(X, u, dt)
        if noise:
            X = X + sigma * rng.standard_normal(3)
    ref_states = nominal.states[:K]
    err = np.linalg.norm(states - ref_states, axis=1)
    terminal = float(np.linalg.norm(X[:2] - nominal.states[K, :2]))
    return TrackingLog(
        t=nominal.t[:K].copy(),
        states=states,
        controls=controls,
        ref_states=ref_states.copy(),
        ref_controls=nominal.controls[:K].copy(),
        err_norm=err,
        final_state=X,
        terminal_error=terminal,
        seed=config.seed,
    )
