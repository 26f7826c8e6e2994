"""Indirect single shooting on the reference interval (baseline method).

The unknowns are the constant costates, the initial lambda_theta and the final
time. The four residuals are the terminal state mismatch and the Hamiltonian
condition at tau = 0, which closes the system for the free final time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .dubins import ProblemParams, hamiltonian_residual
from .scp import T_MIN
from .seeding import initial_adjoints, initial_time


@dataclass(frozen=True)
class ShootingGuess:
    lam_x: float
    lam_y: float
    lam_theta0: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.lam_x, self.lam_y, self.lam_theta0, self.T])


@dataclass(frozen=True)
class ShootingResult:
    converged: bool
    guess: ShootingGuess
    trajectory: np.ndarray  # rows (tau, x, y, theta, lambda_theta)
    mismatch_norm: float
    iterations: int
    message: str = ""


class IntegrationError(ArithmeticError):
    pass


def integrate_pmp(X0, guess: ShootingGuess, params: ProblemParams, steps: int = 400) -> np.ndarray:
    """RK4 samples of (tau, x, y, theta, lambda_theta) at ``steps + 1`` points."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    state0 = np.array([X0[0], X0[1], X0[2], guess.lam_theta0], dtype=float)
    traj = kernels.rk4_pmp(state0, float(guess.lam_x), float(guess.lam_y), float(guess.T),
                           params.mu_v, params.mu_w, int(steps))
    if not np.all(np.isfinite(traj)):
        bad = int(np.argmax(~np.all(np.isfinite(traj), axis=1)))
        raise IntegrationError(f"non-finite state at step {bad} of {steps} (guess {guess})")
    tau = np.linspace(0.0, 1.0, steps + 1)
    return np.column_stack([tau, traj])


def shooting_residual(X0, XT, q: np.ndarray, params: ProblemParams, steps: int = 400) -> np.ndarray:
    lam_x, lam_y, lt0, T = q
    end = integrate_pmp(X0, ShootingGuess(lam_x, lam_y, lt0, T), params, steps)[-1]
    H0 = hamiltonian_residual(X0[2], lam_x, lam_y, lt0, params)
    return np.array([end[1] - XT[0], end[2] - XT[1], end[3] - XT[2], H0])


def shoot(X0, XT, init: ShootingGuess, params: ProblemParams, tol: float = 1e-6,
          max_iters: int = 50, steps: int = 400, fd_step: float = 1e-6,
          max_halvings: int = 8) -> ShootingResult:
    """Damped Newton iteration on the shooting residual.

    The Jacobian is formed by central differences. A full step is halved up to
    ``max_halvings`` times until the residual norm decreases; failure to
    decrease, integration blow-up or the final time reaching the clamp all end
    the iteration with ``converged=False``.
    """
    X0 = tuple(float(c) for c in X0)
    XT = tuple(float(c) for c in XT)
    q = init.as_array()

    def F(v):
        try:
            return shooting_residual(X0, XT, v, params, steps)
        except IntegrationError:
            return None

    def result(converged, Fq, it, message):
        guess = ShootingGuess(*(float(v) for v in q))
        try:
            traj = integrate_pmp(X0, guess, params, steps)
        except IntegrationError:
            traj = np.empty((0, 5))
        norm = float(np.abs(Fq).max()) if Fq is not None else float("inf")
        return ShootingResult(converged, guess, traj, norm, it, message)

    Fq = F(q)
    if Fq is None:
        return result(False, None, 0, "integration failed at the initial guess")
    for it in range(max_iters + 1):
        if np.abs(Fq).max() <= tol:
            return result(True, Fq, it, "converged")
        if it == max_iters:
            break
        J = np.empty((4, 4))
        for k in range(4):
            e = np.zeros(4)
            e[k] = fd_step * max(1.0, abs(q[k]))
            Fp, Fm = F(q + e), F(q - e)
            if Fp is None or Fm is None:
                return result(False, Fq, it, "integration failed while forming the Jacobian")
            J[:, k] = (Fp - Fm) / (2.0 * e[k])
        try:
            step = np.linalg.solve(J, -Fq)
        except np.linalg.LinAlgError:
            return result(False, Fq, it, "singular shooting Jacobian")
        if not np.all(np.isfinite(step)):
            return result(False, Fq, it, "non-finite Newton step")
        base = np.linalg.norm(Fq)
        scale = 1.0
        for _ in range(max_halvings + 1):
            trial = q + scale * step
            trial[3] = max(trial[3], T_MIN)
            Ft = F(trial)
            if Ft is not None and np.linalg.norm(Ft) < base:
                break
            scale *= 0.5
        else:
            return result(False, Fq, it, "damped Newton step failed to reduce the mismatch")
        q, Fq = trial, Ft
        if q[3] <= T_MIN:
            return result(False, Fq, it + 1, "final time driven to the lower clamp")
    return result(False, Fq, max_iters, "iteration limit reached")


def guess_from_heuristics(params: ProblemParams) -> ShootingGuess:
    lam_x, lam_y, lam_theta = initial_adjoints(params.X0, params.XT, params.mu_v, params.mu_w)
    return ShootingGuess(lam_x, lam_y, lam_theta, initial_time(params.X0, params.XT, params.mu_v, params.mu_T))
