"""Trust-region sequential convex programming on the Galerkin system."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .dubins import ProblemParams
from .lp import solve_subproblem, trust_radii_vector
from .mesh import Mesh, QuadratureRule
from .residual import Unknowns, assemble_system, boundary_indices

T_MIN = 0.1


@dataclass(frozen=True)
class ScpConfig:
    rho_s: float = 1.0
    rho_q: float = 1.0
    rho_T: float = 1.0
    epsilon: float = 1e-2
    max_iters: int = 200
    fd_step: float = 1e-6
    # Part of the reference parameter set without a documented role. It is kept
    # so configs carry it, but the solver never reads it.
    vartheta: float = 1e-4

    def __post_init__(self):
        for name in ("rho_s", "rho_q", "rho_T", "epsilon", "fd_step", "vartheta"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters!r}")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    b_l1: float
    d_l1: float
    step_inf: float
    T: float  # final time after the update


@dataclass(frozen=True)
class SolveResult:
    unknowns: Unknowns
    converged: bool
    iterations: int
    residual_history: list[IterationRecord] = field(default_factory=list)
    wall_time: float = 0.0
    b_final: np.ndarray | None = None
    d_final: np.ndarray | None = None


def scp_iterate(init: Unknowns, mesh: Mesh, quad: QuadratureRule, params: ProblemParams,
                config: ScpConfig = ScpConfig(), trace: TextIO | None = None) -> SolveResult:
    """Run SCP from ``init`` until the step is below ``config.epsilon``.

    ``init`` must already carry the boundary states in its first and last
    ``alpha`` rows; those rows are never updated. Non-convergence is reported
    through ``converged=False``.
    """
    if not (np.array_equal(init.alpha[0], params.X0) and np.array_equal(init.alpha[-1], params.XT)):
        raise ValueError("initial unknowns must carry X0 and XT in the first and last alpha rows")
    start = time.perf_counter()
    N = init.n_nodes
    radii = trust_radii_vector(N, config.rho_s, config.rho_q, config.rho_T)
    fixed = boundary_indices(N)
    z = init.to_vector()
    u = init
    history = []
    converged = False
    for it in range(1, config.max_iters + 1):
        system = assemble_system(u, mesh, quad, params)
        delta, _ = solve_subproblem(system.A, system.b, system.C, system.d, radii, fixed)
        z = z + delta
        z[fixed] = init.to_vector()[fixed]
        z[-1] = max(z[-1], T_MIN)
        u = Unknowns.from_vector(z)
        step = float(np.abs(delta).max())
        rec = IterationRecord(it, float(np.abs(system.b).sum()), float(np.abs(system.d).sum()), step, u.T)
        history.append(rec)
        if trace is not None:
            trace.write(f"iter={rec.iteration} b_l1={rec.b_l1:.6e} d_l1={rec.d_l1:.6e} "
                        f"step_inf={rec.step_inf:.6e} T={rec.T:.6f}\n")
        if step <= config.epsilon:
            converged = True
            break
    final = assemble_system(u, mesh, quad, params)
    return SolveResult(
        unknowns=u,
        converged=converged,
        iterations=len(history),
        residual_history=history,
        wall_time=time.perf_counter() - start,
        b_final=final.b,
        d_final=final.d,
    )
