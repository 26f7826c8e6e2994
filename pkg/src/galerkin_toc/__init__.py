"""Time-optimal Dubins-car trajectories by a Galerkin weighted-residual method.

The two-point boundary value problem from the maximum principle is projected
onto piecewise-linear finite elements and solved by trust-region sequential
convex programming with L1 subproblems. A single-shooting baseline and an MPC
tracker for the resulting nominal are included.
"""

from .dubins import ProblemParams
from .kernels import BACKEND
from .mesh import build_mesh, build_quadrature
from .mpc import MpcConfig, nominal_from_unknowns, simulate_tracking
from .residual import Unknowns, assemble_system
from .scp import ScpConfig, SolveResult, scp_iterate
from .seeding import build_initial_unknowns
from .shooting import shoot

__all__ = [
    "BACKEND",
    "MpcConfig",
    "ProblemParams",
    "ScpConfig",
    "SolveResult",
    "Unknowns",
    "assemble_system",
    "build_initial_unknowns",
    "build_mesh",
    "build_quadrature",
    "nominal_from_unknowns",
    "scp_iterate",
    "shoot",
    "simulate_tracking",
]
__version__ = "0.1.0"
