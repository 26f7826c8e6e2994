import math

import numpy as np
import pytest

from galerkin_toc import kernels
from galerkin_toc.dubins import ProblemParams
from galerkin_toc.mesh import build_mesh, build_quadrature
from galerkin_toc.scp import scp_iterate
from galerkin_toc.seeding import build_initial_unknowns

BACKENDS = ["python"] + (["compiled"] if kernels.compiled_backend is not None else [])

LINE = ProblemParams((0.0, 0.0, 0.0), (5.0, 0.0, 0.0))
FIG1 = ProblemParams((0.0, 0.0, math.pi / 2), (5.0, 5.0, math.pi / 2))
FIG2 = ProblemParams((0.0, 0.0, math.pi / 4), (5.0, -5.0, math.pi / 2))
CASES = {"line": LINE, "fig1": FIG1, "fig2": FIG2}


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    mod = kernels.python_backend if request.param == "python" else kernels.compiled_backend
    monkeypatch.setattr(kernels, "rk4_pmp", mod.rk4_pmp)
    monkeypatch.setattr(kernels, "assemble", mod.assemble)
    return request.param


@pytest.fixture(scope="session")
def mesh19():
    return build_mesh(19)


@pytest.fixture(scope="session")
def quad19(mesh19):
    return build_quadrature(mesh19, 4)


_solutions = {}


def solved(name):
    """Default-parameter GWRM solution of a named case (cached per session)."""
    if name not in _solutions:
        mesh = build_mesh(19)
        quad = build_quadrature(mesh, 4)
        params = CASES[name]
        _solutions[name] = scp_iterate(build_initial_unknowns(params, mesh), mesh, quad, params)
    return _solutions[name]


def random_unknowns(rng, n_nodes, X0=None, XT=None):
    from galerkin_toc.residual import Unknowns

    alpha = rng.uniform(-3, 3, size=(n_nodes, 3))
    if X0 is not None:
        alpha[0] = X0
        alpha[-1] = XT
    return Unknowns(alpha=alpha, lambda_xy=tuple(rng.uniform(-2, 2, 2)),
                    beta_theta=rng.uniform(-2, 2, n_nodes), T=float(rng.uniform(1, 20)))


def exact_line_unknowns(mesh):
    from galerkin_toc.residual import Unknowns

    alpha = np.zeros((mesh.n_nodes, 3))
    alpha[:, 0] = 5.0 * mesh.nodes
    return Unknowns(alpha=alpha, lambda_xy=(1.0, 0.0), beta_theta=np.zeros(mesh.n_nodes), T=10.0)


ACCEPTANCE_LINES = []


def record_criterion(number, title, checks):
    """Store and print one PASS/FAIL line for an acceptance criterion.

    ``checks`` maps a short description to ``(ok, detail)``; the criterion
    passes only if every check does. Returns the failing descriptions.
    """
    failed = [name for name, (ok, _) in checks.items() if not ok]
    status = "PASS" if not failed else "FAIL"
    details = "; ".join(f"{name}: {detail}{'' if ok else ' [FAILED]'}" for name, (ok, detail) in checks.items())
    line = f"[{status}] criterion {number} ({title}) -- {details}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return failed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split()[0])):
            terminalreporter.write_line(line)
