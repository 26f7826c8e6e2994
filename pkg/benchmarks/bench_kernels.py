"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the RK4 integrator, one Galerkin assembly at the reference mesh, and a
full solve of the fig1 case with each backend, and checks that both give the same
numbers.
"""

import argparse
import math
import timeit

import numpy as np

from galerkin_toc import kernels
from galerkin_toc.dubins import ProblemParams
from galerkin_toc.mesh import build_mesh, build_quadrature
from galerkin_toc.scp import scp_iterate
from galerkin_toc.seeding import build_initial_unknowns

PARAMS = ProblemParams((0.0, 0.0, math.pi / 2), (5.0, 5.0, math.pi / 2))


def workloads(backend):
    mesh = build_mesh(19)
    quad = build_quadrature(mesh, 4)
    u = build_initial_unknowns(PARAMS, mesh)
    state0 = np.array([0.0, 0.0, math.pi / 2, -1.0])

    def rk4():
        return backend.rk4_pmp(state0, 1.0, 1.0, 14.0, 1.0, 1.0, 400)

    def assemble():
        return backend.assemble(u.alpha, 1.0, 1.0, u.beta_theta, u.T, mesh.nodes, quad.abscissae, quad.weights,
                                1.0, 1.0, 0.25)

    def solve():
        saved = kernels.assemble
        kernels.assemble = backend.assemble
        try:
            return scp_iterate(u, mesh, quad, PARAMS).unknowns.T
        finally:
            kernels.assemble = saved

    return {"rk4 (400 steps)": rk4, "assembly (N=20)": assemble, "fig1 solve": solve}


def best_time(fn, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation` first")
    py = workloads(kernels.python_backend)
    cy = workloads(kernels.compiled_backend)
    print(f"{'workload':<18}{'python':>12}{'compiled':>12}{'speedup':>10}{'max diff':>12}")
    for name in py:
        a, b = py[name](), cy[name]()
        diff = max(float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) for x, y in
                   (zip(a, b) if isinstance(a, tuple) else [(a, b)]))
        t_py, t_cy = best_time(py[name], args.repeat), best_time(cy[name], args.repeat)
        print(f"{name:<18}{t_py * 1e3:>10.3f}ms{t_cy * 1e3:>10.3f}ms{t_py / t_cy:>9.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()
