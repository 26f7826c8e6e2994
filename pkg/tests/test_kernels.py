import numpy as np
import pytest

from galerkin_toc import kernels
from galerkin_toc.mesh import build_mesh, build_quadrature

pytestmark = pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled extension not built")


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("seed", range(5))
def test_rk4_backends_agree(seed):
    rng = np.random.default_rng(seed)
    state0 = rng.uniform(-2, 2, 4)
    lx, ly = rng.uniform(-2, 2, 2)
    T = float(rng.uniform(1, 20))
    py = kernels.python_backend.rk4_pmp(state0, lx, ly, T, 1.0, 0.7, 300)
    cy = kernels.compiled_backend.rk4_pmp(state0, lx, ly, T, 1.0, 0.7, 300)
    np.testing.assert_allclose(cy, py, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("seed", range(5))
def test_assembly_backends_agree(seed):
    rng = np.random.default_rng(seed)
    mesh = build_mesh(11)
    quad = build_quadrature(mesh, 3)
    alpha = rng.uniform(-3, 3, (12, 3))
    beta = rng.uniform(-2, 2, 12)
    lx, ly = rng.uniform(-2, 2, 2)
    args = (alpha, lx, ly, beta, 7.5, mesh.nodes, quad.abscissae, quad.weights, 1.3, 0.8, 0.25)
    for a, b in zip(kernels.python_backend.assemble(*args), kernels.compiled_backend.assemble(*args)):
        np.testing.assert_allclose(b, a, rtol=1e-12, atol=1e-13)
