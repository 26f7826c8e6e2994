import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galerkin_toc.mesh import build_mesh, build_quadrature, eval_basis, eval_basis_deriv


def test_smallest_mesh():
    m = build_mesh(1)
    assert m.nodes.tolist() == [0.0, 1.0]
    assert m.element_length == 1.0


def test_reference_mesh_size():
    m = build_mesh(19)
    assert m.n_nodes == 20
    assert m.element_length == pytest.approx(1 / 19, abs=1e-15)
    assert m.nodes[1] == pytest.approx(1 / 19, abs=1e-15)


def test_uniform_nodes():
    assert build_mesh(4).nodes.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]


@pytest.mark.parametrize("bad", [0, -1, 2.5])
def test_rejects_bad_element_count(bad):
    with pytest.raises(ValueError):
        build_mesh(bad)


@given(st.integers(1, 60))
def test_mesh_invariants(n_el):
    m = build_mesh(n_el)
    assert m.nodes[0] == 0.0 and m.nodes[-1] == 1.0
    assert m.n_nodes == n_el + 1
    assert np.all(np.diff(m.nodes) > 0)
    np.testing.assert_allclose(np.diff(m.nodes), m.element_length, rtol=0, atol=1e-15)


@given(st.integers(1, 25))
def test_kronecker_property(n_el):
    m = build_mesh(n_el)
    for i in range(m.n_nodes):
        for j in range(m.n_nodes):
            assert eval_basis(m, i, m.nodes[j]) == (1.0 if i == j else 0.0)


@settings(max_examples=200)
@given(st.integers(1, 25), st.floats(0.0, 1.0))
def test_partition_of_unity(n_el, tau):
    m = build_mesh(n_el)
    values = [eval_basis(m, i, tau) for i in range(m.n_nodes)]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert sum(values) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=200)
@given(st.integers(1, 25), st.floats(0.0, 1.0))
def test_derivatives_sum_to_zero_elementwise(n_el, tau):
    m = build_mesh(n_el)
    e = m.element_of(tau)
    total = sum(eval_basis_deriv(m, i, tau, element=e) for i in range(m.n_nodes))
    assert abs(total) < 1e-12


def test_hand_value_two_elements():
    # second node (index 1) rises linearly on [0, 0.5]
    assert eval_basis(build_mesh(2), 1, 0.25) == pytest.approx(0.5, abs=1e-15)


def test_derivative_hand_values():
    m = build_mesh(2)
    assert eval_basis_deriv(m, 0, 0.2) == pytest.approx(-2.0)
    assert eval_basis_deriv(m, 1, 0.2) == pytest.approx(2.0)
    assert eval_basis_deriv(m, 0, 0.7) == 0.0
    assert eval_basis_deriv(m, 2, 0.2) == 0.0


def test_derivative_at_shared_node_needs_element():
    m = build_mesh(2)
    with pytest.raises(ValueError):
        eval_basis_deriv(m, 1, 0.5)
    assert eval_basis_deriv(m, 1, 0.5, element=0) == pytest.approx(2.0)
    assert eval_basis_deriv(m, 1, 0.5, element=1) == pytest.approx(-2.0)


def test_basis_rejects_out_of_range():
    m = build_mesh(3)
    with pytest.raises(IndexError):
        eval_basis(m, 4, 0.5)
    with pytest.raises(IndexError):
        eval_basis(m, -1, 0.5)
    with pytest.raises(ValueError):
        eval_basis(m, 0, 1.5)


def test_two_point_rule_on_unit_element():
    q = build_quadrature(build_mesh(1), 2)
    off = 1.0 / (2.0 * math.sqrt(3.0))
    np.testing.assert_allclose(np.sort(q.abscissae[0]), [0.5 - off, 0.5 + off], atol=1e-15)
    np.testing.assert_allclose(q.weights[0], [0.5, 0.5], atol=1e-15)


@pytest.mark.parametrize("p", [2, 3, 4, 6])
@pytest.mark.parametrize("n_el", [1, 7, 19])
def test_quadrature_weights_and_placement(p, n_el):
    m = build_mesh(n_el)
    q = build_quadrature(m, p)
    np.testing.assert_allclose(q.weights.sum(axis=1), m.element_length, atol=1e-14)
    assert np.all(q.weights > 0)
    left, right = m.nodes[:-1, None], m.nodes[1:, None]
    assert np.all(q.abscissae > left) and np.all(q.abscissae < right)
    assert float(np.sum(q.weights * q.abscissae)) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_polynomial_exactness(p):
    m = build_mesh(5)
    q = build_quadrature(m, p)
    for deg in range(2 * p):
        approx = float(np.sum(q.weights * q.abscissae**deg))
        assert approx == pytest.approx(1.0 / (deg + 1), abs=1e-10)
    # one degree higher is no longer exact
    deg = 2 * p
    assert abs(float(np.sum(q.weights * q.abscissae**deg)) - 1.0 / (deg + 1)) > 1e-14


def test_quadrature_requires_two_points():
    with pytest.raises(ValueError):
        build_quadrature(build_mesh(2), 1)
