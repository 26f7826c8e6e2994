import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import FIG1
from galerkin_toc.dubins import ProblemParams, optimal_controls
from galerkin_toc.mesh import build_mesh
from galerkin_toc.seeding import (
    bezier_curve, bezier_points, bezier_seed, build_initial_unknowns, initial_adjoints, initial_time,
)

coord = st.floats(-10, 10, allow_nan=False)
angle = st.floats(-2 * math.pi, 2 * math.pi)


def test_initial_time_examples():
    assert initial_time((0, 0, 0), (5, 5, 0), 1.0, 0.25) == pytest.approx(math.sqrt(200), abs=1e-12)
    assert initial_time((0, 0, 0), (5, 0, 0), 1.0, 0.25) == pytest.approx(10.0, abs=1e-12)
    assert initial_time((0, 0, 0), (0.6, 0.8, 0), 2.0, 2.0) == pytest.approx(1.0, abs=1e-12)


def test_initial_time_coincident_endpoints():
    with pytest.warns(UserWarning):
        assert initial_time((1, 1, 0), (1, 1, 2), 1.0, 0.25) == 1.0


@given(coord, coord, coord, coord, st.floats(0.1, 5), st.floats(0.1, 5))
def test_initial_time_symmetric(x0, y0, x1, y1, mu_v, mu_T):
    assume(math.hypot(x1 - x0, y1 - y0) > 1e-6)
    assert initial_time((x0, y0, 0), (x1, y1, 0), mu_v, mu_T) == initial_time((x1, y1, 0), (x0, y0, 0), mu_v, mu_T)


def test_straight_ahead_adjoints():
    lx, ly, lt = initial_adjoints((0, 0, 0), (5, 0, 0))
    assert lx == 1.0 and lt == 1.0


def test_fig1_adjoints():
    lx, ly, lt = initial_adjoints(FIG1.X0, FIG1.XT)
    assert ly == 1.0 and lt == -1.0


@given(coord, coord, angle, coord, coord, angle)
def test_adjoint_sign_rule(x0, y0, th0, x1, y1, th1):
    lam = initial_adjoints((x0, y0, th0), (x1, y1, th1))
    assert all(abs(v) == 1.0 for v in lam)
    params = ProblemParams((x0, y0, th0), (x1, y1, th1))
    v, w = optimal_controls(th0, lam[0], lam[1], lam[2], params)
    forward = (x1 - x0) * math.cos(th0) + (y1 - y0) * math.sin(th0) >= 0
    assert (v > 0) if forward else (v < 0)


def test_backward_goal_drives_in_reverse():
    lx, ly, lt = initial_adjoints((0, 0, 0), (-5, 1, 0))
    assert lx == -1.0
    # reversing with heading 0 points the car at pi; the goal at bearing ~169 deg is a right turn
    assert lt == -1.0


def test_bezier_endpoints_and_tangents():
    X0, XT = (1.0, -2.0, 0.3), (4.0, 5.0, 2.0)
    P = bezier_points(X0, XT)
    B, dB = bezier_curve(P, np.array([0.0, 1.0]))
    np.testing.assert_array_equal(B[0], X0[:2])
    np.testing.assert_allclose(B[1], XT[:2], atol=1e-14)
    for row, th in ((0, X0[2]), (1, XT[2])):
        cross = dB[row, 0] * math.sin(th) - dB[row, 1] * math.cos(th)
        assert abs(cross) < 1e-12
        assert dB[row, 0] * math.cos(th) + dB[row, 1] * math.sin(th) > 0


@pytest.mark.parametrize("scale", [0.1, 1 / 3, 1.0, 3.0])
def test_collinear_seed_is_flat(scale):
    alpha = bezier_seed((0, 0, 0), (1, 0, 0), build_mesh(10), scale)
    assert np.all(alpha[:, 1] == 0.0) and np.all(alpha[:, 2] == 0.0)


@given(coord, coord, angle, coord, coord, angle)
def test_seed_boundary_rows_are_exact(x0, y0, th0, x1, y1, th1):
    alpha = bezier_seed((x0, y0, th0), (x1, y1, th1), build_mesh(19))
    assert tuple(alpha[0]) == (x0, y0, th0) and tuple(alpha[-1]) == (x1, y1, th1)


def test_seed_headings_are_continuous():
    # a path that swings through the atan2 branch cut
    alpha = bezier_seed((0, 0, 3.0), (0, -3, -3.0), build_mesh(40))
    assert np.abs(np.diff(alpha[1:-1, 2])).max() < 1.0


def test_coincident_endpoints_fallback():
    mesh = build_mesh(4)
    alpha = bezier_seed((1, 1, 0), (1, 1, 2), mesh)
    np.testing.assert_allclose(alpha[:, 2], 2 * mesh.nodes)
    assert np.all(alpha[:, :2] == 1.0)


def test_handle_scale_must_be_positive():
    with pytest.raises(ValueError):
        bezier_seed((0, 0, 0), (1, 0, 0), build_mesh(2), 0.0)


def test_build_initial_unknowns_fig1():
    mesh = build_mesh(19)
    u = build_initial_unknowns(FIG1, mesh)
    assert tuple(u.alpha[0]) == FIG1.X0 and tuple(u.alpha[-1]) == FIG1.XT
    assert u.T == pytest.approx(math.sqrt(200))
    assert np.all(u.beta_theta == u.beta_theta[0]) and abs(u.beta_theta[0]) == 1.0
    assert u.size == 83


def test_build_initial_unknowns_coincident_endpoints_warns_once():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        u = build_initial_unknowns(ProblemParams((0, 0, 0), (0, 0, 1)), build_mesh(3))
    assert u.T == 1.0
    assert len(caught) == 1
