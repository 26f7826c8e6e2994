"""Pure-Python implementations of the numerical kernels.

These are the reference versions; ``_kernels.pyx`` mirrors them loop for loop.
"""

import math

import numpy as np


def rk4_pmp(state0, lam_x, lam_y, T, mu_v, mu_w, steps):
    """Fixed-step RK4 of (x, y, theta, lambda_theta) over tau in [0, 1].

    Returns an array of shape (steps + 1, 4).
    """
    k = T / (2.0 * mu_v)
    kw = T / (2.0 * mu_w)
    a = lam_x * lam_x - lam_y * lam_y
    p = lam_x * lam_y

    nan4 = (math.nan,) * 4

    def f(th, lt):
        if not math.isfinite(th):  # math.cos raises here; C returns nan, so match it
            return nan4
        c = math.cos(th)
        s = math.sin(th)
        g = lam_x * c + lam_y * s
        return k * g * c, k * g * s, kw * lt, k * (a * c * s + p * (s * s - c * c))

    h = 1.0 / steps
    out = np.empty((steps + 1, 4))
    x, y, th, lt = (float(v) for v in state0)
    out[0] = x, y, th, lt
    for n in range(steps):
        k1 = f(th, lt)
        k2 = f(th + 0.5 * h * k1[2], lt + 0.5 * h * k1[3])
        k3 = f(th + 0.5 * h * k2[2], lt + 0.5 * h * k2[3])
        k4 = f(th + h * k3[2], lt + h * k3[3])
        x += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        y += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        th += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        lt += h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        out[n + 1] = x, y, th, lt
    return out


def _rhs_and_partials(th, lt, lam_x, lam_y, T, mu_v, mu_w):
    # Arrays of shape (..., 4) indexed by equation (x, y, theta, lambda_theta).
    c, s = np.cos(th), np.sin(th)
    g = lam_x * c + lam_y * s
    gp = -lam_x * s + lam_y * c
    k = T / (2.0 * mu_v)
    kw = T / (2.0 * mu_w)
    zero = np.zeros_like(th)
    f = np.stack([k * g * c, k * g * s, kw * lt, -k * g * gp], axis=-1)
    f_th = np.stack([k * (gp * c - g * s), k * (gp * s + g * c), zero, -k * (gp * gp - g * g)], axis=-1)
    f_lt = np.stack([zero, zero, zero + kw, zero], axis=-1)
    f_lx = np.stack([k * c * c, k * c * s, zero, -k * (c * gp - g * s)], axis=-1)
    f_ly = np.stack([k * s * c, k * s * s, zero, -k * (s * gp + g * c)], axis=-1)
    f_T = f / T
    return f, f_th, f_lt, f_lx, f_ly, f_T


def assemble(alpha, lam_x, lam_y, beta, T, nodes, qtau, qw, mu_v, mu_w, mu_T):
    """Galerkin residual ``b``, Hamiltonian residual ``d`` and their Jacobians.

    Row ``4*i + q`` of ``b``/``A`` is equation ``q`` tested against the hat
    function of node ``i``. Columns follow the unknowns layout
    ``[alpha (node-major), lam_x, lam_y, beta, T]``; ``C`` drops the T column.
    """
    N = alpha.shape[0]
    n_el = N - 1
    h = nodes[1:] - nodes[:-1]
    U = np.column_stack([alpha, beta])  # nodal (x, y, theta, lambda_theta)
    s = (qtau - nodes[:-1, None]) / h[:, None]  # local coordinate in [0, 1]
    phi = np.stack([1.0 - s, s], axis=1)  # (n_el, 2, p)
    V = U[:-1, None, :] * phi[:, 0, :, None] + U[1:, None, :] * phi[:, 1, :, None]
    dU = (U[1:] - U[:-1]) / h[:, None]

    f, f_th, f_lt, f_lx, f_ly, f_T = _rhs_and_partials(V[..., 2], V[..., 3], lam_x, lam_y, T, mu_v, mu_w)
    R = dU[:, None, :] - f  # (n_el, p, 4)
    wphi = qw[:, None, :] * phi  # (n_el, 2, p)
    be = np.einsum("eap,epq->eaq", wphi, R)  # (n_el, 2, 4)

    b = np.zeros((N, 4))
    b[:-1] += be[:, 0]
    b[1:] += be[:, 1]

    # local element Jacobian: (element, test node a, equation q, trial node c, field r)
    sw = wphi.sum(axis=2)  # integral of w*phi_a
    Jl = np.zeros((n_el, 2, 4, 2, 4))
    sgn = np.array([-1.0, 1.0])
    for q in range(4):
        Jl[:, :, q, :, q] += sw[:, :, None] * sgn[None, None, :] / h[:, None, None]
    Jl[..., 2] -= np.einsum("eap,ecp,epq->eaqc", wphi, phi, f_th)
    Jl[..., 3] -= np.einsum("eap,ecp,epq->eaqc", wphi, phi, f_lt)
    Jg = -np.stack(
        [np.einsum("eap,epq->eaq", wphi, f_lx),
         np.einsum("eap,epq->eaq", wphi, f_ly),
         np.einsum("eap,epq->eaq", wphi, f_T)],
        axis=-1,
    )  # (n_el, 2, 4, 3)

    n_unk = 4 * N + 3
    A = np.zeros((4 * N, n_unk))
    el = np.arange(n_el)
    for a in range(2):
        rows = 4 * (el + a)
        for c in range(2):
            node = el + c
            for r in range(4):
                cols = 3 * node + r if r < 3 else 3 * N + 2 + node
                for q in range(4):
                    np.add.at(A, (rows + q, cols), Jl[:, a, q, c, r])
        for q in range(4):
            np.add.at(A, (rows + q, 3 * N), Jg[:, a, q, 0])
            np.add.at(A, (rows + q, 3 * N + 1), Jg[:, a, q, 1])
            np.add.at(A, (rows + q, 4 * N + 2), Jg[:, a, q, 2])

    th = alpha[:, 2]
    c, sn = np.cos(th), np.sin(th)
    g = lam_x * c + lam_y * sn
    gp = -lam_x * sn + lam_y * c
    d = g * g / (4.0 * mu_v) + beta * beta / (4.0 * mu_w) - mu_T
    C = np.zeros((N, 4 * N + 2))
    idx = np.arange(N)
    C[idx, 3 * idx + 2] = g * gp / (2.0 * mu_v)
    C[:, 3 * N] = g * c / (2.0 * mu_v)
    C[:, 3 * N + 1] = g * sn / (2.0 * mu_v)
    C[idx, 3 * N + 2 + idx] = beta / (2.0 * mu_w)
    return b.ravel(), A, d, C
