# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``; same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


cdef inline void _f(double th, double lt, double lx, double ly, double k, double kw,
                    double a, double p, double* out) noexcept nogil:
    cdef double c = cos(th)
    cdef double s = sin(th)
    cdef double g = lx * c + ly * s
    out[0] = k * g * c
    out[1] = k * g * s
    out[2] = kw * lt
    out[3] = k * (a * c * s + p * (s * s - c * c))


def rk4_pmp(state0, double lam_x, double lam_y, double T, double mu_v, double mu_w, int steps):
    cdef double k = T / (2.0 * mu_v)
    cdef double kw = T / (2.0 * mu_w)
    cdef double a = lam_x * lam_x - lam_y * lam_y
    cdef double p = lam_x * lam_y
    cdef double h = 1.0 / steps
    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double x = state0[0], y = state0[1], th = state0[2], lt = state0[3]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.empty((steps + 1, 4))
    cdef double[:, ::1] out = arr
    cdef int n
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = th
    out[0, 3] = lt
    with nogil:
        for n in range(steps):
            _f(th, lt, lam_x, lam_y, k, kw, a, p, k1)
            _f(th + 0.5 * h * k1[2], lt + 0.5 * h * k1[3], lam_x, lam_y, k, kw, a, p, k2)
            _f(th + 0.5 * h * k2[2], lt + 0.5 * h * k2[3], lam_x, lam_y, k, kw, a, p, k3)
            _f(th + h * k3[2], lt + h * k3[3], lam_x, lam_y, k, kw, a, p, k4)
            x += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            y += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            th += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
            lt += h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
            out[n + 1, 0] = x
            out[n + 1, 1] = y
            out[n + 1, 2] = th
            out[n + 1, 3] = lt
    return arr


def assemble(alpha_in, double lam_x, double lam_y, beta_in, double T, nodes_in, qtau_in, qw_in,
             double mu_v, double mu_w, double mu_T):
    cdef const double[:, ::1] alpha = np.ascontiguousarray(alpha_in, dtype=np.float64)
    cdef const double[::1] beta = np.ascontiguousarray(beta_in, dtype=np.float64)
    cdef const double[::1] nodes = np.ascontiguousarray(nodes_in, dtype=np.float64)
    cdef const double[:, ::1] qtau = np.ascontiguousarray(qtau_in, dtype=np.float64)
    cdef const double[:, ::1] qw = np.ascontiguousarray(qw_in, dtype=np.float64)
    cdef Py_ssize_t N = alpha.shape[0]
    cdef Py_ssize_t n_el = N - 1
    cdef Py_ssize_t npts = qtau.shape[1]
    cdef Py_ssize_t n_unk = 4 * N + 3
    cdef Py_ssize_t col_lx = 3 * N, col_ly = 3 * N + 1, col_T = 4 * N + 2

    b_arr = np.zeros(4 * N)
    A_arr = np.zeros((4 * N, n_unk))
    d_arr = np.zeros(N)
    C_arr = np.zeros((N, 4 * N + 2))
    cdef double[::1] b = b_arr
    cdef double[:, ::1] A = A_arr
    cdef double[::1] d = d_arr
    cdef double[:, ::1] C = C_arr

    cdef double k = T / (2.0 * mu_v)
    cdef double kw = T / (2.0 * mu_w)
    cdef double U0[4]
    cdef double U1[4]
    cdef double dU[4]
    cdef double V[4]
    cdef double f[4]
    cdef double fth[4]
    cdef double flx[4]
    cdef double fly[4]
    cdef double phi[2]
    cdef double sw[2]
    cdef long cols[2][4]
    cdef Py_ssize_t e, qp, ia, ic, q, r, row
    cdef double h, s, w, c, sn, g, gp, th, lt, wa, wab

    with nogil:
        for e in range(n_el):
            h = nodes[e + 1] - nodes[e]
            for r in range(3):
                U0[r] = alpha[e, r]
                U1[r] = alpha[e + 1, r]
                cols[0][r] = 3 * e + r
                cols[1][r] = 3 * (e + 1) + r
            U0[3] = beta[e]
            U1[3] = beta[e + 1]
            cols[0][3] = 3 * N + 2 + e
            cols[1][3] = 3 * N + 2 + e + 1
            for r in range(4):
                dU[r] = (U1[r] - U0[r]) / h
            sw[0] = 0.0
            sw[1] = 0.0
            for qp in range(npts):
                s = (qtau[e, qp] - nodes[e]) / h
                w = qw[e, qp]
                phi[0] = 1.0 - s
                phi[1] = s
                for r in range(4):
                    V[r] = U0[r] * phi[0] + U1[r] * phi[1]
                th = V[2]
                lt = V[3]
                c = cos(th)
                sn = sin(th)
                g = lam_x * c + lam_y * sn
                gp = -lam_x * sn + lam_y * c
                f[0] = k * g * c
                f[1] = k * g * sn
                f[2] = kw * lt
                f[3] = -k * g * gp
                fth[0] = k * (gp * c - g * sn)
                fth[1] = k * (gp * sn + g * c)
                fth[2] = 0.0
                fth[3] = -k * (gp * gp - g * g)
                flx[0] = k * c * c
                flx[1] = k * c * sn
                flx[2] = 0.0
                flx[3] = -k * (c * gp - g * sn)
                fly[0] = k * sn * c
                fly[1] = k * sn * sn
                fly[2] = 0.0
                fly[3] = -k * (sn * gp + g * c)
                for ia in range(2):
                    wa = w * phi[ia]
                    sw[ia] += wa
                    row = 4 * (e + ia)
                    for q in range(4):
                        b[row + q] += wa * (dU[q] - f[q])
                        A[row + q, col_lx] -= wa * flx[q]
                        A[row + q, col_ly] -= wa * fly[q]
                        A[row + q, col_T] -= wa * f[q] / T
                        for ic in range(2):
                            wab = wa * phi[ic]
                            A[row + q, cols[ic][2]] -= wab * fth[q]
                        if q == 2:
                            for ic in range(2):
                                A[row + q, cols[ic][3]] -= wa * phi[ic] * kw
            for ia in range(2):
                row = 4 * (e + ia)
                for q in range(4):
                    A[row + q, cols[0][q]] -= sw[ia] / h
                    A[row + q, cols[1][q]] += sw[ia] / h

        for ia in range(N):
            th = alpha[ia, 2]
            c = cos(th)
            sn = sin(th)
            g = lam_x * c + lam_y * sn
            gp = -lam_x * sn + lam_y * c
            d[ia] = g * g / (4.0 * mu_v) + beta[ia] * beta[ia] / (4.0 * mu_w) - mu_T
            C[ia, 3 * ia + 2] = g * gp / (2.0 * mu_v)
            C[ia, col_lx] = g * c / (2.0 * mu_v)
            C[ia, col_ly] = g * sn / (2.0 * mu_v)
            C[ia, 3 * N + 2 + ia] = beta[ia] / (2.0 * mu_w)
    return b_arr, A_arr, d_arr, C_arr
