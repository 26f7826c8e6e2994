"""Box-constrained least absolute deviations by a bounded-variable simplex.

Solves::

    minimize    || r + M @ delta ||_1
    subject to  lower <= delta <= upper      (lower <= 0 <= upper)

by writing ``r + M delta = p - q`` with ``p, q >= 0``. The entries of
``delta`` start nonbasic at zero (inside their box) and the residual slacks
form the initial basis, so the first basic solution is ``delta = 0`` and every
pivot keeps the objective non-increasing.
"""

from __future__ import annotations

import numpy as np


class SubproblemError(RuntimeError):
    """The simplex method failed (pivot limit or numerical breakdown)."""


_PIVOT_TOL = 1e-9
_OPT_TOL = 1e-10
_REFACTOR_EVERY = 64
_STALL_LIMIT = 30


def l1_objective(M, r, delta) -> float:
    return float(np.abs(r + M @ delta).sum())


def solve_l1_box(M, r, lower, upper, max_pivots: int | None = None):
    """Return ``(delta, objective)`` minimizing ``||r + M delta||_1`` over the box."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    r = np.asarray(r, dtype=float).ravel()
    m, n = M.shape
    lower = np.broadcast_to(np.asarray(lower, dtype=float), (n,))
    upper = np.broadcast_to(np.asarray(upper, dtype=float), (n,))
    if r.shape != (m,):
        raise ValueError(f"residual has length {r.size}, expected {m}")
    if np.any(lower > 0) or np.any(upper < 0):
        raise ValueError("the box must contain delta = 0")
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(r))):
        raise SubproblemError("non-finite data in the subproblem")

    free = np.flatnonzero(upper - lower > 0)
    nf = free.size
    Mf = M[:, free]
    ncols = nf + 2 * m
    lo = np.concatenate([lower[free], np.zeros(2 * m)])
    ub = np.concatenate([upper[free], np.full(2 * m, np.inf)])
    cost = np.concatenate([np.zeros(nf), np.ones(2 * m)])

    def column(j):
        if j < nf:
            return Mf[:, j]
        e = np.zeros(m)
        e[(j - nf) % m] = -1.0 if j < nf + m else 1.0
        return e

    rows = np.arange(m)
    basis = np.where(r >= 0, nf + rows, nf + m + rows)
    Binv = np.diag(np.where(r >= 0, -1.0, 1.0))
    xB = np.abs(r)
    is_basic = np.zeros(ncols, dtype=bool)
    is_basic[basis] = True
    # values of nonbasic variables; delta starts at 0, strictly inside its box
    xN = np.zeros(ncols)

    if max_pivots is None:
        max_pivots = 50 * (m + ncols) + 1000
    since_refactor = 0
    stall = 0
    bland = False
    obj = float(xB.sum())

    def refactor():
        B = np.column_stack([column(k) for k in basis])
        try:
            inv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SubproblemError("singular basis during refactorization") from exc
        nb = np.flatnonzero(~is_basic & (xN != 0.0))
        rhs = -r - Mf[:, nb[nb < nf]] @ xN[nb[nb < nf]]
        return inv, inv @ rhs

    for _ in range(max_pivots):
        y = cost[basis] @ Binv
        red = np.concatenate([-(y @ Mf), 1.0 + y, 1.0 - y])
        can_up = ~is_basic & (xN < ub - _PIVOT_TOL) & (red < -_OPT_TOL)
        can_down = ~is_basic & (xN > lo + _PIVOT_TOL) & (red > _OPT_TOL)
        eligible = can_up | can_down
        if not eligible.any():
            break
        if bland:
            j = int(np.flatnonzero(eligible)[0])
        else:
            j = int(np.argmax(np.where(eligible, np.abs(red), -np.inf)))
        direction = 1.0 if can_up[j] else -1.0
        alpha = Binv @ column(j)
        move = direction * alpha  # x_B changes by -t * move

        t_flip = ub[j] - xN[j] if direction > 0 else xN[j] - lo[j]
        loB, ubB = lo[basis], ub[basis]
        dec = move > _PIVOT_TOL
        inc = (move < -_PIVOT_TOL) & np.isfinite(ubB)
        room_dec = np.maximum(xB - loB, 0.0)
        room_inc = np.maximum(ubB - xB, 0.0)
        exact = np.full(m, np.inf)
        exact[dec] = room_dec[dec] / move[dec]
        exact[inc] = room_inc[inc] / -move[inc]
        t_row = np.inf
        leave = -1
        if bland:
            if m and exact.min() < np.inf:
                t_row = exact.min()
                ties = np.flatnonzero(exact <= t_row + 1e-12)
                leave = int(ties[np.argmin(basis[ties])])
        else:
            # Harris two-pass ratio test
            relaxed = np.full(m, np.inf)
            relaxed[dec] = (room_dec[dec] + 1e-9) / move[dec]
            relaxed[inc] = (room_inc[inc] + 1e-9) / -move[inc]
            if m and relaxed.min() < np.inf:
                cand = np.flatnonzero(exact <= relaxed.min())
                leave = int(cand[np.argmax(np.abs(move[cand]))])
                t_row = exact[leave]

        if t_flip <= t_row:
            if not np.isfinite(t_flip):
                raise SubproblemError("unbounded direction in an L1 subproblem")
            xB -= t_flip * move
            xN[j] = ub[j] if direction > 0 else lo[j]
        else:
            xB -= t_row * move
            out = basis[leave]
            is_basic[out] = False
            xN[out] = ub[out] if inc[leave] else lo[out]
            is_basic[j] = True
            basis[leave] = j
            xB[leave] = xN[j] + direction * t_row
            xN[j] = 0.0
            row = Binv[leave] / alpha[leave]
            Binv -= np.outer(alpha, row)
            Binv[leave] = row
            since_refactor += 1
            if since_refactor >= _REFACTOR_EVERY:
                Binv, xB = refactor()
                since_refactor = 0

        new_obj = float(cost[basis] @ xB)
        if new_obj < obj - 1e-12 * max(1.0, obj):
            stall = 0
            bland = False
        else:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
        obj = new_obj
    else:
        raise SubproblemError(f"simplex pivot limit ({max_pivots}) reached")

    values = xN.copy()
    values[basis] = xB
    delta = np.zeros(n)
    delta[free] = values[:nf]
    delta = np.clip(delta, lower, upper)
    objective = l1_objective(M, r, delta)
    base = float(np.abs(r).sum())
    if objective > base:
        # round-off can only make the extracted point marginally worse than delta = 0
        delta = np.zeros(n)
        objective = base
    return delta, objective


def trust_radii_vector(n_nodes: int, rho_s: float, rho_q: float, rho_T: float) -> np.ndarray:
    """Per-variable trust radius in the unknowns layout of ``residual``."""
    return np.concatenate([np.full(3 * n_nodes, rho_s), np.full(n_nodes + 2, rho_q), [rho_T]])


def solve_subproblem(A, b, C=None, d=None, radii=1.0, fixed_indices=()):
    """Linearized SCP step.

    Minimizes ``||b + A delta||_1 + ||d + C delta'||_1`` where ``delta'`` is
    ``delta`` without its last (final time) entry when ``C`` has one column
    fewer than ``A``. ``radii`` is a scalar or per-variable array; the entries
    listed in ``fixed_indices`` are held at zero.

    Returns ``(delta, objective)``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    n = A.shape[1]
    M, r = A, b
    if C is not None:
        C = np.atleast_2d(np.asarray(C, dtype=float))
        d = np.asarray(d, dtype=float).ravel()
        if C.shape[1] == n - 1:
            C = np.hstack([C, np.zeros((C.shape[0], 1))])
        elif C.shape[1] != n:
            raise ValueError(f"C has {C.shape[1]} columns, expected {n} or {n - 1}")
        M = np.vstack([A, C])
        r = np.concatenate([b, d])
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (n,)).copy()
    if np.any(radii <= 0):
        raise ValueError("trust radii must be positive")
    lower, upper = -radii, radii.copy()
    fixed = np.asarray(fixed_indices, dtype=int)
    lower[fixed] = 0.0
    upper[fixed] = 0.0
    return solve_l1_box(M, r, lower, upper)
