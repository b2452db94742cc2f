"""Linear programming support.

The default engine is a dense two-phase tableau simplex (Dantzig pricing,
switching to Bland's anti-cycling rule after a degenerate streak) whose pivot
loop lives in the kernel lanes. Large sparse models can be routed to
scipy.optimize.linprog (HiGHS) behind the same interface; every optimal
answer is rechecked against the original constraints within FEAS_TOL before
being returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .core import InputError

FEAS_TOL = 1e-8
PIVOT_TOL = 1e-9
INTERIOR_MARGIN = 1e-7
BLAND_AFTER = 12

# auto routing: dense tableau below these sizes, HiGHS above
_DENSE_MAX_ROWS = 350
_DENSE_MAX_CELLS = 400_000


@dataclass
class LinearProgram:
    """min c.x subject to a_ub x <= b_ub, a_eq x = b_eq, bounds per variable.

    ``bounds`` entries are (lo, hi) with None meaning unbounded; the default
    is (0, None) for every variable.
    """

    c: np.ndarray
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    bounds: Sequence[tuple[float | None, float | None]] | None = None


@dataclass
class LpResult:
    status: str  # optimal | infeasible | unbounded | stalled
    x: np.ndarray | None = None
    value: float | None = None
    iterations: int = 0
    message: str = ""


def _parts(lp: LinearProgram):
    c = np.atleast_1d(np.asarray(lp.c, dtype=float))
    nv = c.shape[0]
    if lp.a_ub is not None and len(np.atleast_2d(lp.a_ub)):
        a_ub = np.atleast_2d(np.asarray(lp.a_ub, dtype=float))
        b_ub = np.atleast_1d(np.asarray(lp.b_ub, dtype=float))
    else:
        a_ub = np.zeros((0, nv))
        b_ub = np.zeros(0)
    if lp.a_eq is not None and len(np.atleast_2d(lp.a_eq)):
        a_eq = np.atleast_2d(np.asarray(lp.a_eq, dtype=float))
        b_eq = np.atleast_1d(np.asarray(lp.b_eq, dtype=float))
    else:
        a_eq = np.zeros((0, nv))
        b_eq = np.zeros(0)
    if a_ub.shape[1] != nv or a_eq.shape[1] != nv:
        raise InputError("constraint matrix width does not match c")
    if a_ub.shape[0] != b_ub.shape[0] or a_eq.shape[0] != b_eq.shape[0]:
        raise InputError("constraint rhs length mismatch")
    bounds = list(lp.bounds) if lp.bounds is not None else [(0.0, None)] * nv
    if len(bounds) != nv:
        raise InputError("bounds length mismatch")
    lo = np.array([-math.inf if b[0] is None else float(b[0]) for b in bounds])
    hi = np.array([math.inf if b[1] is None else float(b[1]) for b in bounds])
    return c, a_ub, b_ub, a_eq, b_eq, lo, hi


def _recheck(x, a_ub, b_ub, a_eq, b_eq, lo, hi) -> bool:
    if not np.isfinite(x).all():
        return False
    if a_ub.shape[0]:
        slack = a_ub @ x - b_ub
        if (slack > FEAS_TOL * (1.0 + np.abs(b_ub))).any():
            return False
    if a_eq.shape[0]:
        resid = np.abs(a_eq @ x - b_eq)
        if (resid > FEAS_TOL * (1.0 + np.abs(b_eq))).any():
            return False
    if ((x - hi) > FEAS_TOL * (1.0 + np.abs(np.where(np.isfinite(hi), hi, 0.0)))).any():
        return False
    if ((lo - x) > FEAS_TOL * (1.0 + np.abs(np.where(np.isfinite(lo), lo, 0.0)))).any():
        return False
    return True


def routed_method(lp: LinearProgram, method: str = "auto") -> str:
    """Backend a ``method`` request resolves to for this program."""
    if method != "auto":
        return method
    c, a_ub, _, a_eq, _, lo, hi = _parts(lp)
    rows = a_ub.shape[0] + a_eq.shape[0] + int(np.isfinite(lo).sum() + np.isfinite(hi).sum())
    cols = 2 * c.shape[0] + rows
    return "dense" if rows <= _DENSE_MAX_ROWS and (rows + 1) * (cols + 1) <= _DENSE_MAX_CELLS else "highs"


def solve_lp(lp: LinearProgram, method: str = "auto", max_iter: int | None = None) -> LpResult:
    """Solve an LP. ``method`` is 'dense', 'highs' or 'auto' (size-based)."""
    c, a_ub, b_ub, a_eq, b_eq, lo, hi = _parts(lp)
    if (lo > hi).any():
        return LpResult("infeasible", message="empty variable bound")
    method = routed_method(lp, method)
    if method == "dense":
        res = _solve_dense(c, a_ub, b_ub, a_eq, b_eq, lo, hi, max_iter)
    elif method == "highs":
        res = _solve_highs(c, a_ub, b_ub, a_eq, b_eq, lo, hi, max_iter)
    else:
        raise InputError("unknown LP method %r" % (method,))
    if res.status == "optimal" and not _recheck(res.x, a_ub, b_ub, a_eq, b_eq, lo, hi):
        return LpResult("stalled", iterations=res.iterations, message="solution failed feasibility recheck")
    return res


def _solve_highs(c, a_ub, b_ub, a_eq, b_eq, lo, hi, max_iter):
    from scipy.optimize import linprog

    bounds = [(l if math.isfinite(l) else None, h if math.isfinite(h) else None) for l, h in zip(lo, hi)]
    options = {
        "presolve": True,
        # the backend default (1e-7) is looser than the recheck standard;
        # ask for a tenth of FEAS_TOL so returned solutions pass it
        "primal_feasibility_tolerance": 0.1 * FEAS_TOL,
        "dual_feasibility_tolerance": 0.1 * FEAS_TOL,
    }
    if max_iter is not None:
        options["maxiter"] = int(max_iter)
    res = linprog(
        c,
        A_ub=a_ub if a_ub.shape[0] else None,
        b_ub=b_ub if b_ub.shape[0] else None,
        A_eq=a_eq if a_eq.shape[0] else None,
        b_eq=b_eq if b_eq.shape[0] else None,
        bounds=bounds,
        method="highs",
        options=options,
    )
    status = {0: "optimal", 1: "stalled", 2: "infeasible", 3: "unbounded"}.get(res.status, "stalled")
    if status == "optimal":
        return LpResult("optimal", np.asarray(res.x, dtype=float), float(res.fun), int(res.nit or 0))
    return LpResult(status, iterations=int(res.nit or 0), message=str(res.message))


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    piv = T[row, col]
    T[row, :] /= piv
    colcopy = T[:, col].copy()
    colcopy[row] = 0.0
    T -= np.outer(colcopy, T[row, :])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _solve_dense(c, a_ub, b_ub, a_eq, b_eq, lo, hi, max_iter):
    nv = c.shape[0]

    # substitute variables so the standard form only has y >= 0
    off = np.zeros(nv)
    col_var: list[tuple[int, float]] = []
    extra_caps: list[tuple[int, float]] = []  # (y column, upper cap)
    for j in range(nv):
        if math.isfinite(lo[j]):
            off[j] = lo[j]
            col_var.append((j, 1.0))
            if math.isfinite(hi[j]):
                extra_caps.append((len(col_var) - 1, hi[j] - lo[j]))
        elif math.isfinite(hi[j]):
            off[j] = hi[j]
            col_var.append((j, -1.0))
        else:
            col_var.append((j, 1.0))
            col_var.append((j, -1.0))
    ny = len(col_var)
    S = np.zeros((nv, ny))
    for k, (j, sgn) in enumerate(col_var):
        S[j, k] = sgn

    aub_y = a_ub @ S
    bub_y = b_ub - a_ub @ off
    if extra_caps:
        cap_rows = np.zeros((len(extra_caps), ny))
        cap_rhs = np.empty(len(extra_caps))
        for r, (k, cap) in enumerate(extra_caps):
            cap_rows[r, k] = 1.0
            cap_rhs[r] = cap
        aub_y = np.vstack([aub_y, cap_rows])
        bub_y = np.concatenate([bub_y, cap_rhs])
    aeq_y = a_eq @ S
    beq_y = b_eq - a_eq @ off

    m1 = aub_y.shape[0]
    m2 = aeq_y.shape[0]
    m = m1 + m2

    # equalities with slacks on the <= rows, then flip rows to rhs >= 0
    A = np.zeros((m, ny + m1))
    rhs = np.concatenate([bub_y, beq_y])
    A[:m1, :ny] = aub_y
    A[:m1, ny : ny + m1] = np.eye(m1)
    A[m1:, :ny] = aeq_y
    needs_art = np.zeros(m, dtype=bool)
    needs_art[m1:] = True
    for r in range(m):
        if rhs[r] < 0:
            A[r, :] = -A[r, :]
            rhs[r] = -rhs[r]
            if r < m1:
                needs_art[r] = True
    art_rows = np.nonzero(needs_art)[0]
    n_art = art_rows.shape[0]
    ncols1 = ny + m1 + n_art

    T = np.zeros((m + 1, ncols1 + 1))
    T[:m, : ny + m1] = A
    T[:m, ncols1] = rhs
    basis = np.empty(m, dtype=np.int64)
    for r in range(m):
        basis[r] = ny + r if not needs_art[r] else 0  # artificial filled below
    for a, r in enumerate(art_rows):
        T[r, ny + m1 + a] = 1.0
        basis[r] = ny + m1 + a

    cap = max_iter if max_iter is not None else 200 + 50 * (m + ncols1)
    iters = 0
    if n_art:
        # phase 1: price out the artificial basis
        T[m, : ny + m1] = -T[art_rows, : ny + m1].sum(axis=0)
        T[m, ncols1] = -rhs[art_rows].sum()
        status, it1 = _kernels.simplex_pivot_loop(T, basis, PIVOT_TOL, cap, BLAND_AFTER)
        iters += it1
        if status == 2:
            return LpResult("stalled", iterations=iters, message="phase 1 iteration limit")
        z1 = -T[m, ncols1]
        # scale the acceptance threshold by the artificial rows alone: huge
        # rhs values on slack-only rows (e.g. box caps) must not mask a small
        # genuine infeasibility in the equality/flipped rows
        art_scale = float(np.abs(rhs[art_rows]).max(initial=0.0))
        if z1 > FEAS_TOL * (1.0 + art_scale):
            return LpResult("infeasible", iterations=iters)
        # drive leftover artificials out of the basis, drop redundant rows
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] >= ny + m1:
                sub = np.abs(T[r, : ny + m1])
                j = int(np.argmax(sub))
                if sub[j] > PIVOT_TOL:
                    _pivot(T, basis, r, j)
                else:
                    keep[r] = False
        rows_idx = np.nonzero(keep)[0]
        T2 = np.empty((rows_idx.shape[0] + 1, ny + m1 + 1))
        T2[:-1, : ny + m1] = T[rows_idx, : ny + m1]
        T2[:-1, -1] = T[rows_idx, ncols1]
        basis = basis[rows_idx].copy()
        m = rows_idx.shape[0]
        T = T2
    ncols2 = ny + m1

    c_ext = np.zeros(ncols2 + 1)
    c_ext[:ny] = c @ S
    T[m, :] = c_ext
    for r in range(m):
        cb = c_ext[basis[r]]
        if cb != 0.0:
            T[m, :] -= cb * T[r, :]
    status, it2 = _kernels.simplex_pivot_loop(T, basis, PIVOT_TOL, cap, BLAND_AFTER)
    iters += it2
    if status == 2:
        return LpResult("stalled", iterations=iters, message="phase 2 iteration limit")
    if status == 1:
        return LpResult("unbounded", iterations=iters)
    y = np.zeros(ncols2)
    y[basis] = T[:m, -1]
    x = off + S @ np.maximum(y[:ny], 0.0)
    return LpResult("optimal", x, float(c @ x), iters)


def interior_witness(
    normals: np.ndarray,
    signs: Sequence[int],
    dim: int,
    positive_dims: Sequence[int] = (),
    norm_cap: float = 1.0,
    margin_floor: float = INTERIOR_MARGIN,
    max_iter: int | None = None,
) -> tuple[np.ndarray | None, float]:
    """Max-margin point of an open cell of a central arrangement.

    Maximizes s subject to sign_i * (n_i / |n_i|_2) . w >= s for every
    hyperplane, w_j >= s on the given positive dimensions, and |w|_1 <=
    norm_cap. Returns (w, margin) with w rescaled to unit 1-norm. w is None
    when the best achievable margin is <= margin_floor; the margin is still
    reported so callers can tell a thin cell (margin > 0) from an empty one.
    """
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    mhyp = normals.shape[0] if normals.size else 0
    if mhyp and normals.shape[1] != dim:
        raise InputError("normal dimension mismatch")
    signs = np.asarray(signs, dtype=float)
    if signs.shape != (mhyp,):
        raise InputError("signs length mismatch")
    pos = sorted(set(int(j) for j in positive_dims))
    if any(j < 0 or j >= dim for j in pos):
        raise InputError("positive dimension out of range")
    if mhyp == 0 and not pos:
        raise InputError("witness requires at least one hyperplane or positive dimension")

    pos_set = set(pos)
    free = [j for j in range(dim) if j not in pos_set]
    # variables: u_j (all dims, >= 0), v_j (free dims only, >= 0), s (<= 1)
    nfree = len(free)
    nv = dim + nfree + 1
    s_col = nv - 1
    vcol = {j: dim + t for t, j in enumerate(free)}

    rows = []
    rhs = []
    if mhyp:
        norms = np.linalg.norm(normals, axis=1)
        if (norms <= 0).any():
            raise InputError("degenerate hyperplane normal")
        unit = normals / norms[:, None]
        for i in range(mhyp):
            row = np.zeros(nv)
            coeff = -signs[i] * unit[i]
            row[:dim] = coeff
            for j in free:
                row[vcol[j]] = -coeff[j]
            row[s_col] = 1.0
            rows.append(row)
            rhs.append(0.0)
    for j in pos:
        row = np.zeros(nv)
        row[j] = -1.0
        row[s_col] = 1.0
        rows.append(row)
        rhs.append(0.0)
    cap_row = np.zeros(nv)
    cap_row[: dim + nfree] = 1.0
    rows.append(cap_row)
    rhs.append(float(norm_cap))

    c = np.zeros(nv)
    c[s_col] = -1.0
    bounds = [(0.0, None)] * (dim + nfree) + [(None, 1.0)]
    res = solve_lp(
        LinearProgram(c, np.array(rows), np.array(rhs), bounds=bounds),
        method="dense",
        max_iter=max_iter,
    )
    if res.status != "optimal":
        return None, float("nan")
    margin = -res.value
    if margin <= margin_floor:
        return None, margin
    w = res.x[:dim].copy()
    for j in free:
        w[j] -= res.x[vcol[j]]
    scale = float(np.abs(w).sum())
    if scale <= 0.0:
        return None, margin
    w /= scale
    return w, margin / scale
