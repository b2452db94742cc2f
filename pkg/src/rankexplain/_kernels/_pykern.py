"""Pure lane of the hot kernels (no compiled extension required).

Same algorithms and pivot rules as the Cython lane so both produce the same
answers; see benchmarks/kernel_bench.py for the speed comparison.
"""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

BACKEND_NAME = "pure"


def lis_lengths(mat) -> np.ndarray:
    """Length of the longest strictly increasing subsequence of each row."""
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    rows, _ = mat.shape
    out = np.empty(rows, dtype=np.int64)
    for r in range(rows):
        tails: list[int] = []
        for x in mat[r].tolist():
            k = bisect_left(tails, x)
            if k == len(tails):
                tails.append(x)
            else:
                tails[k] = x
        out[r] = len(tails)
    return out


def lis_indices(seq) -> np.ndarray:
    """Indices (ascending) of one longest strictly increasing subsequence.

    Patience sorting with back references; among optimal subsequences returns
    the one formed by the smallest feasible tail values.
    """
    arr = np.ascontiguousarray(seq, dtype=np.int64)
    n = arr.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    tails: list[int] = []
    tails_idx: list[int] = []
    back = np.full(n, -1, dtype=np.int64)
    vals = arr.tolist()
    for i in range(n):
        x = vals[i]
        k = bisect_left(tails, x)
        if k == len(tails):
            tails.append(x)
            tails_idx.append(i)
        else:
            tails[k] = x
            tails_idx[k] = i
        if k > 0:
            back[i] = tails_idx[k - 1]
    out = []
    j = tails_idx[-1]
    while j != -1:
        out.append(j)
        j = back[j]
    out.reverse()
    return np.asarray(out, dtype=np.int64)


def budgeted_lcs(pi_pos, costs, n: int, budget: int):
    """Budgeted common-subsequence DP between a ranking pi and a sequence rho.

    ``pi_pos[j]`` is the pi-position of rho[j]'s tuple id, ``costs[j]`` is 0
    or 1 (copy with a bonus dimension costs 1). Maximizes matched length with
    total match cost <= budget; ties prefer the smaller cost. Returns
    (length, cost, rho_indices) with rho_indices ascending.
    """
    pi_pos = np.ascontiguousarray(pi_pos, dtype=np.int64)
    costs = np.ascontiguousarray(costs, dtype=np.int64)
    nrho = pi_pos.shape[0]
    k = int(budget)
    if k < 0:
        raise ValueError("budget must be >= 0")
    cells = (nrho + 1) * (n + 1) * (k + 1)
    if cells > 200_000_000:
        raise MemoryError("budgeted LCS table too large: %d cells" % cells)

    width = (n + 1) * (k + 1)
    prev_len = np.zeros(width, dtype=np.int32)
    prev_cost = np.zeros(width, dtype=np.int32)
    cur_len = np.zeros(width, dtype=np.int32)
    cur_cost = np.zeros(width, dtype=np.int32)
    choice = np.zeros((nrho + 1, n + 1, k + 1), dtype=np.uint8)

    pos_list = pi_pos.tolist()
    cost_list = costs.tolist()
    for j in range(1, nrho + 1):
        p = pos_list[j - 1]
        c = cost_list[j - 1]
        cur_len[: k + 1] = prev_len[: k + 1]
        cur_cost[: k + 1] = prev_cost[: k + 1]
        ch_j = choice[j]
        for i in range(1, n + 1):
            base = i * (k + 1)
            ch_i = ch_j[i]
            for b in range(k + 1):
                best_len = prev_len[base + b]
                best_cost = prev_cost[base + b]
                sel = 0
                ln = cur_len[base - (k + 1) + b]
                co = cur_cost[base - (k + 1) + b]
                if ln > best_len or (ln == best_len and co < best_cost):
                    best_len, best_cost, sel = ln, co, 1
                if p == i - 1 and b >= c:
                    ln = prev_len[base - (k + 1) + b - c] + 1
                    co = prev_cost[base - (k + 1) + b - c] + c
                    if ln > best_len or (ln == best_len and co < best_cost):
                        best_len, best_cost, sel = ln, co, 2
                cur_len[base + b] = best_len
                cur_cost[base + b] = best_cost
                ch_i[b] = sel
        prev_len, cur_len = cur_len, prev_len
        prev_cost, cur_cost = cur_cost, prev_cost

    length = int(prev_len[n * (k + 1) + k])
    cost = int(prev_cost[n * (k + 1) + k])
    matches = []
    j, i, b = nrho, n, k
    while j > 0 and i > 0:
        sel = choice[j, i, b]
        if sel == 0:
            j -= 1
        elif sel == 1:
            i -= 1
        else:
            j -= 1
            i -= 1
            matches.append(j)
            b -= cost_list[j]
    matches.reverse()
    return length, cost, np.asarray(matches, dtype=np.int64)


def simplex_pivot_loop(T, basis, tol: float, max_iter: int, bland_after: int):
    """Dense tableau simplex iterations, minimizing the last row.

    T is (m+1, ncols+1) with reduced costs in the last row and the rhs in the
    last column; basis maps each constraint row to its basic column. Pricing
    is Dantzig (most negative reduced cost, lowest index on ties) switching to
    Bland's rule after ``bland_after`` consecutive degenerate pivots, which
    guarantees termination. Returns (status, iterations) with status 0 =
    optimal, 1 = unbounded, 2 = iteration limit. Mutates T and basis.
    """
    T = np.asarray(T)
    m = T.shape[0] - 1
    ncols = T.shape[1] - 1
    bland = False
    streak = 0
    last_obj = T[m, ncols]
    rhs = T[:, ncols]
    for it in range(max_iter):
        obj = T[m, :ncols]
        if bland:
            negs = np.nonzero(obj < -tol)[0]
            if negs.size == 0:
                return 0, it
            col = int(negs[0])
        else:
            col = int(np.argmin(obj))
            if obj[col] >= -tol:
                return 0, it
        colvals = T[:m, col]
        pos = np.nonzero(colvals > tol)[0]
        if pos.size == 0:
            return 1, it
        ratios = rhs[pos] / colvals[pos]
        rmin = ratios.min()
        tied = pos[ratios == rmin]
        if tied.size == 1:
            row = int(tied[0])
        else:
            row = int(tied[np.argmin(basis[tied])])
        piv = T[row, col]
        T[row, :] /= piv
        colcopy = T[:, col].copy()
        colcopy[row] = 0.0
        T -= np.outer(colcopy, T[row, :])
        T[:, col] = 0.0
        T[row, col] = 1.0
        basis[row] = col
        new_obj = T[m, ncols]
        if abs(new_obj - last_obj) <= 1e-12:
            streak += 1
            if streak >= bland_after:
                bland = True
        else:
            streak = 0
        last_obj = new_obj
    return 2, max_iter
