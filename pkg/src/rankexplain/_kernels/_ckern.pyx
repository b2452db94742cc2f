# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lane of the hot kernels. Mirrors _pykern: same algorithms, same
pivot and tie-break rules, typed loops instead of numpy row operations."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


def lis_lengths(mat):
    """Length of the longest strictly increasing subsequence of each row."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode='c'] m = np.ascontiguousarray(mat, dtype=np.int64)
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t n = m.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] out = np.empty(rows, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] tails = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t r, i, lo, hi, mid, size
    cdef cnp.int64_t x
    for r in range(rows):
        size = 0
        for i in range(n):
            x = m[r, i]
            lo = 0
            hi = size
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] < x:
                    lo = mid + 1
                else:
                    hi = mid
            tails[lo] = x
            if lo == size:
                size += 1
        out[r] = size
    return out


def lis_indices(seq):
    """Indices (ascending) of one longest strictly increasing subsequence."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] arr = np.ascontiguousarray(seq, dtype=np.int64)
    cdef Py_ssize_t n = arr.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] tails = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] tails_idx = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] back = np.full(n, -1, dtype=np.int64)
    cdef Py_ssize_t i, lo, hi, mid, size = 0
    cdef cnp.int64_t x
    for i in range(n):
        x = arr[i]
        lo = 0
        hi = size
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = x
        tails_idx[lo] = i
        if lo == size:
            size += 1
        if lo > 0:
            back[i] = tails_idx[lo - 1]
    out = []
    cdef cnp.int64_t j = tails_idx[size - 1]
    while j != -1:
        out.append(j)
        j = back[j]
    out.reverse()
    return np.asarray(out, dtype=np.int64)


def budgeted_lcs(pi_pos, costs, long n, long budget):
    """Budgeted common-subsequence DP; see the pure lane for the contract."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] pp = np.ascontiguousarray(pi_pos, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] cc = np.ascontiguousarray(costs, dtype=np.int64)
    cdef Py_ssize_t nrho = pp.shape[0]
    cdef long k = budget
    if k < 0:
        raise ValueError("budget must be >= 0")
    if (nrho + 1) * (n + 1) * (k + 1) > 200_000_000:
        raise MemoryError("budgeted LCS table too large")

    cdef Py_ssize_t width = (n + 1) * (k + 1)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode='c'] prev_len = np.zeros(width, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode='c'] prev_cost = np.zeros(width, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode='c'] cur_len = np.zeros(width, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode='c'] cur_cost = np.zeros(width, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=3, mode='c'] choice = np.zeros((nrho + 1, n + 1, k + 1), dtype=np.uint8)

    cdef Py_ssize_t j, i, b, base
    cdef long p, c
    cdef cnp.int32_t best_len, best_cost, ln, co
    cdef cnp.uint8_t sel
    for j in range(1, nrho + 1):
        p = pp[j - 1]
        c = cc[j - 1]
        for b in range(k + 1):
            cur_len[b] = prev_len[b]
            cur_cost[b] = prev_cost[b]
        for i in range(1, n + 1):
            base = i * (k + 1)
            for b in range(k + 1):
                best_len = prev_len[base + b]
                best_cost = prev_cost[base + b]
                sel = 0
                ln = cur_len[base - (k + 1) + b]
                co = cur_cost[base - (k + 1) + b]
                if ln > best_len or (ln == best_len and co < best_cost):
                    best_len = ln
                    best_cost = co
                    sel = 1
                if p == i - 1 and b >= c:
                    ln = prev_len[base - (k + 1) + b - c] + 1
                    co = prev_cost[base - (k + 1) + b - c] + <cnp.int32_t> c
                    if ln > best_len or (ln == best_len and co < best_cost):
                        best_len = ln
                        best_cost = co
                        sel = 2
                cur_len[base + b] = best_len
                cur_cost[base + b] = best_cost
                choice[j, i, b] = sel
        prev_len, cur_len = cur_len, prev_len
        prev_cost, cur_cost = cur_cost, prev_cost

    cdef long length = prev_len[n * (k + 1) + k]
    cdef long cost = prev_cost[n * (k + 1) + k]
    matches = []
    cdef Py_ssize_t wj = nrho, wi = n, wb = k
    while wj > 0 and wi > 0:
        sel = choice[wj, wi, wb]
        if sel == 0:
            wj -= 1
        elif sel == 1:
            wi -= 1
        else:
            wj -= 1
            wi -= 1
            matches.append(wj)
            wb -= cc[wj]
    matches.reverse()
    return length, cost, np.asarray(matches, dtype=np.int64)


def simplex_pivot_loop(object Tobj, object basis_obj, double tol, long max_iter, long bland_after):
    """Dense tableau simplex iterations; see the pure lane for the contract."""
    cdef double[:, ::1] T = Tobj
    cdef cnp.int64_t[::1] basis = basis_obj
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t ncols = T.shape[1] - 1
    cdef bint bland = False
    cdef long streak = 0
    cdef long it
    cdef double last_obj = T[m, ncols]
    cdef double best, ratio, rmin, piv, f, new_obj, d
    cdef Py_ssize_t col, row, r, j
    for it in range(max_iter):
        col = -1
        if bland:
            for j in range(ncols):
                if T[m, j] < -tol:
                    col = j
                    break
            if col < 0:
                return 0, it
        else:
            best = T[m, 0]
            col = 0
            for j in range(1, ncols):
                if T[m, j] < best:
                    best = T[m, j]
                    col = j
            if best >= -tol:
                return 0, it
        row = -1
        rmin = 0.0
        for r in range(m):
            if T[r, col] > tol:
                ratio = T[r, ncols] / T[r, col]
                if row < 0 or ratio < rmin or (ratio == rmin and basis[r] < basis[row]):
                    row = r
                    rmin = ratio
        if row < 0:
            return 1, it
        piv = T[row, col]
        for j in range(ncols + 1):
            T[row, j] /= piv
        for r in range(m + 1):
            if r == row:
                continue
            f = T[r, col]
            if f != 0.0:
                for j in range(ncols + 1):
                    T[r, j] -= f * T[row, j]
        for r in range(m + 1):
            T[r, col] = 0.0
        T[row, col] = 1.0
        basis[row] = col
        new_obj = T[m, ncols]
        d = new_obj - last_obj
        if -1e-12 <= d <= 1e-12:
            streak += 1
            if streak >= bland_after:
                bland = True
        else:
            streak = 0
        last_obj = new_obj
    return 2, max_iter
