"""Subsequence primitives: longest increasing subsequence and the budgeted
multigroup common subsequence used by the region solvers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from . import _kernels
from .core import InputError


@dataclass(frozen=True)
class LisResult:
    length: int
    indices: tuple[int, ...]


def lis(seq: Sequence[int]) -> LisResult:
    """Longest strictly increasing subsequence via patience sorting.

    Returns the length and the (ascending) indices of one optimal
    subsequence; reconstruction follows the smallest-tail pile back
    references, so the result is deterministic.
    """
    arr = np.asarray(seq, dtype=np.int64)
    if arr.ndim != 1:
        raise InputError("lis expects a 1-d sequence")
    if arr.size == 0:
        return LisResult(0, ())
    idx = _kernels.lis_indices(arr)
    return LisResult(int(idx.shape[0]), tuple(int(i) for i in idx))


def lis_length(seq: Sequence[int]) -> int:
    arr = np.asarray(seq, dtype=np.int64)
    if arr.size == 0:
        return 0
    return int(_kernels.lis_lengths(arr.reshape(1, -1))[0])


def lis_lengths(rows: np.ndarray) -> np.ndarray:
    """Batch LIS lengths, one per row of an integer matrix."""
    mat = np.asarray(rows, dtype=np.int64)
    if mat.ndim != 2:
        raise InputError("lis_lengths expects a 2-d matrix")
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        return np.zeros(mat.shape[0], dtype=np.int64)
    return _kernels.lis_lengths(mat)


@dataclass(frozen=True)
class BudgetedLcsResult:
    """Outcome of the budgeted multigroup common-subsequence DP.

    ``matches`` pairs (pi_position, rho_position, copy); cost counts matches
    with copy >= 1 and never exceeds the budget.
    """

    length: int
    cost: int
    matches: tuple[tuple[int, int, int], ...]


def budgeted_multigroup_lcs(
    pi: Sequence[Hashable],
    rho: Sequence[tuple[Hashable, int]],
    g: int | None,
    budget: int,
) -> BudgetedLcsResult:
    """Maximum-length common subsequence of pi and rho where rho carries
    (tuple_id, copy) entries.

    A rho entry matches the pi entry with the same tuple id. Matching a copy
    >= 1 entry costs one unit of budget, copy 0 is free; each pi entry is
    matched at most once. Among maximum-length matchings the DP prefers the
    smallest total cost (i.e. zero-cost copies).

    When ``g`` is given, rho must be a full augmented sequence: exactly one
    (id, copy) entry per id in pi and copy in 0..g. ``None`` skips the shape
    check and accepts any rho.
    """
    if budget < 0:
        raise InputError("budget must be >= 0")
    pos_of = {t: i for i, t in enumerate(pi)}
    if len(pos_of) != len(pi):
        raise InputError("pi repeats a tuple id")
    n = len(pi)
    if g is not None:
        g = int(g)
        if g < 0:
            raise InputError("group count must be >= 0")
        expected = {(t, c) for t in pi for c in range(g + 1)}
        if len(rho) != len(expected) or expected != {(t, int(c)) for t, c in rho}:
            raise InputError(
                "rho must hold each (id, copy) pair exactly once for copies 0..%d" % g
            )
    pi_pos = np.empty(len(rho), dtype=np.int64)
    costs = np.empty(len(rho), dtype=np.int64)
    for j, (tid, copy) in enumerate(rho):
        if copy < 0:
            raise InputError("copy index must be >= 0")
        try:
            pi_pos[j] = pos_of[tid]
        except KeyError:
            raise InputError("rho id %r not present in pi" % (tid,)) from None
        costs[j] = 0 if copy == 0 else 1
    length, cost, rho_idx = _kernels.budgeted_lcs(pi_pos, costs, n, int(budget))
    matches = tuple(
        (int(pi_pos[j]), int(j), int(rho[j][1])) for j in rho_idx.tolist()
    )
    return BudgetedLcsResult(int(length), int(cost), matches)
