"""Tuples that provably carry a bonus under nonnegative weights.

If some tuple ranked below f matches or beats f in every attribute and
strictly beats it somewhere, no nonnegative weight vector alone can put f
above it, so every bonus assignment must lift f. Once f is known to carry a
strictly positive bonus, a tuple above f whose attributes f merely equals
or beats is forced the same way (it must clear f's lifted score), so the
scan repeats to a fixpoint; records carry the round in which they fired.
Tuples with exactly equal attribute rows never force each other directly,
since the non-strict regime lets them tie.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from .core import Dataset, Ranking, ensure_permutation


@dataclass(frozen=True)
class DominanceRecord:
    forced_id: str
    witness_id: str
    iteration: int


class _Staircase:
    """Pareto maxima of 2D points with queries over x-thresholds.

    Points are kept with x strictly increasing and y strictly decreasing, so
    the maximum y among points with x >= q (or x > q) is the first point at
    or past the threshold.
    """

    def __init__(self) -> None:
        self.xs: list[float] = []
        self.ys: list[float] = []

    def add(self, x: float, y: float) -> None:
        i = bisect_left(self.xs, x)
        if i < len(self.xs) and self.ys[i] >= y:
            return  # weakly dominated, never changes a query
        if i < len(self.xs) and self.xs[i] == x:  # same x, lower y: replace
            del self.xs[i]
            del self.ys[i]
        j = i
        while j > 0 and self.ys[j - 1] <= y:
            j -= 1
        del self.xs[j:i]
        del self.ys[j:i]
        self.xs.insert(j, x)
        self.ys.insert(j, y)

    def max_y_at_least(self, x: float) -> float:
        i = bisect_left(self.xs, x)
        return self.ys[i] if i < len(self.xs) else -np.inf

    def max_y_above(self, x: float) -> float:
        i = bisect_right(self.xs, x)
        return self.ys[i] if i < len(self.xs) else -np.inf


def _strict_round_2d(attrs_pi: np.ndarray) -> np.ndarray:
    """Positions strictly dominated by some lower-ranked tuple, d = 2."""
    n = attrs_pi.shape[0]
    hit = np.zeros(n, dtype=bool)
    stair = _Staircase()
    for p in range(n - 1, -1, -1):
        x, y = float(attrs_pi[p, 0]), float(attrs_pi[p, 1])
        if stair.max_y_at_least(x) > y or stair.max_y_above(x) >= y:
            hit[p] = True
        stair.add(x, y)
    return hit


def _strict_round_pairwise(attrs_pi: np.ndarray) -> np.ndarray:
    """Positions strictly dominated by some lower-ranked tuple, any d."""
    n = attrs_pi.shape[0]
    hit = np.zeros(n, dtype=bool)
    for p in range(n - 1):
        below = attrs_pi[p + 1 :]
        ge = (below >= attrs_pi[p]).all(axis=1)
        if not ge.any():
            continue
        hit[p] = bool((below[ge] > attrs_pi[p]).any())
    return hit


def _weak_round_2d(attrs_pi: np.ndarray, forced: np.ndarray) -> list[int]:
    """Unforced positions weakly dominated by a forced tuple below, d = 2."""
    n = attrs_pi.shape[0]
    stair = _Staircase()
    new = []
    for p in range(n - 1, -1, -1):
        x, y = float(attrs_pi[p, 0]), float(attrs_pi[p, 1])
        if forced[p]:
            stair.add(x, y)
        elif stair.max_y_at_least(x) >= y:
            new.append(p)
    new.reverse()
    return new


def _first_strict_witness(attrs_pi: np.ndarray, p: int) -> int:
    below = attrs_pi[p + 1 :]
    ge = (below >= attrs_pi[p]).all(axis=1)
    strict = (below > attrs_pi[p]).any(axis=1)
    cand = np.nonzero(ge & strict)[0]
    return p + 1 + int(cand[0])


def _first_weak_forced_witness(attrs_pi: np.ndarray, p: int, forced: np.ndarray) -> int:
    below = attrs_pi[p + 1 :]
    ge = (below >= attrs_pi[p]).all(axis=1)
    cand = np.nonzero(ge & forced[p + 1 :])[0]
    return p + 1 + int(cand[0])


def forced_bonus_tuples(dataset: Dataset, ranking: Ranking) -> list[DominanceRecord]:
    """All tuples forced to carry a bonus, with their dominating witnesses.

    The first round finds strict dominations from below; later rounds add
    tuples weakly dominated by an already-forced lower-ranked tuple, until
    nothing changes. Witnesses are the nearest qualifying tuple scanning
    downward. Records are ordered by the forced tuple's rank position.
    """
    ensure_permutation(dataset, ranking)
    n, d = dataset.n, dataset.d
    pi_index = np.array([dataset.index(t) for t in ranking.order])
    attrs_pi = dataset.values[pi_index]

    if d == 2:
        hit = _strict_round_2d(attrs_pi)
    else:
        hit = _strict_round_pairwise(attrs_pi)

    forced = hit.copy()
    iteration = np.zeros(n, dtype=np.int64)
    iteration[hit] = 1
    witness_pos = np.full(n, -1, dtype=np.int64)
    for p in np.nonzero(hit)[0]:
        witness_pos[p] = _first_strict_witness(attrs_pi, int(p))

    round_no = 1
    while True:
        round_no += 1
        if d == 2:
            new = _weak_round_2d(attrs_pi, forced)
        else:
            new = []
            for p in np.nonzero(~forced)[0]:
                below_forced = forced[p + 1 :]
                if not below_forced.any():
                    continue
                ge = (attrs_pi[p + 1 :] >= attrs_pi[p]).all(axis=1)
                if (ge & below_forced).any():
                    new.append(int(p))
        if not new:
            break
        for p in new:
            witness_pos[p] = _first_weak_forced_witness(attrs_pi, p, forced)
            iteration[p] = round_no
        forced[new] = True

    out = []
    for p in np.nonzero(forced)[0]:
        out.append(
            DominanceRecord(
                forced_id=ranking.order[int(p)],
                witness_id=ranking.order[int(witness_pos[p])],
                iteration=int(iteration[p]),
            )
        )
    return out
