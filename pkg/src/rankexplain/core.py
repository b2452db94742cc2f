"""Core data model: datasets, rankings, explanations, scoring, verification.

Conventions used throughout the package:

* attribute values are numeric and larger is better (use
  :func:`normalize_dataset` to flip smaller-is-better columns);
* a ranking lists tuple ids best first, position 0 is the top;
* score ties are broken by ascending lexicographic id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

# Default slack for score comparisons in the verifier.
DEFAULT_TOL = 1e-9


class InputError(ValueError):
    """Malformed dataset, ranking, explanation or solver argument."""


def _as_float_matrix(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise InputError("values must be a 2-d array, got shape %r" % (arr.shape,))
    return arr


@dataclass(frozen=True)
class Dataset:
    """A set of tuples with named numeric attributes.

    ``group_labels`` optionally records a label per tuple (planted group
    membership, '' or None meaning no group); it is carried through I/O but
    never consulted by solvers.
    """

    ids: tuple[str, ...]
    attributes: tuple[str, ...]
    values: np.ndarray
    group_labels: tuple[str | None, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        object.__setattr__(self, "attributes", tuple(str(a) for a in self.attributes))
        arr = _as_float_matrix(self.values)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if len(set(self.ids)) != len(self.ids):
            raise InputError("duplicate tuple ids")
        if arr.shape != (len(self.ids), len(self.attributes)):
            raise InputError(
                "values shape %r does not match %d ids x %d attributes"
                % (arr.shape, len(self.ids), len(self.attributes))
            )
        if not np.isfinite(arr).all():
            raise InputError("attribute values must be finite")
        if self.group_labels is not None:
            labels = tuple(None if g in (None, "") else str(g) for g in self.group_labels)
            if len(labels) != len(self.ids):
                raise InputError("group_labels length mismatch")
            object.__setattr__(self, "group_labels", labels)
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.ids)})

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def d(self) -> int:
        return len(self.attributes)

    def index(self, tuple_id: str) -> int:
        try:
            return self._index[tuple_id]
        except KeyError:
            raise InputError("unknown tuple id %r" % (tuple_id,)) from None

    def row(self, tuple_id: str) -> np.ndarray:
        return self.values[self.index(tuple_id)]


@dataclass(frozen=True)
class Ranking:
    """A total order over tuple ids, best first."""

    order: tuple[str, ...]

    def __post_init__(self):
        order = tuple(str(i) for i in self.order)
        object.__setattr__(self, "order", order)
        pos = {t: i for i, t in enumerate(order)}
        if len(pos) != len(order):
            raise InputError("ranking repeats a tuple id")
        object.__setattr__(self, "_pos", pos)

    def __len__(self) -> int:
        return len(self.order)

    def position(self, tuple_id: str) -> int:
        try:
            return self._pos[tuple_id]
        except KeyError:
            raise InputError("id %r not in ranking" % (tuple_id,)) from None

    def __contains__(self, tuple_id: str) -> bool:
        return tuple_id in self._pos


def ensure_permutation(dataset: Dataset, ranking: Ranking) -> None:
    """Raise InputError unless the ranking is a permutation of the dataset ids."""
    if len(ranking) != dataset.n or any(t not in ranking for t in dataset.ids):
        raise InputError("ranking is not a permutation of the dataset ids")


@dataclass(frozen=True)
class Regime:
    """Realization regime an explanation claims.

    ``non-strict`` requires scores along the ranking to be non-increasing;
    ``strict`` requires every consecutive gap to be at least ``epsilon``.
    """

    kind: str = "non-strict"
    epsilon: float = 0.0

    def __post_init__(self):
        if self.kind not in ("non-strict", "strict"):
            raise InputError("regime kind must be 'non-strict' or 'strict'")
        if not math.isfinite(self.epsilon) or self.epsilon < 0:
            raise InputError("regime epsilon must be finite and >= 0")
        if self.kind == "non-strict" and self.epsilon != 0.0:
            raise InputError("non-strict regime takes no epsilon")

    @property
    def threshold(self) -> float:
        return self.epsilon if self.kind == "strict" else 0.0


@dataclass(frozen=True)
class Group:
    """A set of tuple ids sharing one additive bonus."""

    members: tuple[str, ...]
    bonus: float

    def __post_init__(self):
        members = tuple(str(m) for m in self.members)
        if not members:
            raise InputError("group has no members")
        if len(set(members)) != len(members):
            raise InputError("group repeats a member")
        if not math.isfinite(self.bonus):
            raise InputError("group bonus must be finite")
        object.__setattr__(self, "members", members)


@dataclass(frozen=True)
class Explanation:
    """Linear weights plus disjoint bonus groups realizing a ranking."""

    weights: tuple[float, ...]
    groups: tuple[Group, ...] = ()
    regime: Regime = Regime()
    provenance: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if not all(math.isfinite(w) for w in weights):
            raise InputError("weights must be finite")
        object.__setattr__(self, "weights", weights)
        groups = tuple(self.groups)
        seen: set[str] = set()
        for grp in groups:
            for m in grp.members:
                if m in seen:
                    raise InputError("groups are not disjoint: %r" % (m,))
                seen.add(m)
        object.__setattr__(self, "groups", groups)

    @property
    def bonus_count(self) -> int:
        """Total number of tuples receiving a bonus."""
        return sum(len(g.members) for g in self.groups)

    def bonus_of(self, tuple_id: str) -> float:
        for grp in self.groups:
            if tuple_id in grp.members:
                return grp.bonus
        return 0.0

    def bonus_map(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for grp in self.groups:
            for m in grp.members:
                out[m] = grp.bonus
        return out


def linear_score(weights, row) -> float:
    """Utility of one tuple under a weight vector: sum_j w_j * t[j]."""
    w = np.asarray(weights, dtype=float)
    t = np.asarray(row, dtype=float)
    if w.shape != t.shape:
        raise InputError("weight/row dimension mismatch")
    return float(np.dot(w, t))


def linear_scores(dataset: Dataset, weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (dataset.d,):
        raise InputError("expected %d weights, got %r" % (dataset.d, w.shape))
    return dataset.values @ w


def bonus_score(weights, row, bonus: float) -> float:
    """Bonus-aware utility: bonus + sum_j w_j * t[j]."""
    return float(bonus) + linear_score(weights, row)


def adjusted_scores(dataset: Dataset, explanation: Explanation) -> np.ndarray:
    """Per-tuple adjusted scores (dataset order) under an explanation."""
    scores = linear_scores(dataset, explanation.weights)
    out = scores.copy()
    for grp in explanation.groups:
        for m in grp.members:
            out[dataset.index(m)] += grp.bonus
    return out


def lex_rank(ids: Sequence[str]) -> np.ndarray:
    """rank[i] = position of ids[i] in ascending lexicographic order."""
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    rank = np.empty(len(ids), dtype=np.int64)
    for pos, i in enumerate(order):
        rank[i] = pos
    return rank


def order_by_scores(ids: Sequence[str], scores: np.ndarray) -> list[int]:
    """Indices sorted by descending score, ties by ascending id."""
    return sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))


def ranking_from_weights(dataset: Dataset, weights, bonuses: Mapping[str, float] | None = None) -> Ranking:
    """Rank tuples by linear score plus optional per-id bonuses.

    Ties are broken by ascending lexicographic id.
    """
    scores = linear_scores(dataset, weights)
    if bonuses:
        scores = scores.copy()
        for tid, b in bonuses.items():
            scores[dataset.index(tid)] += float(b)
    idx = order_by_scores(dataset.ids, scores)
    return Ranking(tuple(dataset.ids[i] for i in idx))


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    min_gap: float
    first_violation: tuple[str, str] | None


def verify_realization(
    dataset: Dataset,
    ranking: Ranking,
    explanation: Explanation,
    tol: float = DEFAULT_TOL,
) -> VerifyResult:
    """Check that adjusted scores are ordered along the ranking.

    Non-strict regime: every consecutive gap must be >= -tol. Strict regime:
    every gap must be >= epsilon - tol. ``min_gap`` is the smallest
    consecutive gap (+inf for rankings of length < 2); ``first_violation`` is
    the first adjacent pair (higher, lower) whose gap fails the threshold.
    """
    ensure_permutation(dataset, ranking)
    for grp in explanation.groups:
        for m in grp.members:
            dataset.index(m)
    scores = adjusted_scores(dataset, explanation)
    along = scores[[dataset.index(t) for t in ranking.order]]
    if len(along) < 2:
        return VerifyResult(True, math.inf, None)
    gaps = along[:-1] - along[1:]
    min_gap = float(gaps.min())
    need = explanation.regime.threshold - tol
    bad = np.nonzero(gaps < need)[0]
    if bad.size:
        i = int(bad[0])
        return VerifyResult(False, min_gap, (ranking.order[i], ranking.order[i + 1]))
    return VerifyResult(True, min_gap, None)


def normalize_dataset(dataset: Dataset, columns: Iterable[str] | None = None) -> Dataset:
    """Flip smaller-is-better columns into [0, 1] via (max - v) / (max - min).

    Constant columns map to all zeros. ``columns`` defaults to every
    attribute.
    """
    cols = tuple(columns) if columns is not None else dataset.attributes
    values = dataset.values.copy()
    for name in cols:
        if name not in dataset.attributes:
            raise InputError("unknown attribute %r" % (name,))
        j = dataset.attributes.index(name)
        col = values[:, j]
        lo, hi = float(col.min()), float(col.max())
        if hi == lo:
            values[:, j] = 0.0
        else:
            values[:, j] = (hi - col) / (hi - lo)
    return Dataset(dataset.ids, dataset.attributes, values, dataset.group_labels)
