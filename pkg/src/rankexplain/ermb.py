"""Minimum-bonus explanations via weight-space region enumeration.

The search space of weight vectors splits into finitely many open cells in
which the induced ranking is constant. For singleton bonuses the cheapest
explanation in a cell keeps the longest subsequence of the target ranking
already ordered correctly there and lifts everything else with per-tuple
bonuses, so the global optimum is a max over cells. For group bonuses the
cell is searched in an augmented space carrying one extra dimension per
group, with a budgeted chain DP deciding whether every tuple can be matched
to one of its bonus copies consistently with the target order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .arrangement import cell_regions, pair_normals, quadrant_is_positive, sweep_regions_2d
from .core import (
    Dataset,
    Explanation,
    Group,
    InputError,
    Ranking,
    Regime,
    ensure_permutation,
    linear_scores,
)
from .sequence import lis

DIM_CAP = 5


@dataclass
class ExplainResult:
    status: str  # feasible | infeasible
    explanation: Explanation | None
    min_bonuses: int | None
    stats: dict = field(default_factory=dict)


def _rank_relabel(scores: np.ndarray, pi_index: np.ndarray) -> np.ndarray:
    """Composite labels whose strictly increasing subsequences are exactly
    the subsequences of the target ranking with weakly decreasing scores.

    Equal scores share a dense rank class; the target position breaks ties
    inside a class so tied tuples may be kept in either order, which the
    non-strict regime allows.
    """
    n = scores.shape[1]
    order = np.argsort(-scores, axis=1, kind="stable")
    svals = np.take_along_axis(scores, order, axis=1)
    bump = np.zeros(svals.shape, dtype=np.int64)
    bump[:, 1:] = (np.diff(svals, axis=1) != 0.0).astype(np.int64)
    cls_sorted = np.cumsum(bump, axis=1)
    rank = np.empty_like(cls_sorted)
    np.put_along_axis(rank, order, cls_sorted, axis=1)
    return rank[:, pi_index] * n + np.arange(n, dtype=np.int64)


def _lex_smallest_signs(witnesses: np.ndarray, normals: np.ndarray) -> int:
    """Index of the witness with the lexicographically smallest sign vector
    over the given hyperplanes (numeric order, -1 < 0 < +1)."""
    if witnesses.shape[0] == 1 or normals.shape[0] == 0:
        return 0
    signs = np.sign(witnesses @ normals.T).astype(np.int8) + 1
    keys = [signs[t].tobytes() for t in range(signs.shape[0])]
    return min(range(len(keys)), key=keys.__getitem__)


def singleton_completion(
    dataset: Dataset,
    ranking: Ranking,
    weights: np.ndarray,
    kept_positions,
    provenance: dict | None = None,
) -> Explanation:
    """Per-tuple bonuses placing every non-kept tuple at its required spot.

    Kept tuples score their plain linear value. Walking the ranking from the
    bottom, each non-kept tuple is pinned to the adjusted score of its
    successor; the trailing non-kept run (below the last kept tuple) is
    pinned to its predecessor instead. Equal adjusted scores are fine in the
    non-strict regime. Bonuses that come out exactly zero are dropped.
    """
    ensure_permutation(dataset, ranking)
    n = dataset.n
    weights = np.asarray(weights, dtype=float)
    lin = linear_scores(dataset, weights)
    pi_index = np.array([dataset.index(t) for t in ranking.order])
    lin_pi = lin[pi_index]
    kept = np.zeros(n, dtype=bool)
    for p in kept_positions:
        kept[int(p)] = True
    if not kept.any():
        raise InputError("completion needs at least one kept position")
    adjusted = np.empty(n)
    adjusted[kept] = lin_pi[kept]
    last = int(np.nonzero(kept)[0][-1])
    adjusted[last + 1 :] = adjusted[last]
    for i in range(last - 1, -1, -1):
        if not kept[i]:
            adjusted[i] = adjusted[i + 1]
    groups = []
    for i in range(n):
        bonus = adjusted[i] - lin_pi[i]
        if bonus != 0.0:
            groups.append(Group((ranking.order[i],), float(bonus)))
    return Explanation(
        weights=tuple(float(x) for x in weights),
        groups=tuple(groups),
        regime=Regime("non-strict"),
        provenance=dict(provenance or {}),
    )


def explain_singleton(
    dataset: Dataset,
    ranking: Ranking,
    k: int | None = None,
    quadrant: str = "positive",
) -> ExplainResult:
    """Fewest per-tuple bonuses (any sign) realizing the target ranking.

    ``k`` is the bonus budget; ``None`` means unlimited, so the result is
    always feasible and reports the minimum. With a budget the status is
    infeasible when the minimum exceeds it, and ``min_bonuses`` still
    carries the minimum. ``quadrant`` restricts the weight search to the
    positive cone (default) or opens the full space.

    d = 2 runs the critical-angle sweep; other dimensions run the general
    cell enumeration. Ties between equally good cells are broken by the
    lexicographically smallest sign vector over the pair hyperplanes in
    (i, j) order.
    """
    ensure_permutation(dataset, ranking)
    positive = quadrant_is_positive(quadrant)
    if k is not None and int(k) < 0:
        raise InputError("bonus budget must be nonnegative")
    n, d = dataset.n, dataset.d
    if d > DIM_CAP:
        raise InputError("dimension %d exceeds the enumeration cap %d" % (d, DIM_CAP))
    attrs = dataset.values
    pi_index = np.array([dataset.index(t) for t in ranking.order])
    _, _, normals = pair_normals(attrs)

    stats: dict = {"backend": _kernels.BACKEND, "quadrant": quadrant}
    if d == 2:
        regions = sweep_regions_2d(normals, positive=positive)
        witnesses = np.array([r.witness for r in regions])
        stats.update(method="sweep-2d", regions=len(regions))
    else:
        enum = cell_regions(normals, d, positive_dims=range(d) if positive else ())
        witnesses = np.array([r.witness for r in enum.regions])
        stats.update(
            method=enum.method,
            regions=len(enum.regions),
            lp_calls=enum.lp_calls,
            skipped=enum.skipped,
        )

    scores = witnesses @ attrs.T  # (regions, n)
    seq = np.ascontiguousarray(_rank_relabel(scores, pi_index))
    lengths = np.asarray(_kernels.lis_lengths(seq))
    best_len = int(lengths.max())
    min_k = n - best_len
    stats["kept"] = best_len
    if k is not None and min_k > int(k):
        return ExplainResult("infeasible", None, min_k, stats)
    tied = np.nonzero(lengths == best_len)[0]
    pick = tied[_lex_smallest_signs(witnesses[tied], normals)]
    witness = witnesses[pick]
    kept = lis(seq[pick]).indices
    explanation = singleton_completion(
        dataset,
        ranking,
        witness,
        kept,
        provenance={"method": stats["method"], "bonuses": min_k},
    )
    return ExplainResult("feasible", explanation, min_k, stats)


def augment_rows(attrs: np.ndarray, groups_count: int):
    """Bonus-copy rows: copy 0 is the plain row, copy l >= 1 appends an
    indicator lighting group dimension l. Returns (rows, tuple_of, copy_of)."""
    attrs = np.atleast_2d(np.asarray(attrs, dtype=float))
    n, d = attrs.shape
    g = int(groups_count)
    tuple_of = np.repeat(np.arange(n), g + 1)
    copy_of = np.tile(np.arange(g + 1), n)
    rows = np.zeros((n * (g + 1), d + g))
    rows[:, :d] = attrs[tuple_of]
    nz = copy_of >= 1
    rows[np.nonzero(nz)[0], d + copy_of[nz] - 1] = 1.0
    return rows, tuple_of, copy_of


def explain_multigroup(
    dataset: Dataset,
    ranking: Ranking,
    g: int,
    k: int,
    quadrant: str = "positive",
) -> ExplainResult:
    """Feasibility and a witness for at most ``g`` group bonuses totalling at
    most ``k`` members.

    Requires d + g <= DIM_CAP; larger augmented spaces are refused (the
    cell count grows too fast to enumerate honestly). Each group's bonus
    must be positive and groups must be disjoint. ``quadrant`` restricts the
    attribute weights to the positive cone (default) or opens the full
    space; the bonus dimensions stay positive either way. Reports the
    minimum total group size over all cells even when it exceeds the
    budget.
    """
    ensure_permutation(dataset, ranking)
    positive = quadrant_is_positive(quadrant)
    g = int(g)
    if g < 1:
        raise InputError("number of groups must be at least 1")
    budget = int(k)
    if budget < 0:
        raise InputError("bonus budget must be nonnegative")
    n, d = dataset.n, dataset.d
    dim = d + g
    if dim > DIM_CAP:
        raise InputError(
            "augmented dimension %d (attributes %d + groups %d) exceeds the enumeration cap %d"
            % (dim, d, g, DIM_CAP)
        )

    aug, tuple_of, copy_of = augment_rows(dataset.values, g)
    ii, jj, aug_normals = pair_normals(aug)
    # comparisons between copies of the same tuple only reorder options the
    # chain DP treats as interchangeable, so their hyperplanes never change
    # the answer; dropping them merges cells and shrinks the search
    cross = tuple_of[ii] != tuple_of[jj]
    aug_normals = aug_normals[cross]
    enum = cell_regions(
        aug_normals, dim, positive_dims=range(dim) if positive else range(d, dim)
    )

    pi_index = np.array([dataset.index(t) for t in ranking.order])
    pos_of_tuple = np.empty(n, dtype=np.int64)
    pos_of_tuple[pi_index] = np.arange(n)
    id_lex = np.argsort(np.argsort(np.array(dataset.ids)))
    costs_template = (copy_of != 0).astype(np.int64)

    witnesses = np.array([reg.witness for reg in enum.regions])
    scores = witnesses @ aug.T  # (regions, rows)
    shape = scores.shape
    orders = np.lexsort(
        (
            np.broadcast_to(copy_of, shape),
            np.broadcast_to(id_lex[tuple_of], shape),
            -scores,
        ),
        axis=-1,
    )
    pi_pos_all = np.ascontiguousarray(pos_of_tuple[tuple_of[orders]])
    costs_all = np.ascontiguousarray(costs_template[orders])

    best_cost: int | None = None
    best: list[tuple[np.ndarray, np.ndarray]] = []  # (witness, matched rho rows)
    for t in range(shape[0]):
        length, cost, picked = _kernels.budgeted_lcs(pi_pos_all[t], costs_all[t], n, n)
        if length != n:
            continue
        if best_cost is None or cost < best_cost:
            best_cost = int(cost)
            best = [(witnesses[t], orders[t][np.asarray(picked, dtype=np.int64)])]
        elif cost == best_cost:
            best.append((witnesses[t], orders[t][np.asarray(picked, dtype=np.int64)]))

    stats = {
        "backend": _kernels.BACKEND,
        "method": enum.method,
        "quadrant": quadrant,
        "regions": len(enum.regions),
        "lp_calls": enum.lp_calls,
        "skipped": enum.skipped,
        "dimension": dim,
    }
    if best_cost is None:
        return ExplainResult("infeasible", None, None, stats)
    if best_cost > budget:
        return ExplainResult("infeasible", None, best_cost, stats)

    tied_w = np.array([w for w, _ in best])
    pick = _lex_smallest_signs(tied_w, aug_normals)
    witness, rows = best[pick]
    members: dict[int, list[str]] = {}
    for r in rows:
        c = int(copy_of[r])
        if c >= 1:
            members.setdefault(c, []).append(dataset.ids[int(tuple_of[r])])
    groups = tuple(
        Group(tuple(sorted(ids)), float(witness[d + c - 1]))
        for c, ids in sorted(members.items())
    )
    explanation = Explanation(
        weights=tuple(float(x) for x in witness[:d]),
        groups=groups,
        regime=Regime("non-strict"),
        provenance={"method": enum.method, "bonuses": best_cost, "groups": len(groups)},
    )
    return ExplainResult("feasible", explanation, best_cost, stats)
