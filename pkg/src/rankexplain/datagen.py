"""Synthetic instances, the 2-CNF reduction, and brute-force oracles.

The planted generator draws attribute rows, hides a weight vector and a few
group bonuses, and publishes the induced ranking; the planted bonus count
upper-bounds the true minimum. The reduction maps "at least r clauses with
exactly one true literal" to a bonus-budget decision: each clause becomes a
signed indicator point whose score under sign-vector weights is zero exactly
when one literal is true, sandwiched between blocks of origin points that
pin its adjusted score to zero; a both-false clause costs one bonus and a
both-true clause is irreparable because bonuses only raise scores.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .core import Dataset, Explanation, Group, InputError, Ranking, Regime, order_by_scores


@dataclass
class PlantedInstance:
    dataset: Dataset
    ranking: Ranking
    explanation: Explanation
    seed: int
    params: dict = field(default_factory=dict)


def gen_synthetic(
    n: int,
    d: int,
    g: int = 1,
    k: int = 1,
    dist: str = "uniform",
    seed: int = 0,
) -> PlantedInstance:
    """Planted instance: attributes, hidden weights, hidden group bonuses.

    Uniform attributes are drawn on [0, 25) and rounded to 2 decimals; zipf
    attributes (exponent 2) are capped at 1e4. Weights follow the same
    distribution, unrounded. Exactly ``k`` tuples receive bonuses: they are
    sampled from a random pool of min(n, max(2k, 1)) tuples, sorted by id,
    and split contiguously into ``g`` near-equal groups, each with a bonus
    uniform on [5d, 10d). The published ranking sorts by adjusted score,
    ties broken by ascending id.
    """
    if n < 1 or d < 1:
        raise InputError("n and d must be positive")
    g, k = int(g), int(k)
    if g < 1:
        raise InputError("g must be at least 1")
    if not 0 <= k <= n:
        raise InputError("k must be between 0 and n")
    rng = np.random.default_rng(seed)
    if dist == "uniform":
        attrs = np.round(rng.uniform(0.0, 25.0, size=(n, d)), 2)
        weights = rng.uniform(0.0, 25.0, size=d)
    elif dist == "zipf":
        attrs = np.minimum(rng.zipf(2.0, size=(n, d)), 10_000).astype(float)
        weights = np.minimum(rng.zipf(2.0, size=d), 10_000).astype(float)
    else:
        raise InputError("unknown attribute distribution %r" % (dist,))

    width = max(4, len(str(n - 1)))
    ids = tuple("t%0*d" % (width, i) for i in range(n))
    names = tuple("a%d" % j for j in range(d))
    dataset = Dataset(ids, names, attrs)

    groups: tuple[Group, ...] = ()
    if k > 0:
        pool = rng.choice(n, size=min(n, max(2 * k, 1)), replace=False)
        chosen = np.sort(rng.choice(pool, size=k, replace=False))
        g_eff = min(g, k)
        splits = np.array_split(chosen, g_eff)
        bonuses = rng.uniform(5.0 * d, 10.0 * d, size=g_eff)
        groups = tuple(
            Group(tuple(ids[i] for i in part), float(b)) for part, b in zip(splits, bonuses)
        )
    explanation = Explanation(
        weights=tuple(float(x) for x in weights),
        groups=groups,
        regime=Regime("non-strict"),
        provenance={"method": "planted", "seed": int(seed)},
    )

    adjusted = attrs @ weights
    bonus_of = explanation.bonus_map()
    for i, t in enumerate(ids):
        adjusted[i] += bonus_of.get(t, 0.0)
    ranking = Ranking(tuple(ids[i] for i in order_by_scores(ids, adjusted)))
    params = {"n": n, "d": d, "g": g, "k": k, "dist": dist}
    return PlantedInstance(dataset, ranking, explanation, int(seed), params)


@dataclass(frozen=True)
class TwoCnf:
    """2-CNF over signed 1-based literals: clause (2, -5) means x2 or not-x5.

    The clause count must stay below n_vars^2 so the reduction's padding
    argument holds.
    """

    n_vars: int
    clauses: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise InputError("formula needs at least one variable")
        clauses = tuple((int(a), int(b)) for a, b in self.clauses)
        for a, b in clauses:
            for lit in (a, b):
                if lit == 0 or abs(lit) > self.n_vars:
                    raise InputError("literal %d out of range" % lit)
        if len(clauses) >= self.n_vars * self.n_vars:
            raise InputError("need fewer clauses than n_vars^2")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)


def gen_monotone_2cnf(n_vars: int, m_clauses: int, seed: int = 0) -> TwoCnf:
    """Random positive clauses a < b drawn with replacement (duplicates allowed)."""
    if n_vars < 2:
        raise InputError("need at least two variables")
    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(int(m_clauses)):
        a, b = rng.choice(n_vars, size=2, replace=False)
        clauses.append((int(min(a, b)) + 1, int(max(a, b)) + 1))
    return TwoCnf(n_vars, tuple(clauses))


def write_cnf(cnf: TwoCnf) -> str:
    lines = ["p cnf %d %d" % (cnf.n_vars, cnf.m)]
    lines += ["%d %d 0" % (a, b) for a, b in cnf.clauses]
    return "\n".join(lines) + "\n"


def parse_cnf(text: str) -> TwoCnf:
    """Lines of two nonzero signed ints, with or without DIMACS dressing
    (``c`` comments, a ``p cnf`` line, trailing zeros)."""
    n_vars = None
    declared = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError("line %d: malformed problem line" % lineno)
            n_vars, declared = int(parts[2]), int(parts[3])
            continue
        parts = line.split()
        if len(parts) == 3 and parts[2] == "0":
            parts = parts[:2]
        if len(parts) != 2:
            raise InputError("line %d: expected two literals" % lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError("line %d: literals must be integers" % lineno) from None
        if a == 0 or b == 0:
            raise InputError("line %d: literals must be nonzero" % lineno)
        clauses.append((a, b))
    if declared is not None and declared != len(clauses):
        raise InputError("declared %d clauses, found %d" % (declared, len(clauses)))
    if n_vars is None:
        n_vars = max((abs(l) for cl in clauses for l in cl), default=1)
    return TwoCnf(n_vars, tuple(clauses))


@dataclass
class ReductionInstance:
    dataset: Dataset
    ranking: Ranking
    k_decision: int
    ell: int
    clause_point_ids: tuple[str, ...]
    meta: dict = field(default_factory=dict)


def reduce_max1in2sat(cnf: TwoCnf, r: int, ell_scale: float = 1.0) -> ReductionInstance:
    """Decision instance: budget m - r bonuses suffice iff some sign pattern
    leaves no clause with both literals true and at most m - r clauses with
    both literals false, i.e. iff r clauses can score exactly one true.

    Clause c = (l1, l2) becomes the point with sign(l1) at |l1| and sign(l2)
    at |l2|; padding points are the origin. Padding per gap defaults to
    n_vars^2 (so ell = (m+1) n_vars^2 in total) and may be shrunk via
    ``ell_scale`` as long as it still exceeds the budget, which keeps
    bonusing a whole pad block more expensive than bonusing clauses.
    """
    m = cnf.m
    if not 0 <= r <= m:
        raise InputError("r must be between 0 and the clause count")
    budget = m - r
    pads = max(1, int(round(cnf.n_vars * cnf.n_vars * float(ell_scale))))
    if pads <= budget:
        raise InputError(
            "pads per gap (%d) must exceed the budget (%d); raise ell_scale" % (pads, budget)
        )
    ell = pads * (m + 1)
    cw = max(3, len(str(max(m - 1, 0))))
    pw = max(4, len(str(ell - 1)))
    clause_ids = tuple("p%0*d" % (cw, c) for c in range(m))
    pad_ids = tuple("q%0*d" % (pw, p) for p in range(ell))

    ids: list[str] = []
    rows: list[np.ndarray] = []
    order: list[str] = []
    pad_at = 0
    for c in range(m + 1):
        for _ in range(pads):
            ids.append(pad_ids[pad_at])
            rows.append(np.zeros(cnf.n_vars))
            order.append(pad_ids[pad_at])
            pad_at += 1
        if c < m:
            a, b = cnf.clauses[c]
            row = np.zeros(cnf.n_vars)
            row[abs(a) - 1] += float(np.sign(a))
            row[abs(b) - 1] += float(np.sign(b))
            ids.append(clause_ids[c])
            rows.append(row)
            order.append(clause_ids[c])
    names = tuple("v%d" % j for j in range(cnf.n_vars))
    dataset = Dataset(tuple(ids), names, np.array(rows))
    ranking = Ranking(tuple(order))
    meta = {
        "n_vars": cnf.n_vars,
        "clauses": list(cnf.clauses),
        "r": int(r),
        "pads_per_gap": pads,
    }
    return ReductionInstance(dataset, ranking, budget, ell, clause_ids, meta)


def oracle_max1in2sat(cnf: TwoCnf) -> int:
    """Max clauses with exactly one true literal, by full enumeration."""
    if cnf.n_vars > 20:
        raise InputError("oracle enumeration capped at 20 variables")
    best = 0
    for assign in product((False, True), repeat=cnf.n_vars):
        sat = 0
        for a, b in cnf.clauses:
            ta = assign[abs(a) - 1] == (a > 0)
            tb = assign[abs(b) - 1] == (b > 0)
            sat += ta != tb
        best = max(best, sat)
    return best


def oracle_reduction_min_bonuses(instance: ReductionInstance) -> int:
    """Fewest clause points scoring nonzero over sign-vector weights.

    Enumerates w in {-1, +1}^d; padding points always score zero under such
    w and never need bonuses, so this is the reduced instance's true
    minimum bonus count.
    """
    d = instance.dataset.d
    if d > 20:
        raise InputError("oracle enumeration capped at 20 variables")
    points = np.array(
        [instance.dataset.row(t) for t in instance.clause_point_ids], dtype=np.int64
    )
    if not len(points):
        return 0
    best = None
    for signs in product((-1, 1), repeat=d):
        nonzero = int(np.count_nonzero(points @ np.array(signs, dtype=np.int64)))
        best = nonzero if best is None else min(best, nonzero)
    return int(best)
