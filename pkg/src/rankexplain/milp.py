"""Mixed-integer encodings of the bonus-explanation decision problem.

Two encodings are provided. The base model keeps weights free in a large
box, forbids the degenerate w_j = 0 with per-dimension sign binaries, and
uses big-M rows to linearize the bonus each tuple draws from its group. The
refined model is the practical variant: nonnegative weights, strict gaps of
at least epsilon, a tight bonus box, and optional rows pinning tuples that
must or must not receive a bonus. Both are feasibility models (zero
objective) solved by a small exact branch-and-bound over the binaries.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Dataset,
    Explanation,
    Group,
    InputError,
    Ranking,
    Regime,
    ensure_permutation,
)
from .lpsolve import LinearProgram, routed_method, solve_lp

DEFAULT_BOX = 1e6
DEFAULT_EPSILON = 1e-5
DEFAULT_VMAX = 100.0
INT_TOL = 1e-6
# relaxation mass below this is numerical dust; above it the binary is
# treated as "used" by the activation probe even when far under INT_TOL
_SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class MilpVar:
    name: str
    lo: float
    hi: float
    integer: bool = False


@dataclass(frozen=True)
class MilpConstraint:
    name: str
    terms: tuple[tuple[int, float], ...]  # (variable index, coefficient), index-sorted
    sense: str  # '<=', '>=', '='
    rhs: float


def _normalize(cons: list[MilpConstraint]) -> list[MilpConstraint]:
    return [MilpConstraint(c.name, tuple(sorted(c.terms)), c.sense, c.rhs) for c in cons]


@dataclass
class MilpModel:
    name: str
    variables: list[MilpVar]
    constraints: list[MilpConstraint]
    objective: np.ndarray | None = None  # None means all-zero
    meta: dict = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return len(self.variables)


def _layout(n: int, d: int, g: int, with_sign: bool):
    """Variable index helpers for the shared w, v, delta, z (+sign) layout."""
    iw = lambda j: j
    iv = lambda r: d + r
    idelta = lambda i, r: d + g + i * g + r
    iz = lambda i, r: d + g + n * g + i * g + r
    isign = (lambda j: d + g + 2 * n * g + j) if with_sign else None
    total = d + g + 2 * n * g + (d if with_sign else 0)
    return iw, iv, idelta, iz, isign, total


def _shared_rows(cons, n, g, budget, big_m, idelta, iz, iv):
    for i in range(n):
        cons.append(
            MilpConstraint(
                "uniq_%d" % i,
                tuple((idelta(i, r), 1.0) for r in range(g)),
                "<=",
                1.0,
            )
        )
    cons.append(
        MilpConstraint(
            "budget",
            tuple((idelta(i, r), 1.0) for i in range(n) for r in range(g)),
            "<=",
            float(budget),
        )
    )
    for i in range(n):
        for r in range(g):
            z, dlt, v = iz(i, r), idelta(i, r), iv(r)
            cons.append(MilpConstraint("lin_ub_%d_%d" % (i, r), ((z, 1.0), (dlt, -big_m)), "<=", 0.0))
            cons.append(MilpConstraint("lin_v_%d_%d" % (i, r), ((z, 1.0), (v, -1.0)), "<=", 0.0))
            cons.append(
                MilpConstraint(
                    "lin_lb_%d_%d" % (i, r), ((z, 1.0), (v, -1.0), (dlt, -big_m)), ">=", -big_m
                )
            )


def _ordering_rows(cons, attrs_pi, g, iw, iz, threshold):
    n, d = attrs_pi.shape
    for i in range(n - 1):
        delta = attrs_pi[i] - attrs_pi[i + 1]
        terms = [(iw(j), float(delta[j])) for j in range(d)]
        terms += [(iz(i, r), 1.0) for r in range(g)]
        terms += [(iz(i + 1, r), -1.0) for r in range(g)]
        cons.append(MilpConstraint("ord_%d" % i, tuple(terms), ">=", threshold))


def encode_base(
    dataset: Dataset,
    ranking: Ranking,
    budget: int,
    groups_count: int,
    box: float = DEFAULT_BOX,
) -> MilpModel:
    """Free-weight encoding. |w_j| >= 1 is enforced with a sign binary per
    dimension (any realizing weight vector can be perturbed off the
    comparison hyperplanes and rescaled, so this loses no feasibility).
    Gaps are non-strict."""
    ensure_permutation(dataset, ranking)
    n, d, g = dataset.n, dataset.d, int(groups_count)
    if g < 1:
        raise InputError("groups_count must be at least 1")
    if int(budget) < 0:
        raise InputError("budget must be nonnegative")
    iw, iv, idelta, iz, isign, total = _layout(n, d, g, with_sign=True)

    variables = (
        [MilpVar("w_%d" % j, -box, box) for j in range(d)]
        + [MilpVar("v_%d" % r, 0.0, box) for r in range(g)]
        + [MilpVar("d_%d_%d" % (i, r), 0.0, 1.0, True) for i in range(n) for r in range(g)]
        + [MilpVar("z_%d_%d" % (i, r), 0.0, box) for i in range(n) for r in range(g)]
        + [MilpVar("s_%d" % j, 0.0, 1.0, True) for j in range(d)]
    )
    assert len(variables) == total

    pi_index = [dataset.index(t) for t in ranking.order]
    attrs_pi = dataset.values[pi_index]
    cons: list[MilpConstraint] = []
    _ordering_rows(cons, attrs_pi, g, iw, iz, 0.0)
    _shared_rows(cons, n, g, budget, box, idelta, iz, iv)
    for j in range(d):
        cons.append(
            MilpConstraint("sgn_lo_%d" % j, ((iw(j), 1.0), (isign(j), -(box + 1.0))), ">=", -box)
        )
        cons.append(
            MilpConstraint("sgn_hi_%d" % j, ((iw(j), 1.0), (isign(j), -(box + 1.0))), "<=", -1.0)
        )
    meta = {
        "kind": "base",
        "ids": list(dataset.ids),
        "order": list(ranking.order),
        "d": d,
        "g": g,
        "n": n,
        "budget": int(budget),
        "big_m": box,
        "box": box,
    }
    return MilpModel("bonus_base", variables, _normalize(cons), None, meta)


def encode_refined(
    dataset: Dataset,
    ranking: Ranking,
    budget: int,
    groups_count: int,
    epsilon: float = DEFAULT_EPSILON,
    v_max: float = DEFAULT_VMAX,
    box: float = DEFAULT_BOX,
    forced=(),
    banned=(),
) -> MilpModel:
    """Practical encoding: w >= 0, gaps >= epsilon, bonuses in [0, v_max]
    (which doubles as the big-M), plus equality rows for tuples known to
    need a bonus and zero rows for tuples barred from one."""
    ensure_permutation(dataset, ranking)
    n, d, g = dataset.n, dataset.d, int(groups_count)
    if g < 1:
        raise InputError("groups_count must be at least 1")
    if int(budget) < 0:
        raise InputError("budget must be nonnegative")
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if v_max <= 0:
        raise InputError("v_max must be positive")
    forced = list(forced)
    banned = list(banned)
    overlap = set(forced) & set(banned)
    if overlap:
        raise InputError("ids both forced and banned: %s" % sorted(overlap))
    pos = {t: i for i, t in enumerate(ranking.order)}
    for t in (*forced, *banned):
        if t not in pos:
            raise InputError("unknown id in forced/banned: %r" % (t,))

    iw, iv, idelta, iz, _, total = _layout(n, d, g, with_sign=False)
    variables = (
        [MilpVar("w_%d" % j, 0.0, box) for j in range(d)]
        + [MilpVar("v_%d" % r, 0.0, v_max) for r in range(g)]
        + [MilpVar("d_%d_%d" % (i, r), 0.0, 1.0, True) for i in range(n) for r in range(g)]
        + [MilpVar("z_%d_%d" % (i, r), 0.0, v_max) for i in range(n) for r in range(g)]
    )
    assert len(variables) == total

    pi_index = [dataset.index(t) for t in ranking.order]
    attrs_pi = dataset.values[pi_index]
    cons: list[MilpConstraint] = []
    _ordering_rows(cons, attrs_pi, g, iw, iz, float(epsilon))
    _shared_rows(cons, n, g, budget, float(v_max), idelta, iz, iv)
    for t in forced:
        i = pos[t]
        cons.append(
            MilpConstraint("forced_%d" % i, tuple((idelta(i, r), 1.0) for r in range(g)), "=", 1.0)
        )
    for t in banned:
        i = pos[t]
        cons.append(
            MilpConstraint("banned_%d" % i, tuple((idelta(i, r), 1.0) for r in range(g)), "=", 0.0)
        )
    meta = {
        "kind": "refined",
        "ids": list(dataset.ids),
        "order": list(ranking.order),
        "d": d,
        "g": g,
        "n": n,
        "budget": int(budget),
        "epsilon": float(epsilon),
        "v_max": float(v_max),
        "big_m": float(v_max),
        "box": box,
        "forced": forced,
        "banned": banned,
    }
    return MilpModel("bonus_refined", variables, _normalize(cons), None, meta)


def model_arrays(model: MilpModel):
    """Dense (A_ub, b_ub, A_eq, b_eq, lo, hi, int_mask) for the solver."""
    nv = model.nvars
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for con in model.constraints:
        row = np.zeros(nv)
        for idx, coef in con.terms:
            row[idx] += coef
        if con.sense == "<=":
            ub_rows.append(row)
            ub_rhs.append(con.rhs)
        elif con.sense == ">=":
            ub_rows.append(-row)
            ub_rhs.append(-con.rhs)
        elif con.sense == "=":
            eq_rows.append(row)
            eq_rhs.append(con.rhs)
        else:
            raise InputError("unknown sense %r" % (con.sense,))
    a_ub = np.array(ub_rows) if ub_rows else np.zeros((0, nv))
    a_eq = np.array(eq_rows) if eq_rows else np.zeros((0, nv))
    lo = np.array([v.lo for v in model.variables])
    hi = np.array([v.hi for v in model.variables])
    int_mask = np.array([v.integer for v in model.variables])
    return a_ub, np.array(ub_rhs), a_eq, np.array(eq_rhs), lo, hi, int_mask


@dataclass
class MilpResult:
    status: str  # feasible | infeasible | limit
    x: np.ndarray | None = None
    nodes: int = 0
    lp_calls: int = 0
    wall_ms: float = 0.0
    message: str = ""


def solve_bnb(
    model: MilpModel,
    time_limit: float | None = None,
    node_limit: int | None = None,
    int_tol: float = INT_TOL,
    lp_method: str = "auto",
) -> MilpResult:
    """Exact branch-and-bound on the integer variables.

    Feasibility models get a surrogate objective (total binary mass) that
    only orders the search; it cannot change the feasible/infeasible answer.
    Nodes are explored best-first by (LP value, depth-last, insertion), and
    the first integral assignment that survives a fixed re-solve plus the
    feasibility recheck is returned.

    Two probes run at every node: rounding the relaxation, and activating
    every binary the relaxation gives positive mass (the relaxation can
    shrink all binaries far below the integrality tolerance when nothing
    pins the continuous scale, so near-integral zeros still mark which
    binaries matter). Failed probes fall through to branching — activation
    side first, on the most fractional free binary, or on the free binary
    with the largest relaxation mass when every value is near-integral.
    Probe re-solves are memoised by assignment, and any pruning verdict from
    the dense simplex is confirmed on the independent backend.
    """
    t0 = time.perf_counter()
    a_ub, b_ub, a_eq, b_eq, lo0, hi0, int_mask = model_arrays(model)
    int_idx = np.nonzero(int_mask)[0]
    if model.objective is not None and np.any(model.objective):
        c = np.asarray(model.objective, dtype=float)
    else:
        c = int_mask.astype(float)  # surrogate: prefer few active binaries

    nodes = 0
    lps = 0

    def lp(lo, hi):
        nonlocal lps
        lps += 1
        prog = LinearProgram(c, a_ub, b_ub, a_eq, b_eq, list(zip(lo, hi)))
        res = solve_lp(prog, method=lp_method)
        if res.status != "optimal" and routed_method(prog, lp_method) != "highs":
            # infeasible prunes a subtree and stalled/unbounded aborts the
            # search, so confirm either verdict on the other backend
            lps += 1
            alt = solve_lp(prog, method="highs")
            if alt.status != "stalled":
                return alt
        return res

    def done(status, x=None, message=""):
        return MilpResult(status, x, nodes, lps, (time.perf_counter() - t0) * 1e3, message)

    tried: set[bytes] = set()

    def try_fixed(int_vals, lo, hi):
        """Pin the binaries at ``int_vals`` and re-solve the continuous part."""
        key = int_vals.tobytes()
        if key in tried:
            return None
        tried.add(key)
        flo, fhi = lo.copy(), hi.copy()
        flo[int_idx] = int_vals
        fhi[int_idx] = int_vals
        res = lp(flo, fhi)
        if res.status == "optimal":
            out = res.x.copy()
            out[int_idx] = int_vals
            return out
        return None

    seq = 0
    heap: list[tuple[float, int, int, np.ndarray, np.ndarray]] = []
    heapq.heappush(heap, (-float("inf"), 0, seq, lo0, hi0))
    undecided = ""
    while heap:
        if time_limit is not None and time.perf_counter() - t0 > time_limit:
            return done("limit", message="time limit")
        if node_limit is not None and nodes > node_limit:
            return done("limit", message="node limit")
        value, negdepth, _, lo, hi = heapq.heappop(heap)
        nodes += 1
        res = lp(lo, hi)
        if res.status == "infeasible":
            continue
        if res.status in ("stalled", "unbounded"):
            if negdepth == 0:
                return done("limit", message="root LP %s" % res.status)
            # an undecided node cannot be pruned: an exhausted search below
            # would no longer prove infeasibility
            undecided = "node LP %s" % res.status
            continue
        vals = res.x[int_idx]
        for cand in (np.round(vals), (vals > _SUPPORT_TOL).astype(float)):
            fixed = try_fixed(cand, lo, hi)
            if fixed is not None:
                return done("feasible", fixed)
        free = np.nonzero(lo[int_idx] < hi[int_idx])[0]
        if free.size == 0:
            continue  # every binary pinned and rechecked already
        frac = np.abs(vals[free] - np.round(vals[free]))
        if float(frac.max(initial=0.0)) > int_tol:
            pick = free[int(np.argmax(frac))]
        else:
            pick = free[int(np.argmax(vals[free]))]
        var = int(int_idx[pick])
        for val in (1.0, 0.0):
            clo, chi = lo.copy(), hi.copy()
            if val == 0.0:
                chi[var] = 0.0
            else:
                clo[var] = 1.0
            seq += 1
            heapq.heappush(heap, (res.value, negdepth - 1, seq, clo, chi))
    if undecided:
        return done("limit", message=undecided)
    return done("infeasible")


def decode_assignment(model: MilpModel, x: np.ndarray) -> Explanation:
    """Explanation carried by a solved assignment of either encoding."""
    meta = model.meta
    n, d, g = meta["n"], meta["d"], meta["g"]
    kind = meta["kind"]
    iw, iv, idelta, _, _, _ = _layout(n, d, g, with_sign=(kind == "base"))
    weights = tuple(float(x[iw(j)]) for j in range(d))
    members: dict[int, list[str]] = {}
    for i in range(n):
        for r in range(g):
            if x[idelta(i, r)] > 0.5:
                members.setdefault(r, []).append(meta["order"][i])
    groups = tuple(
        Group(tuple(sorted(ids)), float(x[iv(r)])) for r, ids in sorted(members.items())
    )
    if kind == "refined":
        regime = Regime("strict", meta["epsilon"])
    else:
        regime = Regime("non-strict")
    return Explanation(
        weights=weights,
        groups=groups,
        regime=regime,
        provenance={"method": "milp-%s" % kind, "bonuses": sum(len(gr.members) for gr in groups)},
    )
