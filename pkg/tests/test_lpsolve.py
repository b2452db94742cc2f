"""Dense simplex vs the scipy backend, plus the interior-witness helper."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from rankexplain.core import InputError
from rankexplain.lpsolve import (
    FEAS_TOL,
    INTERIOR_MARGIN,
    LinearProgram,
    interior_witness,
    routed_method,
    solve_lp,
)


def brute_force_optimum(c, a_ub, b_ub, lo, hi):
    """Optimum over vertices of a box-bounded polytope by LP-row filtering.

    Only valid for small fully-bounded problems: enumerates all corner
    candidates from active-row intersections plus box corners.
    """
    nv = len(c)
    best = None
    rows = [(a_ub[i], b_ub[i]) for i in range(len(b_ub))]
    rows += [(np.eye(nv)[j], hi[j]) for j in range(nv)]
    rows += [(-np.eye(nv)[j], -lo[j]) for j in range(nv)]
    for combo in itertools.combinations(range(len(rows)), nv):
        a = np.array([rows[i][0] for i in combo])
        b = np.array([rows[i][1] for i in combo])
        try:
            x = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        ok = all(float(np.dot(r, x)) <= rb + 1e-9 for r, rb in rows)
        if ok:
            v = float(np.dot(c, x))
            if best is None or v < best:
                best = v
    return best


class TestSolveLp:
    def test_simple_known_optimum(self):
        # min -x - y st x + y <= 1, x,y in [0,1]: optimum -1 on the edge
        lp = LinearProgram(
            np.array([-1.0, -1.0]),
            np.array([[1.0, 1.0]]),
            np.array([1.0]),
            bounds=[(0.0, 1.0), (0.0, 1.0)],
        )
        for method in ("dense", "highs"):
            res = solve_lp(lp, method=method)
            assert res.status == "optimal"
            assert res.value == pytest.approx(-1.0, abs=1e-8)

    def test_infeasible_bounds(self):
        lp = LinearProgram(np.array([1.0]), bounds=[(2.0, 1.0)])
        assert solve_lp(lp).status == "infeasible"

    def test_infeasible_rows(self):
        # x <= 0 and x >= 1 (as -x <= -1)
        lp = LinearProgram(
            np.array([1.0]),
            np.array([[1.0], [-1.0]]),
            np.array([0.0, -1.0]),
            bounds=[(None, None)],
        )
        for method in ("dense", "highs"):
            assert solve_lp(lp, method=method).status == "infeasible"

    def test_unbounded(self):
        lp = LinearProgram(np.array([-1.0]), bounds=[(0.0, None)])
        for method in ("dense", "highs"):
            assert solve_lp(lp, method=method).status == "unbounded"

    def test_equality_rows(self):
        # min x + y st x + y = 2, x - y <= 0, x,y >= 0 -> value 2
        lp = LinearProgram(
            np.array([1.0, 1.0]),
            np.array([[1.0, -1.0]]),
            np.array([0.0]),
            np.array([[1.0, 1.0]]),
            np.array([2.0]),
            bounds=[(0.0, None), (0.0, None)],
        )
        for method in ("dense", "highs"):
            res = solve_lp(lp, method=method)
            assert res.status == "optimal"
            assert res.value == pytest.approx(2.0, abs=1e-8)

    def test_tiny_infeasibility_not_masked_by_large_boxes(self):
        # x - y >= 1e-5 (-(x - y) <= -1e-5) with x <= y and huge box bounds:
        # rhs magnitudes of the box rows must not loosen phase 1 acceptance
        lp = LinearProgram(
            np.array([0.0, 0.0]),
            np.array([[-1.0, 1.0], [1.0, -1.0]]),
            np.array([-1e-5, 0.0]),
            bounds=[(-1e6, 1e6), (-1e6, 1e6)],
        )
        for method in ("dense", "highs"):
            assert solve_lp(lp, method=method).status == "infeasible"

    def test_dense_agrees_with_highs_on_random_feasible(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            nv = int(rng.integers(2, 6))
            m = int(rng.integers(1, 7))
            a = rng.normal(size=(m, nv))
            x0 = rng.uniform(0.2, 0.8, size=nv)  # interior point keeps it feasible
            b = a @ x0 + rng.uniform(0.1, 1.0, size=m)
            c = rng.normal(size=nv)
            lp = LinearProgram(c, a, b, bounds=[(0.0, 1.0)] * nv)
            r1 = solve_lp(lp, method="dense")
            r2 = solve_lp(lp, method="highs")
            assert r1.status == "optimal" and r2.status == "optimal"
            assert r1.value == pytest.approx(r2.value, abs=1e-7)

    def test_dense_agrees_with_vertex_enumeration(self):
        rng = np.random.default_rng(8)
        for _ in range(15):
            nv = 3
            m = int(rng.integers(1, 4))
            a = rng.normal(size=(m, nv))
            x0 = rng.uniform(0.2, 0.8, size=nv)
            b = a @ x0 + rng.uniform(0.1, 1.0, size=m)
            c = rng.normal(size=nv)
            lo = np.zeros(nv)
            hi = np.ones(nv)
            lp = LinearProgram(c, a, b, bounds=list(zip(lo, hi)))
            res = solve_lp(lp, method="dense")
            expect = brute_force_optimum(c, a, b, lo, hi)
            assert res.status == "optimal"
            assert res.value == pytest.approx(expect, abs=1e-7)

    def test_solution_satisfies_constraints(self):
        rng = np.random.default_rng(9)
        a = rng.normal(size=(5, 4))
        b = a @ np.full(4, 0.5) + 0.5
        lp = LinearProgram(rng.normal(size=4), a, b, bounds=[(0.0, 1.0)] * 4)
        res = solve_lp(lp, method="dense")
        assert res.status == "optimal"
        assert (a @ res.x <= b + FEAS_TOL * (1 + np.abs(b))).all()

    def test_unknown_method(self):
        lp = LinearProgram(np.array([1.0]), bounds=[(0.0, 1.0)])
        with pytest.raises(InputError):
            solve_lp(lp, method="magic")

    def test_routed_method(self):
        small = LinearProgram(np.array([1.0]), bounds=[(0.0, 1.0)])
        assert routed_method(small) == "dense"
        assert routed_method(small, "highs") == "highs"
        big_n = 2000
        big = LinearProgram(
            np.ones(big_n),
            np.ones((400, big_n)),
            np.ones(400),
            bounds=[(0.0, 1.0)] * big_n,
        )
        assert routed_method(big) == "highs"


class TestInteriorWitness:
    def test_quadrant_cell(self):
        # cell: x > 0 side of the y-axis plane and y > 0 side of the x-axis
        normals = np.array([[1.0, 0.0], [0.0, 1.0]])
        w, margin = interior_witness(normals, [1, 1], 2)
        assert w is not None
        assert margin >= INTERIOR_MARGIN
        assert (normals @ w > 0).all()

    def test_sign_mix(self):
        normals = np.array([[1.0, 1.0], [1.0, -1.0]])
        w, margin = interior_witness(normals, [1, -1], 2)
        assert w is not None
        assert normals[0] @ w > 0 and normals[1] @ w < 0

    def test_positive_domain_respected(self):
        normals = np.array([[1.0, -1.0]])
        w, _ = interior_witness(normals, [1], 2, positive_dims=(0, 1))
        assert w is not None
        assert (w >= -1e-12).all()
        assert normals[0] @ w > 0

    def test_empty_cell(self):
        # w0 > 0 and w0 < 0 simultaneously
        normals = np.array([[1.0, 0.0], [1.0, 0.0]])
        w, _ = interior_witness(normals, [1, -1], 2)
        assert w is None

    def test_witness_margin_is_unit_scale(self):
        normals = np.array([[3.0, 0.0]])  # non-unit normal: margin per unit norm
        w, margin = interior_witness(normals, [1], 2)
        assert w is not None
        assert abs(np.sum(np.abs(w)) - 1.0) < 1e-6
        assert margin <= 1.0
