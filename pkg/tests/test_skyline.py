"""Dominance scan for tuples that provably need a bonus."""

from __future__ import annotations

import numpy as np

from rankexplain import Dataset, Ranking, forced_bonus_tuples
from rankexplain.skyline import (
    _strict_round_2d,
    _strict_round_pairwise,
)

from conftest import random_dataset, random_ranking


def check_records(dataset, ranking, records):
    """Every record must satisfy its defining property; returns forced ids."""
    pos = ranking.position
    forced_ids = {r.forced_id for r in records}
    for rec in records:
        assert pos(rec.witness_id) > pos(rec.forced_id)
        f = dataset.row(rec.forced_id)
        w = dataset.row(rec.witness_id)
        assert (w >= f).all()
        if rec.iteration == 1:
            assert (w > f).any()
        else:
            assert rec.witness_id in forced_ids
    # ordered by rank position of the forced tuple
    positions = [pos(r.forced_id) for r in records]
    assert positions == sorted(positions)
    return forced_ids


class TestDesk:
    def test_exactly_two_forced(self, desk_dataset, desk_ranking):
        records = forced_bonus_tuples(desk_dataset, desk_ranking)
        got = {(r.forced_id, r.witness_id) for r in records}
        assert got == {("c5", "c4"), ("c6", "c7")}
        assert all(r.iteration == 1 for r in records)
        check_records(desk_dataset, desk_ranking, records)

    def test_score_order_ranking_forces_nothing(self, desk_dataset):
        from rankexplain import ranking_from_weights

        pi = ranking_from_weights(desk_dataset, (2.0, 1.0))
        assert forced_bonus_tuples(desk_dataset, pi) == []


class TestRouteAgreement:
    def test_staircase_matches_pairwise(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            n = int(rng.integers(2, 30))
            vals = rng.integers(0, 6, size=(n, 2)).astype(float)  # many ties
            got = _strict_round_2d(vals)
            want = _strict_round_pairwise(vals)
            np.testing.assert_array_equal(got, want)

    def test_full_scan_2d_vs_3d_padding(self):
        # a zero third attribute changes no dominance relation, so the
        # two-attribute staircase route and the general pairwise route
        # must produce identical records
        rng = np.random.default_rng(32)
        for _ in range(20):
            n = int(rng.integers(2, 15))
            vals = rng.integers(0, 5, size=(n, 2)).astype(float)
            ids = tuple(f"t{i}" for i in range(n))
            ds2 = Dataset(ids, ("a", "b"), vals)
            ds3 = Dataset(ids, ("a", "b", "c"), np.column_stack([vals, np.zeros(n)]))
            order = list(ids)
            rng.shuffle(order)
            pi = Ranking(tuple(order))
            rec2 = forced_bonus_tuples(ds2, pi)
            rec3 = forced_bonus_tuples(ds3, pi)
            assert [(r.forced_id, r.witness_id, r.iteration) for r in rec2] == [
                (r.forced_id, r.witness_id, r.iteration) for r in rec3
            ]


class TestProperties:
    def test_random_records_self_consistent(self):
        rng = np.random.default_rng(33)
        for _ in range(25):
            n = int(rng.integers(2, 40))
            d = int(rng.integers(1, 4))
            vals = rng.integers(0, 4, size=(n, d)).astype(float)
            ids = tuple(f"t{i}" for i in range(n))
            ds = Dataset(ids, tuple(f"a{j}" for j in range(d)), vals)
            order = list(ids)
            rng.shuffle(order)
            pi = Ranking(tuple(order))
            check_records(ds, pi, forced_bonus_tuples(ds, pi))

    def test_equal_rows_do_not_force_each_other(self):
        vals = np.array([[3.0, 3.0], [3.0, 3.0], [3.0, 3.0]])
        ds = Dataset(("a", "b", "c"), ("x", "y"), vals)
        pi = Ranking(("a", "b", "c"))
        assert forced_bonus_tuples(ds, pi) == []

    def test_strict_dominator_fires(self):
        vals = np.array([[1.0, 1.0], [2.0, 2.0]])
        ds = Dataset(("top", "bot"), ("x", "y"), vals)
        records = forced_bonus_tuples(ds, Ranking(("top", "bot")))
        assert [(r.forced_id, r.witness_id) for r in records] == [("top", "bot")]

    def test_single_attribute(self):
        # 'a' (1) is beaten by 'b' (5) ranked right below it; 'c' (3) is
        # also beaten by 'b', but 'b' sits above 'c', so only 'a' is forced
        vals = np.array([[1.0], [5.0], [3.0]])
        ds = Dataset(("a", "b", "c"), ("x",), vals)
        records = forced_bonus_tuples(ds, Ranking(("a", "b", "c")))
        assert [(r.forced_id, r.witness_id) for r in records] == [("a", "b")]

    def test_forced_are_sound_for_strict_gaps(self):
        # under strict score gaps a dominated tuple cannot tie its way out,
        # so banning a forced tuple from the bonus set must kill feasibility
        from rankexplain.milp import encode_refined, solve_bnb

        rng = np.random.default_rng(34)
        checked = 0
        for _ in range(6):
            ds = random_dataset(rng, 7, 2)
            pi = random_ranking(rng, ds)
            records = forced_bonus_tuples(ds, pi)
            if not records:
                continue
            free = solve_bnb(encode_refined(ds, pi, budget=ds.n, groups_count=1))
            if free.status != "feasible":
                continue
            rec = records[0]
            banned = solve_bnb(
                encode_refined(
                    ds, pi, budget=ds.n, groups_count=1, banned=(rec.forced_id,)
                )
            )
            assert banned.status == "infeasible", rec
            checked += 1
        assert checked >= 2

    def test_singleton_dataset(self):
        ds = Dataset(("only",), ("x", "y"), np.array([[1.0, 2.0]]))
        assert forced_bonus_tuples(ds, Ranking(("only",))) == []
