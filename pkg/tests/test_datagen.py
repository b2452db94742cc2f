"""Instance generators: planted explanations and 2-CNF reductions."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from rankexplain import InputError, verify_realization
from rankexplain.datagen import (
    TwoCnf,
    gen_monotone_2cnf,
    gen_synthetic,
    oracle_max1in2sat,
    oracle_reduction_min_bonuses,
    parse_cnf,
    reduce_max1in2sat,
    write_cnf,
)


def brute_max1in2sat(cnf: TwoCnf) -> int:
    best = 0
    for bits in itertools.product((False, True), repeat=cnf.n_vars):
        sat = 0
        for a, b in cnf.clauses:
            va = bits[abs(a) - 1] ^ (a < 0)
            vb = bits[abs(b) - 1] ^ (b < 0)
            if va != vb:
                sat += 1
        best = max(best, sat)
    return best


class TestPlanted:
    @pytest.mark.parametrize(
        "n,d,g,k,dist",
        [
            (20, 2, 1, 3, "uniform"),
            (30, 3, 2, 5, "uniform"),
            (25, 2, 1, 4, "zipf"),
            (15, 4, 3, 6, "uniform"),
        ],
    )
    def test_instance_verifies(self, n, d, g, k, dist):
        inst = gen_synthetic(n, d, g=g, k=k, dist=dist, seed=7)
        assert inst.dataset.n == n and inst.dataset.d == d
        assert inst.explanation.bonus_count == k
        assert len(inst.explanation.groups) <= g
        assert verify_realization(inst.dataset, inst.ranking, inst.explanation).ok
        assert inst.params["dist"] == dist

    def test_deterministic_per_seed(self):
        a = gen_synthetic(12, 2, k=2, seed=5)
        b = gen_synthetic(12, 2, k=2, seed=5)
        c = gen_synthetic(12, 2, k=2, seed=6)
        np.testing.assert_array_equal(a.dataset.values, b.dataset.values)
        assert a.ranking.order == b.ranking.order
        assert not np.array_equal(a.dataset.values, c.dataset.values)

    def test_bonuses_positive(self):
        inst = gen_synthetic(10, 2, g=2, k=4, seed=3)
        for grp in inst.explanation.groups:
            assert grp.bonus > 0
            assert grp.members == tuple(sorted(grp.members))

    def test_bad_params(self):
        with pytest.raises(InputError):
            gen_synthetic(5, 2, k=6)  # more bonuses than tuples
        with pytest.raises(InputError):
            gen_synthetic(5, 2, dist="cauchy")


class TestTwoCnf:
    def test_monotone_generator(self):
        cnf = gen_monotone_2cnf(4, 9, seed=1)
        assert cnf.n_vars == 4 and cnf.m == 9
        for a, b in cnf.clauses:
            assert a > 0 and b > 0 and a != b

    def test_generator_deterministic(self):
        assert gen_monotone_2cnf(5, 8, seed=2) == gen_monotone_2cnf(5, 8, seed=2)
        assert gen_monotone_2cnf(5, 8, seed=2) != gen_monotone_2cnf(5, 8, seed=3)

    def test_clause_cap(self):
        with pytest.raises(InputError):
            gen_monotone_2cnf(2, 4)
        with pytest.raises(InputError):
            TwoCnf(2, ((1, 2),) * 4)

    def test_literal_validation(self):
        with pytest.raises(InputError):
            TwoCnf(2, ((0, 1),))
        with pytest.raises(InputError):
            TwoCnf(2, ((1, 3),))

    def test_write_parse_round_trip(self):
        cnf = TwoCnf(3, ((1, 2), (-1, 3), (2, -3)))
        assert parse_cnf(write_cnf(cnf)) == cnf

    def test_parse_rejects_garbage(self):
        with pytest.raises(InputError):
            parse_cnf("not a formula")

    def test_sat_oracle_matches_brute_force(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            nv = int(rng.integers(2, 5))
            m = int(rng.integers(1, nv * nv))
            lits = rng.integers(1, nv + 1, size=(m, 2))
            signs = rng.choice([-1, 1], size=(m, 2))
            clauses = tuple(
                (int(l0 * s0), int(l1 * s1))
                for (l0, l1), (s0, s1) in zip(lits, signs)
            )
            cnf = TwoCnf(nv, clauses)
            assert oracle_max1in2sat(cnf) == brute_max1in2sat(cnf)


class TestReduction:
    def test_meta_and_shape(self):
        cnf = gen_monotone_2cnf(3, 4, seed=9)
        inst = reduce_max1in2sat(cnf, r=2)
        assert inst.meta["n_vars"] == 3
        assert inst.meta["r"] == 2
        assert inst.k_decision == cnf.m - 2
        assert len(inst.clause_point_ids) == cnf.m
        assert inst.dataset.d == cnf.n_vars
        assert set(inst.clause_point_ids) <= set(inst.dataset.ids)

    def test_min_bonuses_identity(self):
        # the reduced instance needs exactly m - (max one-in-two count)
        # bonuses: each exactly-one clause point is the only kind that can
        # score nonzero under sign-vector weights
        rng = np.random.default_rng(42)
        for trial in range(10):
            nv = int(rng.integers(2, 4))
            m = int(rng.integers(1, min(nv * nv, 5)))
            cnf = gen_monotone_2cnf(nv, m, seed=trial)
            inst = reduce_max1in2sat(cnf, r=1)
            assert oracle_reduction_min_bonuses(inst) == cnf.m - oracle_max1in2sat(cnf)

    def test_reduction_deterministic(self):
        cnf = gen_monotone_2cnf(3, 4, seed=9)
        a = reduce_max1in2sat(cnf, r=2)
        b = reduce_max1in2sat(cnf, r=2)
        np.testing.assert_array_equal(a.dataset.values, b.dataset.values)
        assert a.ranking.order == b.ranking.order

    def test_r_out_of_range(self):
        cnf = gen_monotone_2cnf(3, 4, seed=9)
        with pytest.raises(InputError):
            reduce_max1in2sat(cnf, r=5)
