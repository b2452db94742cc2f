"""Heuristic baselines: random-direction sampling and pairwise logistic."""

from __future__ import annotations

import numpy as np
import pytest

from rankexplain import (
    InputError,
    explain_singleton,
    pairwise_logistic,
    sampling_baseline,
    verify_realization,
)

from conftest import random_dataset, random_ranking


class TestSampling:
    def test_explanation_verifies(self, desk_dataset, desk_ranking):
        res = sampling_baseline(desk_dataset, desk_ranking, samples=500, seed=1)
        assert res.status == "feasible"
        assert res.min_bonuses == res.explanation.bonus_count
        assert verify_realization(desk_dataset, desk_ranking, res.explanation).ok

    def test_positive_quadrant_weights(self, desk_dataset, desk_ranking):
        res = sampling_baseline(desk_dataset, desk_ranking, samples=200, seed=2)
        assert all(w >= 0 for w in res.explanation.weights)

    def test_never_beats_exact_search(self):
        rng = np.random.default_rng(51)
        strict_somewhere = False
        for trial in range(8):
            ds = random_dataset(rng, 10, 2)
            pi = random_ranking(rng, ds)
            exact = explain_singleton(ds, pi)
            approx = sampling_baseline(ds, pi, samples=2, seed=trial)
            assert approx.min_bonuses >= exact.min_bonuses
            if approx.min_bonuses > exact.min_bonuses:
                strict_somewhere = True
        # with only two directions the sampler should miss at least once
        assert strict_somewhere

    def test_many_samples_match_exact_on_small_data(self):
        rng = np.random.default_rng(52)
        ds = random_dataset(rng, 8, 2)
        pi = random_ranking(rng, ds)
        exact = explain_singleton(ds, pi)
        approx = sampling_baseline(ds, pi, samples=20000, seed=0)
        assert approx.min_bonuses == exact.min_bonuses

    def test_deterministic_per_seed(self, desk_dataset, desk_ranking):
        a = sampling_baseline(desk_dataset, desk_ranking, samples=100, seed=9)
        b = sampling_baseline(desk_dataset, desk_ranking, samples=100, seed=9)
        assert a.explanation.weights == b.explanation.weights
        assert a.min_bonuses == b.min_bonuses

    def test_time_limit_stops_early(self, desk_dataset, desk_ranking):
        res = sampling_baseline(
            desk_dataset, desk_ranking, samples=10**6, seed=0, time_limit=0.0, batch=64
        )
        # at least one batch always runs; the rest are cut off
        assert 0 < res.stats["samples"] < 10**6
        assert res.status == "feasible"

    def test_full_quadrant_can_use_negative_weights(self):
        # a ranking generated by a negative weight is found exactly by the
        # full sweep but only approximately by positive directions
        rng = np.random.default_rng(53)
        ds = random_dataset(rng, 10, 2)
        from rankexplain import ranking_from_weights

        pi = ranking_from_weights(ds, (-1.0, 0.2))
        full = sampling_baseline(ds, pi, samples=4000, seed=1, quadrant="full")
        assert full.min_bonuses == 0

    def test_bad_args(self, desk_dataset, desk_ranking):
        with pytest.raises(InputError):
            sampling_baseline(desk_dataset, desk_ranking, samples=0)
        with pytest.raises(InputError):
            sampling_baseline(desk_dataset, desk_ranking, quadrant="diagonal")


class TestPairwiseLogistic:
    def test_explanation_verifies(self, desk_dataset, desk_ranking):
        res = pairwise_logistic(desk_dataset, desk_ranking)
        assert res.status == "feasible"
        assert verify_realization(desk_dataset, desk_ranking, res.explanation).ok
        assert res.stats["method"] == "pairwise-logistic"

    def test_recovers_clean_linear_ranking(self):
        # when the ranking is realizable with no bonuses at all, the signed
        # difference rows are linearly separable and the fit needs none
        rng = np.random.default_rng(54)
        ds = random_dataset(rng, 12, 3)
        from rankexplain import ranking_from_weights

        pi = ranking_from_weights(ds, (1.0, 2.0, 0.5))
        res = pairwise_logistic(ds, pi, steps=2000)
        assert res.min_bonuses == 0

    def test_never_beats_exact_search(self):
        # the fit is unconstrained, so the fair floor is the full sweep
        rng = np.random.default_rng(55)
        for _ in range(5):
            ds = random_dataset(rng, 9, 2)
            pi = random_ranking(rng, ds)
            exact = explain_singleton(ds, pi, quadrant="full")
            fit = pairwise_logistic(ds, pi)
            assert fit.min_bonuses >= exact.min_bonuses

    def test_zero_steps_keeps_zero_weights(self, desk_dataset, desk_ranking):
        res = pairwise_logistic(desk_dataset, desk_ranking, steps=0)
        assert res.explanation.weights == (0.0, 0.0)
        assert res.status == "feasible"
        assert verify_realization(desk_dataset, desk_ranking, res.explanation).ok
