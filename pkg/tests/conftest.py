"""Shared fixtures: the frozen worked example and small helpers."""

from __future__ import annotations

import numpy as np
import pytest

from rankexplain import Dataset, Ranking

# The desk-scale worked example used throughout the docs: eight candidates
# scored on two attributes, and the observed ranking the explanations must
# reproduce.
DESK_IDS = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8")
DESK_VALUES = np.array(
    [
        [9.8, 2.0],
        [8.1, 7.8],
        [7.2, 8.6],
        [6.9, 4.2],
        [6.0, 3.2],
        [3.7, 7.1],
        [5.1, 8.0],
        [4.5, 3.5],
    ]
)
DESK_RANKING = ("c2", "c3", "c1", "c5", "c6", "c7", "c4", "c8")


@pytest.fixture(scope="session")
def desk_dataset() -> Dataset:
    return Dataset(DESK_IDS, ("price", "quality"), DESK_VALUES)


@pytest.fixture(scope="session")
def desk_ranking() -> Ranking:
    return Ranking(DESK_RANKING)


def random_dataset(rng: np.random.Generator, n: int, d: int) -> Dataset:
    values = np.round(rng.uniform(0.0, 10.0, size=(n, d)), 2)
    return Dataset(
        tuple(f"t{i:03d}" for i in range(n)),
        tuple(f"a{j}" for j in range(d)),
        values,
    )


def random_ranking(rng: np.random.Generator, dataset: Dataset) -> Ranking:
    order = list(dataset.ids)
    rng.shuffle(order)
    return Ranking(tuple(order))
