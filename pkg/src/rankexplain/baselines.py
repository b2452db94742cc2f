"""Reference heuristics the exact search is compared against.

Both baselines produce a weight vector, count how many tuples it fails to
order (same weak counting rule as the exact search, so numbers are
comparable), and complete the remainder with per-tuple bonuses.
"""

from __future__ import annotations

import time

import numpy as np

from . import _kernels
from .arrangement import quadrant_is_positive
from .core import Dataset, InputError, Ranking, ensure_permutation
from .ermb import ExplainResult, _rank_relabel, singleton_completion
from .sequence import lis


def _finish(dataset, ranking, pi_index, weights, method, stats) -> ExplainResult:
    scores = (dataset.values @ weights)[None, :]
    seq = _rank_relabel(scores, pi_index)[0]
    kept = lis(seq).indices
    count = dataset.n - len(kept)
    explanation = singleton_completion(
        dataset, ranking, weights, kept, provenance={"method": method, "bonuses": count}
    )
    stats = dict(stats, method=method, kept=len(kept))
    return ExplainResult("feasible", explanation, count, stats)


def sampling_baseline(
    dataset: Dataset,
    ranking: Ranking,
    samples: int = 2000,
    seed: int = 0,
    quadrant: str = "positive",
    time_limit: float | None = None,
    batch: int = 512,
) -> ExplainResult:
    """Best of ``samples`` random unit directions.

    Directions are standard gaussians normalized to unit length — reflected
    into the positive quadrant unless ``quadrant="full"`` — scored in
    batches; the winner is the lowest bonus count, ties broken by the
    earliest sample index. ``time_limit`` (seconds) stops the draw early at
    a batch boundary; at least one batch always runs.
    """
    if samples < 1:
        raise InputError("samples must be positive")
    positive = quadrant_is_positive(quadrant)
    ensure_permutation(dataset, ranking)
    n = dataset.n
    attrs = dataset.values
    pi_index = np.array([dataset.index(t) for t in ranking.order])
    rng = np.random.default_rng(seed)

    start = time.perf_counter()
    best_count = None
    best_w = None
    best_idx = None
    done = 0
    while done < samples:
        take = min(int(batch), samples - done)
        w = rng.standard_normal((take, dataset.d))
        if positive:
            np.abs(w, out=w)
        norms = np.linalg.norm(w, axis=1)
        norms[norms == 0.0] = 1.0
        w /= norms[:, None]
        scores = w @ attrs.T
        seq = np.ascontiguousarray(_rank_relabel(scores, pi_index))
        lengths = np.asarray(_kernels.lis_lengths(seq))
        counts = n - lengths
        k = int(counts.argmin())
        if best_count is None or counts[k] < best_count:
            best_count = int(counts[k])
            best_w = w[k].copy()
            best_idx = done + k
        done += take
        if time_limit is not None and time.perf_counter() - start > time_limit:
            break

    stats = {
        "samples": int(done),
        "seed": int(seed),
        "quadrant": quadrant,
        "best_index": int(best_idx),
    }
    return _finish(dataset, ranking, pi_index, best_w, "sampling", stats)


def _sigmoid(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def pairwise_logistic(
    dataset: Dataset,
    ranking: Ranking,
    steps: int = 500,
    lr: float = 0.1,
) -> ExplainResult:
    """Logistic regression on signed attribute differences.

    Every ordered pair contributes two rows, (higher - lower, +1) and its
    negation with label -1; there is no intercept. Plain gradient descent
    from the zero vector.
    """
    ensure_permutation(dataset, ranking)
    n, d = dataset.n, dataset.d
    pi_index = np.array([dataset.index(t) for t in ranking.order])
    attrs_pi = dataset.values[pi_index]

    p, q = np.triu_indices(n, k=1)
    diffs = attrs_pi[p] - attrs_pi[q]
    x = np.vstack([diffs, -diffs])
    y = np.concatenate([np.ones(len(diffs)), -np.ones(len(diffs))])

    w = np.zeros(d)
    if len(x):
        for _ in range(int(steps)):
            margin = y * (x @ w)
            w += lr / len(x) * (x.T @ (y * _sigmoid(-margin)))

    stats = {"steps": int(steps), "lr": float(lr)}
    return _finish(dataset, ranking, pi_index, w, "pairwise-logistic", stats)
