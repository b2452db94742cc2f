"""File formats: dataset CSV, ranking text, explanation JSON.

Floats are written with ``repr`` so a write/read cycle is bit-exact.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping

import numpy as np

from .core import Dataset, Explanation, Group, InputError, Ranking, ensure_permutation

GROUP_COLUMN = "group"


def load_dataset_csv(path) -> Dataset:
    """Read ``id,<attr1>,...,<attrd>[,group]`` with a header row."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise InputError("%s: empty file" % path) from None
            rows = list(reader)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from exc

    header = [h.strip() for h in header]
    if not header or header[0] != "id":
        raise InputError("%s: first column must be 'id'" % path)
    has_group = len(header) > 1 and header[-1] == GROUP_COLUMN
    attrs = header[1:-1] if has_group else header[1:]
    if not attrs:
        raise InputError("%s: no attribute columns" % path)

    ids: list[str] = []
    values: list[list[float]] = []
    labels: list[str | None] = []
    for ln, row in enumerate(rows, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise InputError("%s line %d: expected %d fields, got %d" % (path, ln, len(header), len(row)))
        ids.append(row[0].strip())
        raw = row[1:-1] if has_group else row[1:]
        try:
            values.append([float(x) for x in raw])
        except ValueError as exc:
            raise InputError("%s line %d: %s" % (path, ln, exc)) from None
        labels.append(row[-1].strip() or None if has_group else None)
    if not ids:
        raise InputError("%s: no data rows" % path)
    group_labels = tuple(labels) if has_group else None
    return Dataset(tuple(ids), tuple(attrs), np.array(values, dtype=float), group_labels)


def save_dataset_csv(dataset: Dataset, path) -> None:
    path = Path(path)
    with_group = dataset.group_labels is not None
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["id", *dataset.attributes] + ([GROUP_COLUMN] if with_group else [])
        writer.writerow(header)
        for i, tid in enumerate(dataset.ids):
            row = [tid] + [repr(float(v)) for v in dataset.values[i]]
            if with_group:
                row.append(dataset.group_labels[i] or "")
            writer.writerow(row)


def load_ranking(path, dataset: Dataset | None = None) -> Ranking:
    """Read one tuple id per line, best first. Blank lines are ignored."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from exc
    order = [ln.strip() for ln in lines if ln.strip()]
    if not order:
        raise InputError("%s: empty ranking" % path)
    ranking = Ranking(tuple(order))
    if dataset is not None:
        ensure_permutation(dataset, ranking)
    return ranking


def save_ranking(ranking: Ranking, path) -> None:
    Path(path).write_text("".join(t + "\n" for t in ranking.order))


def explanation_to_dict(explanation: Explanation) -> dict:
    return {
        "weights": [float(w) for w in explanation.weights],
        "groups": [
            {"members": list(g.members), "bonus": float(g.bonus)} for g in explanation.groups
        ],
        "regime": {"kind": explanation.regime.kind, "epsilon": explanation.regime.epsilon},
        "provenance": dict(explanation.provenance),
    }


def explanation_from_dict(payload: Mapping) -> Explanation:
    from .core import Regime

    try:
        weights = tuple(float(w) for w in payload["weights"])
        groups = tuple(
            Group(tuple(g["members"]), float(g["bonus"])) for g in payload.get("groups", [])
        )
        regime_raw = payload.get("regime", {"kind": "non-strict", "epsilon": 0.0})
        regime = Regime(regime_raw.get("kind", "non-strict"), float(regime_raw.get("epsilon", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("malformed explanation payload: %s" % exc) from exc
    return Explanation(weights, groups, regime, dict(payload.get("provenance", {})))


def save_explanation(explanation: Explanation, path) -> None:
    Path(path).write_text(json.dumps(explanation_to_dict(explanation), indent=2) + "\n")


def load_explanation(path) -> Explanation:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise InputError("%s: invalid JSON: %s" % (path, exc)) from exc
    return explanation_from_dict(payload)
