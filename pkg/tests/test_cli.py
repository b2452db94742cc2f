"""Command line interface: subcommands, exit codes, file outputs."""

from __future__ import annotations

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from rankexplain import Dataset, Ranking, verify_realization
from rankexplain.cli import main
from rankexplain.io import (
    load_dataset_csv,
    load_explanation,
    load_ranking,
    save_dataset_csv,
    save_explanation,
    save_ranking,
)

from conftest import DESK_IDS, DESK_RANKING, DESK_VALUES


@pytest.fixture(scope="module")
def desk_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("desk")
    ds = Dataset(DESK_IDS, ("price", "quality"), np.array(DESK_VALUES))
    save_dataset_csv(ds, root / "dataset.csv")
    save_ranking(Ranking(DESK_RANKING), root / "ranking.txt")
    return str(root / "dataset.csv"), str(root / "ranking.txt"), ds


class TestExplain:
    def test_ermb_feasible(self, desk_files, tmp_path, capsys):
        data, rank, ds = desk_files
        out = tmp_path / "expl.json"
        code = main(["explain", data, rank, "-o", str(out)])
        assert code == 0
        text = capsys.readouterr().out
        assert "status feasible" in text
        assert "bonuses 2" in text
        assert "verified True" in text
        expl = load_explanation(out)
        assert verify_realization(ds, Ranking(DESK_RANKING), expl).ok

    def test_milp_refined_strict(self, desk_files, tmp_path, capsys):
        data, rank, ds = desk_files
        out = tmp_path / "expl.json"
        code = main(
            ["explain", data, rank, "--solver", "milp-refined", "--g", "1", "--k", "3", "-o", str(out)]
        )
        assert code == 0
        expl = load_explanation(out)
        assert expl.regime.kind == "strict"
        rep = verify_realization(ds, Ranking(DESK_RANKING), expl)
        assert rep.ok and rep.min_gap >= expl.regime.epsilon - 1e-9

    def test_budget_too_small_is_exit_1(self, desk_files, capsys):
        data, rank, _ = desk_files
        assert main(["explain", data, rank, "--k", "1"]) == 1
        assert "status infeasible" in capsys.readouterr().out

    def test_banned_support_is_exit_1(self, desk_files, capsys):
        data, rank, _ = desk_files
        code = main(
            ["explain", data, rank, "--solver", "milp-refined", "--g", "1", "--k", "3", "--banned", "c5"]
        )
        assert code == 1

    def test_node_limit_is_exit_3(self, desk_files, capsys):
        data, rank, _ = desk_files
        code = main(
            ["explain", data, rank, "--solver", "milp-refined", "--g", "1", "--k", "3", "--node-limit", "0"]
        )
        assert code == 3

    def test_missing_dataset_is_exit_2(self, tmp_path, capsys):
        code = main(["explain", str(tmp_path / "nope.csv"), str(tmp_path / "nope.txt")])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_ermb_group_flag_needs_budget(self, desk_files, capsys):
        data, rank, _ = desk_files
        assert main(["explain", data, rank, "--g", "1"]) == 2

    def test_sampling_over_budget_is_exit_1(self, desk_files, capsys):
        data, rank, _ = desk_files
        code = main(["explain", data, rank, "--solver", "sampling", "--samples", "5", "--k", "0"])
        assert code == 1
        assert "over budget" in capsys.readouterr().out


class TestVerify:
    def test_good_and_tampered(self, desk_files, tmp_path, capsys):
        data, rank, ds = desk_files
        out = tmp_path / "expl.json"
        assert main(["explain", data, rank, "-o", str(out)]) == 0
        capsys.readouterr()
        assert main(["verify", data, rank, str(out)]) == 0
        text = capsys.readouterr().out
        assert "ok True" in text and "min_gap" in text

        expl = load_explanation(out)
        bad = type(expl)(expl.weights, (), expl.regime, dict(expl.provenance))
        save_explanation(bad, tmp_path / "bad.json")
        assert main(["verify", data, rank, str(tmp_path / "bad.json")]) == 1
        assert "first_violation" in capsys.readouterr().out

    def test_garbage_json_is_exit_2(self, desk_files, tmp_path):
        data, rank, _ = desk_files
        path = tmp_path / "bad.json"
        path.write_text("{oops")
        assert main(["verify", data, rank, str(path)]) == 2


class TestForced:
    def test_desk_listing(self, desk_files, capsys):
        data, rank, _ = desk_files
        assert main(["forced", data, rank]) == 0
        text = capsys.readouterr().out
        assert "forced 2" in text
        assert "c5 dominated_by c4 iteration 1" in text
        assert "c6 dominated_by c7 iteration 1" in text


class TestGenerateAndReduce:
    def test_instance_directory(self, tmp_path, capsys):
        out = tmp_path / "inst"
        code = main(
            ["generate", "--kind", "instance", "--n", "15", "--k", "3", "--seed", "4", "--out", str(out)]
        )
        assert code == 0
        ds = load_dataset_csv(out / "dataset.csv")
        pi = load_ranking(out / "ranking.txt", ds)
        expl = load_explanation(out / "planted.json")
        assert ds.n == 15
        assert expl.bonus_count == 3
        assert verify_realization(ds, pi, expl).ok
        assert "verified=True" in capsys.readouterr().out

    def test_cnf_then_reduce(self, tmp_path, capsys):
        cnf_path = tmp_path / "formula.cnf"
        code = main(
            ["generate", "--kind", "cnf", "--vars", "3", "--clauses", "4", "--seed", "2", "--out", str(cnf_path)]
        )
        assert code == 0
        from rankexplain.datagen import parse_cnf

        cnf = parse_cnf(cnf_path.read_text())
        assert cnf.n_vars == 3 and cnf.m == 4

        red = tmp_path / "reduced"
        assert main(["reduce", str(cnf_path), "--r", "2", "--out", str(red)]) == 0
        meta = json.loads((red / "meta.json").read_text())
        assert meta["r"] == 2 and meta["n_vars"] == 3
        ds = load_dataset_csv(red / "dataset.csv")
        load_ranking(red / "ranking.txt", ds)

    def test_impossible_cnf_is_exit_2(self, tmp_path):
        code = main(["generate", "--kind", "cnf", "--vars", "2", "--clauses", "4", "--out", str(tmp_path / "x.cnf")])
        assert code == 2


class TestRegions:
    def test_counts_and_csv(self, desk_files, tmp_path, capsys):
        data, _, _ = desk_files
        out = tmp_path / "regions.csv"
        assert main(["regions", data, "-o", str(out)]) == 0
        text = capsys.readouterr().out
        assert "regions 16" in text
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["region", "margin", "price", "quality", "ranking"]
        assert len(rows) == 17

    def test_augmented(self, desk_files, capsys):
        data, _, _ = desk_files
        assert main(["regions", data, "--g", "1"]) == 0
        text = capsys.readouterr().out
        assert "method cell-slice" in text


class TestExportModel:
    @pytest.mark.parametrize("fmt", ["lp", "mps"])
    def test_round_trip_matches_encoder(self, desk_files, tmp_path, fmt):
        data, rank, ds = desk_files
        out = tmp_path / f"model.{fmt}"
        code = main(
            ["export-model", data, rank, "--k", "3", "--g", "1", "--refined", "--format", fmt, "-o", str(out)]
        )
        assert code == 0
        from rankexplain.milp import encode_refined
        from rankexplain.modelio import load_model

        from test_modelio import assert_models_equal

        want = encode_refined(ds, Ranking(DESK_RANKING), budget=3, groups_count=1)
        assert_models_equal(want, load_model(str(out)))


class TestBench:
    def test_csv_rows(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code = main(
            [
                "bench",
                "--solvers", "ermb,sampling",
                "--n", "8",
                "--k", "2",
                "--instances", "1",
                "--samples", "50",
                "--out", str(out),
            ]
        )
        assert code == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][:4] == ["solver", "n", "d", "g"]
        assert {r[0] for r in rows[1:]} == {"ermb", "sampling"}
        for row in rows[1:]:
            assert row[6] == "feasible"

    def test_unknown_solver_is_exit_2(self, capsys):
        assert main(["bench", "--solvers", "quantum"]) == 2


class TestTopLevel:
    def test_threads_must_be_positive(self, desk_files, capsys):
        data, rank, _ = desk_files
        assert main(["--threads", "0", "forced", data, rank]) == 2

    def test_module_entry_point(self, desk_files):
        data, rank, _ = desk_files
        proc = subprocess.run(
            [sys.executable, "-m", "rankexplain", "forced", data, rank],
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert proc.returncode == 0
        assert "forced 2" in proc.stdout
