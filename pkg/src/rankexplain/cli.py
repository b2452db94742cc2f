"""Command line front end.

Exit codes: 0 success/feasible, 1 infeasible or failed verification, 2 bad
input, 3 resource limit hit. BLAS thread pools default to one thread so
timings are reproducible; pass --threads to raise the limit.
"""

from __future__ import annotations

import os

for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .arrangement import (
    cell_regions,
    enumerate_regions,
    enumerate_regions_2d,
    pair_normals,
    quadrant_is_positive,
)
from .baselines import pairwise_logistic, sampling_baseline
from .core import InputError, verify_realization
from .datagen import gen_monotone_2cnf, gen_synthetic, parse_cnf, reduce_max1in2sat, write_cnf
from .ermb import DIM_CAP, augment_rows, explain_multigroup, explain_singleton
from .io import (
    explanation_to_dict,
    load_dataset_csv,
    load_explanation,
    load_ranking,
    save_dataset_csv,
    save_explanation,
    save_ranking,
)
from .milp import decode_assignment, encode_base, encode_refined, solve_bnb
from .modelio import save_model
from .skyline import forced_bonus_tuples

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3

SOLVERS = ("ermb", "milp-base", "milp-refined", "sampling", "logistic")


def _load_instance(args):
    dataset = load_dataset_csv(args.dataset)
    ranking = load_ranking(args.ranking, dataset)
    return dataset, ranking


def _emit_explanation(explanation, out):
    if out:
        save_explanation(explanation, out)
    else:
        json.dump(explanation_to_dict(explanation), sys.stdout, indent=2)
        sys.stdout.write("\n")


def _id_list(text):
    return tuple(t.strip() for t in text.split(",") if t.strip()) if text else ()


def _run_milp(args, dataset, ranking, solver):
    if args.k is None:
        raise InputError("%s needs --k" % solver)
    g = args.g if args.g is not None else 1
    if solver == "milp-base":
        model = encode_base(dataset, ranking, args.k, g, box=args.big_m)
    else:
        model = encode_refined(
            dataset,
            ranking,
            args.k,
            g,
            epsilon=args.epsilon,
            v_max=args.vmax,
            forced=_id_list(args.forced),
            banned=_id_list(args.banned),
        )
    milp = solve_bnb(model, time_limit=args.time_limit, node_limit=args.node_limit)
    print("status %s" % milp.status)
    print("nodes %d" % milp.nodes)
    print("lp_calls %d" % milp.lp_calls)
    print("wall_ms %.1f" % milp.wall_ms)
    if milp.status == "limit":
        return EXIT_LIMIT
    if milp.status != "feasible":
        return EXIT_INFEASIBLE
    explanation = decode_assignment(model, milp.x)
    check = verify_realization(dataset, ranking, explanation)
    print("bonuses %d" % explanation.bonus_count)
    print("verified %s min_gap %r" % (check.ok, check.min_gap))
    _emit_explanation(explanation, args.out)
    return EXIT_OK


def cmd_explain(args) -> int:
    dataset, ranking = _load_instance(args)
    solver = args.solver
    if solver in ("milp-base", "milp-refined"):
        return _run_milp(args, dataset, ranking, solver)
    if solver == "ermb":
        if args.g is None:
            res = explain_singleton(dataset, ranking, k=args.k, quadrant=args.quadrant)
        else:
            if args.k is None:
                raise InputError("ermb with --g needs --k")
            res = explain_multigroup(dataset, ranking, args.g, args.k, quadrant=args.quadrant)
    elif solver == "sampling":
        res = sampling_baseline(
            dataset, ranking, samples=args.samples, seed=args.seed, quadrant=args.quadrant
        )
    else:  # logistic
        res = pairwise_logistic(dataset, ranking, steps=args.steps)

    print("status %s" % res.status)
    for key in ("method", "quadrant", "regions", "lp_calls", "skipped", "samples", "kept", "backend"):
        if key in res.stats:
            print("%s %s" % (key, res.stats[key]))
    if res.min_bonuses is not None:
        print("bonuses %d" % res.min_bonuses)
    if res.status != "feasible":
        return EXIT_INFEASIBLE
    if solver in ("sampling", "logistic") and args.k is not None and res.min_bonuses > args.k:
        print("over budget %d" % args.k)
        return EXIT_INFEASIBLE
    check = verify_realization(dataset, ranking, res.explanation)
    print("verified %s min_gap %r" % (check.ok, check.min_gap))
    _emit_explanation(res.explanation, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    dataset = load_dataset_csv(args.dataset)
    ranking = load_ranking(args.ranking, dataset)
    explanation = load_explanation(args.explanation)
    res = verify_realization(dataset, ranking, explanation, tol=args.tol)
    print("ok %s" % res.ok)
    print("min_gap %r" % res.min_gap)
    if res.first_violation:
        print("first_violation %s %s" % res.first_violation)
    return EXIT_OK if res.ok else EXIT_INFEASIBLE


def cmd_generate(args) -> int:
    out = Path(args.out)
    if args.kind == "cnf":
        cnf = gen_monotone_2cnf(args.vars, args.clauses, seed=args.seed)
        out.write_text(write_cnf(cnf))
        print("wrote %s (%d vars, %d clauses)" % (out, cnf.n_vars, cnf.m))
        return EXIT_OK
    inst = gen_synthetic(args.n, args.d, g=args.g, k=args.k, dist=args.dist, seed=args.seed)
    out.mkdir(parents=True, exist_ok=True)
    save_dataset_csv(inst.dataset, out / "dataset.csv")
    save_ranking(inst.ranking, out / "ranking.txt")
    save_explanation(inst.explanation, out / "planted.json")
    check = verify_realization(inst.dataset, inst.ranking, inst.explanation)
    print("wrote %s (n=%d d=%d planted_bonuses=%d verified=%s)"
          % (out, inst.dataset.n, inst.dataset.d, inst.explanation.bonus_count, check.ok))
    return EXIT_OK


def cmd_reduce(args) -> int:
    cnf = parse_cnf(Path(args.cnf).read_text())
    inst = reduce_max1in2sat(cnf, args.r, ell_scale=args.ell_scale)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_dataset_csv(inst.dataset, out / "dataset.csv")
    save_ranking(inst.ranking, out / "ranking.txt")
    meta = dict(inst.meta, k_decision=inst.k_decision, ell=inst.ell)
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    print("wrote %s (n=%d k_decision=%d pads_per_gap=%d)"
          % (out, inst.dataset.n, inst.k_decision, inst.meta["pads_per_gap"]))
    return EXIT_OK


def cmd_forced(args) -> int:
    dataset, ranking = _load_instance(args)
    records = forced_bonus_tuples(dataset, ranking)
    print("forced %d" % len(records))
    for rec in records:
        print("%s dominated_by %s iteration %d" % (rec.forced_id, rec.witness_id, rec.iteration))
    return EXIT_OK


def _write_witness_csv(path, dim, regions, attr_names, with_ranking):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["region", "margin"] + list(attr_names)
        if with_ranking:
            header.append("ranking")
        writer.writerow(header)
        for t, reg in enumerate(regions):
            row = [t, repr(float(reg.margin))] + [repr(float(x)) for x in reg.witness]
            if with_ranking:
                row.append(" ".join(reg.ranking.order))
            writer.writerow(row)


def cmd_regions(args) -> int:
    dataset = load_dataset_csv(args.dataset)
    g = args.g if args.g is not None else 0
    positive = quadrant_is_positive(args.quadrant)
    if g:
        dim = dataset.d + g
        if dim > DIM_CAP:
            raise InputError(
                "augmented dimension %d exceeds the enumeration cap %d" % (dim, DIM_CAP)
            )
        rows, tuple_of, _ = augment_rows(dataset.values, g)
        ii, jj, normals = pair_normals(rows)
        keep = tuple_of[ii] != tuple_of[jj]
        enum = cell_regions(
            normals[keep],
            dim,
            positive_dims=range(dim) if positive else range(dataset.d, dim),
        )
        print("method %s" % enum.method)
        print("dimension %d" % dim)
        print("regions %d" % len(enum.regions))
        print("lp_calls %d" % enum.lp_calls)
        print("skipped %d" % enum.skipped)
        if args.out:
            names = list(dataset.attributes) + ["bonus%d" % (c + 1) for c in range(g)]
            _write_witness_csv(args.out, dim, enum.regions, names, with_ranking=False)
            print("wrote %s" % args.out)
        return EXIT_OK
    if dataset.d > DIM_CAP:
        raise InputError("dimension %d exceeds the enumeration cap %d" % (dataset.d, DIM_CAP))
    if dataset.d == 2:
        enum = enumerate_regions_2d(dataset, quadrant=args.quadrant)
        print("method %s" % enum.method)
        print("dimension 2")
        print("regions %d" % len(enum.regions))
    else:
        enum = enumerate_regions(dataset, quadrant=args.quadrant)
        print("method %s" % enum.method)
        print("dimension %d" % dataset.d)
        print("regions %d" % len(enum.regions))
        print("lp_calls %d" % enum.lp_calls)
        print("skipped %d" % enum.skipped)
    if args.out:
        _write_witness_csv(args.out, dataset.d, enum.regions, dataset.attributes, with_ranking=True)
        print("wrote %s" % args.out)
    return EXIT_OK


def cmd_export_model(args) -> int:
    dataset, ranking = _load_instance(args)
    g = args.g if args.g is not None else 1
    if args.refined:
        model = encode_refined(
            dataset, ranking, args.k, g, epsilon=args.epsilon, v_max=args.vmax
        )
    else:
        model = encode_base(dataset, ranking, args.k, g, box=args.big_m)
    save_model(model, args.out, fmt=args.format)
    print("wrote %s (%d variables, %d constraints)"
          % (args.out, model.nvars, len(model.constraints)))
    return EXIT_OK


def _bench_rows(args):
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    bad = set(solvers) - set(SOLVERS)
    if bad:
        raise InputError("unknown bench solvers: %s" % sorted(bad))
    for seed in range(args.seed, args.seed + args.instances):
        inst = gen_synthetic(args.n, args.d, g=args.g, k=args.k, dist=args.dist, seed=seed)
        ident = (args.n, args.d, args.g, args.k, seed)
        for solver in solvers:
            t0 = time.perf_counter()
            if solver == "ermb":
                res = explain_singleton(inst.dataset, inst.ranking, quadrant=args.quadrant)
                wall = (time.perf_counter() - t0) * 1000.0
                yield (solver, *ident, res.status, res.min_bonuses, wall,
                       res.stats.get("regions", 0))
                continue
            if solver in ("milp-base", "milp-refined"):
                if solver == "milp-base":
                    model = encode_base(inst.dataset, inst.ranking, args.k, args.g, box=args.big_m)
                else:
                    model = encode_refined(
                        inst.dataset, inst.ranking, args.k, args.g,
                        epsilon=args.epsilon, v_max=args.vmax,
                    )
                milp = solve_bnb(model, time_limit=args.time_limit, node_limit=args.node_limit)
                wall = (time.perf_counter() - t0) * 1000.0
                count = ""
                if milp.status == "feasible":
                    count = decode_assignment(model, milp.x).bonus_count
                yield (solver, *ident, milp.status, count, wall, milp.nodes)
                continue
            if solver == "sampling":
                res = sampling_baseline(
                    inst.dataset, inst.ranking,
                    samples=args.samples, seed=seed, quadrant=args.quadrant,
                )
                extent = args.samples
            else:
                res = pairwise_logistic(inst.dataset, inst.ranking, steps=args.steps)
                extent = args.steps
            wall = (time.perf_counter() - t0) * 1000.0
            yield (solver, *ident, res.status, res.min_bonuses, wall, extent)


def cmd_bench(args) -> int:
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(sink)
        writer.writerow(
            ["solver", "n", "d", "g", "k", "seed", "status", "bonus_count", "wall_ms", "nodes_or_regions"]
        )
        for solver, n, d, g, k, seed, status, count, wall, extent in _bench_rows(args):
            writer.writerow([solver, n, d, g, k, seed, status, count, "%.3f" % wall, extent])
    finally:
        if args.out:
            sink.close()
    if args.out:
        print("wrote %s" % args.out)
    return EXIT_OK


def _add_instance_args(sub):
    sub.add_argument("dataset", help="dataset CSV (id,<attrs>[,group])")
    sub.add_argument("ranking", help="ranking file, one id per line, best first")


def _add_milp_args(sub):
    sub.add_argument("--epsilon", type=float, default=1e-5, help="strict-gap size (refined)")
    sub.add_argument("--vmax", type=float, default=100.0, help="bonus cap (refined)")
    sub.add_argument("--bigM", dest="big_m", type=float, default=1e6, help="weight box (base)")


def _add_quadrant_arg(sub):
    sub.add_argument(
        "--quadrant",
        choices=("positive", "full"),
        default="positive",
        help="weight-space restriction for region/sampling search",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankexplain",
        description="Explain a target ranking with linear weights plus few group bonuses.",
    )
    parser.add_argument("--threads", type=int, default=None, help="BLAS thread cap (default 1)")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("explain", help="search for an explanation")
    _add_instance_args(p)
    p.add_argument("--solver", choices=SOLVERS, default="ermb")
    p.add_argument("--g", type=int, default=None, help="number of bonus groups")
    p.add_argument("--k", type=int, default=None, help="max tuples carrying a bonus")
    _add_quadrant_arg(p)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--forced", default=None, help="comma-separated ids that must take a bonus (refined)")
    p.add_argument("--banned", default=None, help="comma-separated ids that must not take a bonus (refined)")
    _add_milp_args(p)
    p.add_argument("-o", "--out", default=None, help="write the explanation JSON here")
    p.set_defaults(func=cmd_explain)

    p = commands.add_parser("verify", help="check an explanation against a ranking")
    _add_instance_args(p)
    p.add_argument("explanation", help="explanation JSON")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = commands.add_parser("generate", help="synthetic instance or random formula")
    p.add_argument("--kind", choices=("instance", "cnf"), default="instance")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--g", type=int, default=1, help="planted bonus groups")
    p.add_argument("--k", type=int, default=1, help="planted bonus tuples")
    p.add_argument("--dist", choices=("uniform", "zipf"), default="uniform")
    p.add_argument("--vars", type=int, default=3, help="cnf: variable count")
    p.add_argument("--clauses", type=int, default=4, help="cnf: clause count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="directory (instance) or file (cnf)")
    p.set_defaults(func=cmd_generate)

    p = commands.add_parser("reduce", help="formula to ranking decision instance")
    p.add_argument("cnf", help="2-CNF in DIMACS form")
    p.add_argument("--r", type=int, required=True, help="clauses that must score exactly one")
    p.add_argument("--ell-scale", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_reduce)

    p = commands.add_parser("forced", help="tuples every explanation must bonus")
    _add_instance_args(p)
    p.set_defaults(func=cmd_forced)

    p = commands.add_parser("regions", help="count weight-space cells")
    p.add_argument("dataset")
    p.add_argument("--g", type=int, default=None, help="augment with bonus dimensions")
    _add_quadrant_arg(p)
    p.add_argument("-o", "--out", default=None, help="witness CSV path")
    p.set_defaults(func=cmd_regions)

    p = commands.add_parser("export-model", help="write the integer program")
    _add_instance_args(p)
    p.add_argument("--k", type=int, required=True, help="bonus budget")
    p.add_argument("--g", type=int, default=None, help="number of bonus groups")
    p.add_argument("--refined", action="store_true")
    _add_milp_args(p)
    p.add_argument("--format", choices=("lp", "mps"), default=None)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_export_model)

    p = commands.add_parser("bench", help="time the solvers on generated instances")
    p.add_argument("--solvers", default="ermb,sampling,logistic")
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--dist", choices=("uniform", "zipf"), default="uniform")
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    _add_quadrant_arg(p)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--node-limit", type=int, default=None)
    _add_milp_args(p)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be positive", file=sys.stderr)
            return EXIT_INPUT
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        return args.func(args)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
