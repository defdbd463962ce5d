"""Command-line interface: generate data, fit paths, run benchmarks.

CSV conventions: data matrices (X, y, beta) are headerless with 17
significant digits; index files are 0-based; report tables (path, bench,
summary) carry a single header row.  Every run writes a ``manifest.txt``
of key=value lines echoing all resolved parameters.

Exit codes: 0 success, 1 usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .adaptive import AdaptiveParams, adaptive_weights
from .datagen import (GenSpec, INTERACTION_BENCH_SIZES, even_group_sizes,
                      generate, uneven_group_sizes)
from .metrics import compute_metrics
from .model import FitConfig, GroupPartition, GroupedDesign, PenaltySpec, \
    standardize
from .pathfit import PathConfig, fit_path

FLOAT_FMT = "%.17g"

RULE_NAMES = {
    "dfr-sgl": "dfr_sgl",
    "dfr-asgl": "dfr_asgl",
    "sparsegl": "sparsegl",
    "gap-safe": "gap_safe_sequential",
    "none": "none",
}

SCENARIOS = ("alpha-sweep", "signal-sweep", "p-sweep", "sparsity-sweep",
             "correlation-sweep", "weights-sweep", "interaction")

BENCH_GRIDS = {
    "alpha-sweep": [0.05, 0.3, 0.5, 0.7, 0.95],
    "signal-sweep": [0.0, 1.0, 2.0, 4.0],
    "p-sweep": [200, 500, 1000],
    "sparsity-sweep": [0.1, 0.2, 0.4, 0.6],
    "correlation-sweep": [0.0, 0.3, 0.6, 0.9],
    "weights-sweep": [0.1, 0.5, 1.0, 2.0],
    "interaction": [2, 3],
}

BENCH_METRIC_COLUMNS = ("improvement_factor", "input_prop_vars",
                        "input_prop_groups", "l2_to_noscreen",
                        "kkt_violations_total", "failed_convergence")


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 1 (not 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _write_manifest(outdir, entries):
    lines = [f"{k}={v}" for k, v in entries.items()]
    (outdir / "manifest.txt").write_text("\n".join(lines) + "\n")


def _load_design(data_dir):
    data_dir = Path(data_dir)
    X = np.loadtxt(data_dir / "X.csv", delimiter=",", ndmin=2)
    y = np.loadtxt(data_dir / "y.csv", delimiter=",")
    pairs = np.loadtxt(data_dir / "groups.csv", delimiter=",",
                       dtype=np.int64, ndmin=2)
    labels = np.empty(X.shape[1], dtype=np.int64)
    labels[pairs[:, 0]] = pairs[:, 1]
    return GroupedDesign(X, y, GroupPartition.from_labels(labels))


# ---------------------------------------------------------------------------
# generate


def cmd_generate(args):
    if args.groups == "uneven":
        sizes = uneven_group_sizes(args.p, seed=args.seed)
    else:
        sizes = even_group_sizes(args.p, args.group_size)
    spec = GenSpec(
        n=args.n, p=args.p, group_sizes=sizes, rho=args.rho,
        group_sparsity=args.group_sparsity, var_sparsity=args.var_sparsity,
        signal_mean=args.signal_mean, signal_sd=args.signal_sd,
        family=args.family, interaction_order=args.interaction_order,
        interaction_sparsity=args.interaction_sparsity, seed=args.seed)
    design, beta = generate(spec)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    np.savetxt(outdir / "X.csv", design.X, fmt=FLOAT_FMT, delimiter=",")
    np.savetxt(outdir / "y.csv", design.y, fmt=FLOAT_FMT)
    groups_table = np.column_stack([np.arange(design.p),
                                    design.groups.group_of])
    np.savetxt(outdir / "groups.csv", groups_table, fmt="%d", delimiter=",")
    np.savetxt(outdir / "beta_true.csv", beta, fmt=FLOAT_FMT)
    manifest = {"command": "generate", "out": outdir,
                "groups": args.groups, "group_size": args.group_size}
    manifest.update({k: getattr(spec, k) for k in (
        "n", "p", "rho", "group_sparsity", "var_sparsity", "signal_mean",
        "signal_sd", "family", "interaction_order", "interaction_sparsity",
        "seed")})
    manifest["group_sizes"] = ",".join(str(s) for s in spec.group_sizes)
    _write_manifest(outdir, manifest)
    return 0


# ---------------------------------------------------------------------------
# fit


def cmd_fit(args):
    rule = RULE_NAMES[args.rule]
    design = _load_design(args.data)
    intercept = args.intercept and args.family == "linear"
    design = standardize(design, intercept)
    if rule == "dfr_asgl":
        v, w = adaptive_weights(design, AdaptiveParams(args.b1, args.b2))
        spec = PenaltySpec(args.alpha, v, w)
    else:
        spec = PenaltySpec(args.alpha)
    solution = fit_path(
        design, spec, args.family, rule,
        PathConfig(args.path_length, args.min_frac),
        FitConfig(max_iter=args.max_iter, tol=args.tol, intercept=intercept))

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "path.csv", "w") as fh:
        fh.write("lambda,converged,iterations,card_Av,card_Cv,card_Ov,"
                 "kkt_violations,wall_ms\n")
        for k in range(solution.lambdas.size):
            st = solution.screen_states[k]
            fh.write("%.17g,%d,%d,%d,%d,%d,%d,%.17g\n" % (
                solution.lambdas[k], int(solution.converged[k]),
                int(solution.iterations[k]), st.active_vars.size,
                st.candidate_vars.size, st.optimization_set.size,
                sum(v.size for v in st.kkt_violations),
                solution.timings[k] * 1000.0))
    np.savetxt(outdir / "beta.csv", np.vstack(solution.betas),
               fmt=FLOAT_FMT, delimiter=",")
    _write_manifest(outdir, {
        "command": "fit", "data": args.data, "out": outdir,
        "rule": args.rule, "alpha": args.alpha, "family": args.family,
        "b1": args.b1, "b2": args.b2, "path_length": args.path_length,
        "min_frac": args.min_frac, "max_iter": args.max_iter,
        "tol": args.tol, "intercept": intercept,
        "lambda1": solution.lambdas[0],
    })
    return 0


# ---------------------------------------------------------------------------
# bench


def _bench_gen_spec(scenario, value, args, seed):
    overrides = dict(n=args.n, p=args.p, seed=seed)
    if scenario == "signal-sweep":
        overrides["signal_mean"] = value
    elif scenario == "p-sweep":
        overrides["p"] = int(value)
    elif scenario == "sparsity-sweep":
        overrides["group_sparsity"] = value
        overrides["var_sparsity"] = value
    elif scenario == "correlation-sweep":
        overrides["rho"] = value
    elif scenario == "interaction":
        overrides["n"] = args.n_interaction
        overrides["p"] = sum(INTERACTION_BENCH_SIZES)
        overrides["group_sizes"] = list(INTERACTION_BENCH_SIZES)
        overrides["interaction_order"] = int(value)
    # alpha-sweep and weights-sweep vary penalty settings, not the data
    return GenSpec(**overrides)


def _bench_cell(scenario, value, grid_idx, rep, args, rules):
    """One (grid value, repetition) cell: baselines plus each rule."""
    seed = args.seed + 10000 * grid_idx + rep
    design, _ = generate(_bench_gen_spec(scenario, value, args, seed))
    design = standardize(design, args.family == "linear")

    alpha = value if scenario == "alpha-sweep" else args.alpha
    b = value if scenario == "weights-sweep" else args.b1
    path_config = PathConfig(args.path_length, args.min_frac)
    fit_config = FitConfig(max_iter=args.max_iter, tol=args.tol,
                           intercept=args.family == "linear")

    plain = PenaltySpec(alpha)
    v, w = adaptive_weights(design, AdaptiveParams(b, b))
    adapt = PenaltySpec(alpha, v, w)

    baselines = {}
    rows = []
    for rule in rules:
        spec = adapt if rule == "dfr_asgl" else plain
        key = "adaptive" if rule == "dfr_asgl" else "plain"
        if key not in baselines:
            baselines[key] = fit_path(design, spec, args.family, "none",
                                      path_config, fit_config)
        screened = fit_path(design, spec, args.family, rule, path_config,
                            fit_config)
        met = compute_metrics(screened, baselines[key], design)
        rows.append({
            "scenario": scenario, "grid_value": value, "repetition": rep,
            "rule": rule,
            "improvement_factor": met.improvement_factor,
            "input_prop_vars": met.input_prop_vars,
            "input_prop_groups": met.input_prop_groups,
            "l2_to_noscreen": met.l2_to_noscreen,
            "kkt_violations_total": int(met.card_Kv.sum()),
            "failed_convergence": met.failed_convergence,
        })
    return rows


def cmd_bench(args):
    scenario = args.scenario
    if args.grid:
        cast = type(BENCH_GRIDS[scenario][0])
        grid = [cast(v) for v in args.grid.split(",")]
    else:
        grid = BENCH_GRIDS[scenario]
    if args.rules:
        rules = [RULE_NAMES[r] for r in args.rules.split(",")]
    elif scenario == "weights-sweep":
        rules = ["dfr_asgl"]
    else:
        rules = ["dfr_sgl", "dfr_asgl", "sparsegl"]

    rows = []
    for grid_idx, value in enumerate(grid):
        for rep in range(args.repetitions):
            rows.extend(_bench_cell(scenario, value, grid_idx, rep, args,
                                    rules))

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "bench.csv", "w") as fh:
        fh.write("scenario,grid_value,repetition,rule," +
                 ",".join(BENCH_METRIC_COLUMNS) + "\n")
        for r in rows:
            fh.write("%s,%.17g,%d,%s," % (r["scenario"],
                                          float(r["grid_value"]),
                                          r["repetition"], r["rule"]))
            fh.write(",".join(FLOAT_FMT % r[c]
                              for c in BENCH_METRIC_COLUMNS) + "\n")

    with open(outdir / "summary.csv", "w") as fh:
        cols = [f"{c}_{s}" for c in BENCH_METRIC_COLUMNS
                for s in ("mean", "stderr")]
        fh.write("scenario,grid_value,rule," + ",".join(cols) + "\n")
        for value in grid:
            for rule in rules:
                cell = [r for r in rows
                        if r["grid_value"] == value and r["rule"] == rule]
                parts = [scenario, FLOAT_FMT % float(value), rule]
                for c in BENCH_METRIC_COLUMNS:
                    vals = np.array([r[c] for r in cell], dtype=float)
                    stderr = vals.std(ddof=1) / np.sqrt(vals.size) \
                        if vals.size > 1 else 0.0
                    parts.extend([FLOAT_FMT % vals.mean(),
                                  FLOAT_FMT % stderr])
                fh.write(",".join(parts) + "\n")

    _write_manifest(outdir, {
        "command": "bench", "scenario": scenario, "out": outdir,
        "grid": ",".join(str(v) for v in grid),
        "rules": ",".join(rules), "repetitions": args.repetitions,
        "seed": args.seed, "n": args.n, "p": args.p,
        "n_interaction": args.n_interaction, "alpha": args.alpha,
        "b1": args.b1, "b2": args.b2, "path_length": args.path_length,
        "min_frac": args.min_frac, "max_iter": args.max_iter,
        "tol": args.tol, "family": args.family,
    })
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = _Parser(prog="sglscreen",
                     description="Sparse-group lasso paths with screening")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic dataset")
    g.add_argument("--out", required=True)
    g.add_argument("--n", type=int, default=200)
    g.add_argument("--p", type=int, default=1000)
    g.add_argument("--groups", choices=("even", "uneven"), default="even")
    g.add_argument("--group-size", type=int, default=20)
    g.add_argument("--rho", type=float, default=0.3)
    g.add_argument("--group-sparsity", type=float, default=0.2)
    g.add_argument("--var-sparsity", type=float, default=0.2)
    g.add_argument("--signal-mean", type=float, default=0.0)
    g.add_argument("--signal-sd", type=float, default=2.0)
    g.add_argument("--family", choices=("linear", "logistic"),
                   default="linear")
    g.add_argument("--interaction-order", type=int, choices=(1, 2, 3),
                   default=1)
    g.add_argument("--interaction-sparsity", type=float, default=0.3)
    g.add_argument("--seed", type=int, default=0)

    f = sub.add_parser("fit", help="fit a path on CSV data")
    f.add_argument("--data", required=True,
                   help="directory with X.csv, y.csv, groups.csv")
    f.add_argument("--out", required=True)
    f.add_argument("--rule", choices=tuple(RULE_NAMES), default="dfr-sgl")
    f.add_argument("--alpha", type=float, default=0.95)
    f.add_argument("--b1", type=float, default=0.1)
    f.add_argument("--b2", type=float, default=0.1)
    f.add_argument("--path-length", type=int, default=50)
    f.add_argument("--min-frac", type=float, default=0.1)
    f.add_argument("--max-iter", type=int, default=5000)
    f.add_argument("--tol", type=float, default=1e-5)
    f.add_argument("--family", choices=("linear", "logistic"),
                   default="linear")
    f.add_argument("--no-intercept", dest="intercept", action="store_false")

    b = sub.add_parser("bench", help="run a screening benchmark scenario")
    b.add_argument("--scenario", choices=SCENARIOS, required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--repetitions", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--n", type=int, default=200)
    b.add_argument("--p", type=int, default=1000)
    b.add_argument("--n-interaction", type=int, default=80)
    b.add_argument("--alpha", type=float, default=0.95)
    b.add_argument("--b1", type=float, default=0.1)
    b.add_argument("--b2", type=float, default=0.1)
    b.add_argument("--path-length", type=int, default=50)
    b.add_argument("--min-frac", type=float, default=0.1)
    b.add_argument("--max-iter", type=int, default=5000)
    b.add_argument("--tol", type=float, default=1e-5)
    b.add_argument("--family", choices=("linear", "logistic"),
                   default="linear")
    b.add_argument("--rules", default="",
                   help="comma list of rules (default scenario-dependent)")
    b.add_argument("--grid", default="",
                   help="comma list overriding the scenario grid")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fit" and args.rule == "gap-safe" \
            and args.family == "logistic":
        parser.error("--rule gap-safe supports linear regression only")
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "fit":
            return cmd_fit(args)
        return cmd_bench(args)
    except OSError as exc:
        sys.stderr.write(f"sglscreen: I/O error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
