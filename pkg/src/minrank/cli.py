"""Command-line entry point: ``minrank <subcommand>``.

Exit codes: 0 success, 2 parameter error, 3 numeric or data error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace

from . import __version__
from .analytic import solve_cp
from .bounds_engine import BoundConfig, assemble_bound_report
from .errors import DataError, NumericError, ParameterError, SizeLimitError
from .experiments import (
    CURVE_KINDS,
    emit_curve_data,
    load_config,
    run_experiment,
    summarize_records,
    with_outputs,
    write_json,
    write_records,
    write_summary,
)
from .graph_core import GnpModel, format_edge_list, read_edge_list, sample_gnp
from .linalg import DEFAULT_REL_TOL, numeric_rank_nullity, pattern_of_matrix, read_matrix
from .sah_xi import XiCertificate, check_sah, tangent_normal_dims, verify_xi_edge_inequality

EXIT_OK, EXIT_PARAM, EXIT_DATA = 0, 2, 3


def _emit(text: str, out) -> None:
    if out:
        os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(row: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(row, indent=2, default=str) + "\n"
    keys = list(row)
    vals = ["" if row[k] is None else str(row[k]) for k in keys]
    return ",".join(keys) + "\n" + ",".join(vals) + "\n"


def cmd_sample(args) -> int:
    G = sample_gnp(GnpModel(args.v, args.p, args.seed))
    _emit(format_edge_list(G), args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    G = read_edge_list(args.graph)
    cfg = BoundConfig(
        rel_tol=args.tol,
        seed=args.seed,
        numeric_minrank=not args.no_numeric,
        sah_search=args.sah,
        xi_trials=args.trials,
    )
    report = assemble_bound_report(G, cfg)
    _emit(_table(report.as_dict(), args.format), args.out)
    return EXIT_OK


def cmd_solve_cp(args) -> int:
    rows = []
    for p in args.p:
        sol = solve_cp(p, args.tol)
        rows.append({"p": sol.p, "c": sol.c, "residual": sol.residual})
    if args.format == "json":
        text = json.dumps(rows if len(rows) > 1 else rows[0], indent=2) + "\n"
    else:
        text = "p,c,residual\n" + "".join(f"{r['p']!r},{r['c']!r},{r['residual']!r}\n" for r in rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_xi_check(args) -> int:
    A, _ = read_matrix(args.matrix)
    G = pattern_of_matrix(A, args.tol)
    verdict = check_sah(A, args.tol)
    prof = numeric_rank_nullity(A, args.tol)
    dims = tangent_normal_dims(A, args.tol)
    row = {
        "v": G.v,
        "e": G.e,
        "rank": prof.rank,
        "nullity": prof.nullity,
        "sah_holds": verdict.holds,
        "sah_solution_dim": verdict.solution_space_dim,
        **asdict(dims),
    }
    if verdict.holds:
        check = verify_xi_edge_inequality(XiCertificate(G, A, prof.nullity, verdict, "input"))
        row.update(
            xi_lower=prof.nullity,
            edge_inequality=check.holds,
            edge_inequality_strict=check.strict_holds,
            bipartite=check.bipartite,
            connected=check.connected,
            zero_diagonal=check.zero_diagonal,
        )
    _emit(_table(row, args.format), args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = load_config(args.config, trials=args.trials, seed=args.seed, rel_tol=args.tol, workers=args.workers)
    if args.out:
        cfg = with_outputs(cfg, args.out)
    records_path, summary_path = cfg.records_path, cfg.summary_path
    records = run_experiment(replace(cfg, records_path=None, summary_path=None))
    summary = summarize_records(records)
    if args.format == "json":
        if records_path:
            write_json([asdict(r) for r in records], os.path.splitext(records_path)[0] + ".json")
        text = write_json(summary, os.path.splitext(summary_path)[0] + ".json" if summary_path else None)
    else:
        if records_path:
            write_records(records, records_path, cfg.include_timings)
        text = write_summary(summary, summary_path)
    if not summary_path:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_curves(args) -> int:
    if args.kind == "bounds_vs_v":
        grid = args.v_grid
    else:
        grid = args.p_grid
    text = emit_curve_data(args.kind, grid, None, p=args.p, fmt=args.format)
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minrank", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, trials=False, fmt=True):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--tol", type=float, default=DEFAULT_REL_TOL, help="relative numeric tolerance")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if trials:
            p.add_argument("--trials", type=int, default=8)
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sample", help="emit a G(v,p) edge list")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    common(p, fmt=False)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bounds", help="bound report for an edge-list file")
    p.add_argument("graph")
    p.add_argument("--sah", action="store_true", help="also search for xi certificates")
    p.add_argument("--no-numeric", action="store_true", help="skip alternating-projection rank search")
    common(p, trials=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("solve-cp", help="solve for c(p)")
    p.add_argument("p", type=float, nargs="+")
    common(p, seed=False)
    p.set_defaults(tol=1e-10)
    p.set_defaults(func=cmd_solve_cp)

    p = sub.add_parser("xi-check", help="SAH and xi edge inequality for a matrix file")
    p.add_argument("matrix")
    common(p, seed=False)
    p.set_defaults(func=cmd_xi_check)

    p = sub.add_parser("experiment", help="run a Monte Carlo configuration file")
    p.add_argument("config")
    p.add_argument("--out", help="output directory for records.csv and summary.csv")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("curves", help="figure data for c(p) and the bound curves")
    p.add_argument("kind", choices=CURVE_KINDS)
    p.add_argument("--p-grid", type=float, nargs="+", help="p values (default: 0.01..0.99)")
    p.add_argument("--v-grid", type=int, nargs="+", help="v values for bounds_vs_v")
    p.add_argument("--p", type=float, default=0.5, help="fixed p for bounds_vs_v")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"minrank: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (NumericError, DataError, SizeLimitError, OSError) as exc:
        print(f"minrank: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
