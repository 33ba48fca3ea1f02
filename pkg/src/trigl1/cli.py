"""Command-line front end: ``trigl1 <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import bsplines
from .constants import bound_constant, favard_constant
from .errors import InvalidArgumentError, SolverError, UnsupportedInputError
from .eulersplines import evaluate_euler, euler_spline
from .harness import (
    SweepSpec,
    VerificationReport,
    emit_table,
    parse_alphas,
    run_sweep,
    verify_identities,
    verify_theorem,
)
from .l1approx import best_approx

DEFAULT_N = "3,5"
DEFAULT_K = "1,2,3"
DEFAULT_ALPHAS = ",".join(
    [f"{a:.6g}" for a in np.geomspace(0.2, 10.0, 16)] + [str(a) for a in range(1, 11, 2)]
)


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _write_rows(rows: list[dict], out) -> None:
    writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def cmd_constants(args) -> int:
    if args.kmax < 0:
        raise InvalidArgumentError(f"kmax must be nonnegative, got {args.kmax}")
    rows = []
    for k in range(args.kmax + 1):
        K = favard_constant(k)
        row = {"k": k, "K": repr(K.value), "K_error": K.abs_error_bound, "saturated": K.saturated}
        row["F"] = repr(bound_constant(k).value) if k >= 1 else ""
        rows.append(row)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        _write_rows(rows, sys.stdout)
    return 0


def cmd_bspline(args) -> int:
    f = bsplines.bspline(args.k, args.h)
    if args.eval is not None:
        xs = parse_alphas(args.eval) if ":" in args.eval else [float(v) for v in args.eval.split(",")]
        _write_rows([{"x": x, "value": repr(float(f(x)))} for x in xs], sys.stdout)
    else:
        c = bsplines.fourier_coefficient(f, args.fourier)
        print(json.dumps({"m": args.fourier, "real": c.real, "imag": c.imag}))
    return 0


def cmd_euler(args) -> int:
    e = euler_spline(args.k, args.tol)
    xs = [float(v) for v in args.eval.split(",")]
    _write_rows([{"x": x, "value": repr(float(evaluate_euler(e, x)))} for x in xs], sys.stdout)
    return 0


def cmd_approx(args) -> int:
    res = best_approx(args.k, args.n, args.alpha, args.tol, grid=args.grid)
    if args.format == "json":
        print(res.to_json(indent=2))
    else:
        spec = SweepSpec([args.n], [args.k], [args.alpha], args.tol, args.grid)
        sys.stdout.write(emit_table(spec, [res], fmt="csv"))
    return 0


def cmd_verify(args) -> int:
    report = VerificationReport(args.suite)
    if args.suite in ("identities", "all"):
        report.extend(verify_identities(seed=args.seed))
    if args.suite in ("theorem", "all"):
        spec = SweepSpec(_ints(args.n), _ints(args.k), parse_alphas(args.alphas), args.tol, args.grid)
        theorem, _ = verify_theorem(spec, args.jobs)
        report.extend(theorem)
    for line in report.summary_lines():
        if not line.startswith("PASS") or args.verbose:
            print(line)
    failed = sum(not c.passed for c in report.cases)
    print(f"{len(report.cases) - failed}/{len(report.cases)} cases passed in {report.elapsed:.1f}s")
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report.to_json(indent=2) + "\n")
    return 0 if report.passed else 1


def cmd_table(args) -> int:
    spec = SweepSpec(_ints(args.n), _ints(args.k), parse_alphas(args.alphas), args.tol, args.grid, args.format)
    solved = run_sweep(spec, args.jobs)
    results = [r for _, r in solved if not isinstance(r, str)]
    failures = [(key, r) for key, r in solved if isinstance(r, str)]
    for key, msg in failures:
        print(f"FAIL {key}: {msg}", file=sys.stderr)
    if spec.skipped:
        print(f"skipped {len(spec.skipped)} inadmissible (n, k, alpha) cases", file=sys.stderr)
    if not results:
        print("no admissible cases", file=sys.stderr)
        return 1
    text = emit_table(spec, results, args.out)
    if args.out is None:
        sys.stdout.write(text)
    if args.svg:
        emit_table(spec, results, args.svg, fmt="svg")
    return 0 if not failures else 1


def _sweep_flags(p: argparse.ArgumentParser, n: str | None, k: str | None, alphas: str | None) -> None:
    p.add_argument("--n", default=n, required=n is None, help="comma-separated n values")
    p.add_argument("--k", default=k, required=k is None, help="comma-separated k values")
    p.add_argument("--alphas", default=alphas, required=alphas is None, help="START:STOP:STEP or a comma list")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trigl1", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="Favard constants K_k and bound constants F_k")
    p.add_argument("--kmax", type=int, default=12, metavar="K")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bspline", help="evaluate chi_h^k or one of its Fourier coefficients")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=float, required=True)
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--eval", help="points, comma list or START:STOP:STEP")
    what.add_argument("--fourier", type=int, metavar="M")
    p.set_defaults(func=cmd_bspline)

    p = sub.add_parser("euler", help="evaluate the Euler spline E_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eval", required=True, help="comma-separated points")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("approx", help="best L1 approximation of chi_h^k, h = alpha / (2n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("verify", help="run verification suites; exit 1 on any failure")
    p.add_argument("--suite", choices=("theorem", "identities", "all"), default="all")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", "-v", action="store_true", help="also print passing cases")
    _sweep_flags(p, DEFAULT_N, DEFAULT_K, DEFAULT_ALPHAS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="sweep (n, k, alpha) and emit a table")
    _sweep_flags(p, None, None, None)
    p.add_argument("--out", help="output file (stdout if omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--svg", help="also write an SVG chart here")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidArgumentError, UnsupportedInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
