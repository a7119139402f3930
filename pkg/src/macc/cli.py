"""Command line front end.

Subcommands: analyze, simulate, sweep, verify-examples, tables.
Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence, Union

from .baselines import Scheme
from .combinatorics import binom
from .harness import (
    SweepSpec,
    analyze_report,
    parse_fraction,
    run_sweep,
    run_tables,
    simulate_report,
    verify_reference_cases,
    write_sweep_csv,
)
from .scheme import SchemeParams


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit 1 instead of the default 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma list of integers: {text!r}") from exc


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [parse_fraction(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _scheme_list(text: str) -> list[Scheme]:
    out = []
    for part in text.split(","):
        name = part.strip().lower()
        if not name:
            continue
        try:
            out.append(Scheme(name))
        except ValueError as exc:
            valid = ", ".join(s.value for s in Scheme)
            raise argparse.ArgumentTypeError(
                f"unknown scheme {part.strip()!r}; valid: {valid}"
            ) from exc
    return out


def _integer_t(C: int, t: Union[int, None], mn: Union[Fraction, None], parser_error) -> int:
    if (t is None) == (mn is None):
        parser_error("exactly one of --t and --mn is required")
    if t is not None:
        return t
    scaled = mn * C
    if scaled.denominator != 1:
        parser_error(
            f"--mn {mn} gives non-integer cache parameter {scaled}; "
            "memory-sharing points are available through `sweep`"
        )
    return int(scaled)


def _cmd_analyze(args: argparse.Namespace) -> int:
    t = _integer_t(args.caches, args.t, args.mn, args.parser.error)
    files = args.files if args.files is not None else binom(args.caches, args.access)
    params = SchemeParams(args.caches, args.access, t, files)
    print(json.dumps(analyze_report(params), indent=2))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    t = _integer_t(args.caches, args.t, args.mn, args.parser.error)
    report = simulate_report(
        C=args.caches,
        r=args.access,
        t=t,
        N=args.files,
        file_size=args.file_size,
        seed=args.seed,
        demand_mode=args.demand_mode,
        active=args.active,
        force=args.force,
    )
    if args.json:
        print(json.dumps(report, indent=2))
    elif report["rates_equal"]:
        print(
            f"{report['decoded_ok']} users decoded OK, "
            f"measured rate = analytic rate = {report['measured_rate']}"
        )
    else:
        print(
            f"{report['decoded_ok']} users decoded OK, "
            f"measured rate {report['measured_rate']} below analytic rate "
            f"{report['analytic_rate']} (partial population)"
        )
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    if (args.t is None) == (args.mn is None):
        args.parser.error("exactly one of --t and --mn is required")
    if args.t is not None:
        params = tuple(Fraction(v) for v in args.t)
        kind = "t"
    else:
        params = tuple(args.mn)
        kind = "mn"
    spec = SweepSpec(
        cache_counts=tuple(args.caches),
        access_degrees=tuple(args.access),
        cache_params=params,
        schemes=tuple(args.schemes),
        output_path=args.out,
        metric=args.metric,
        param_kind=kind,
    )
    rows = run_sweep(spec)
    if args.out is None:
        write_sweep_csv(rows, sys.stdout)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as handle:
                write_sweep_csv(rows, handle)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 1
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return 0


def _report_lines(ok: bool, lines: list[str], as_json: bool) -> int:
    if as_json:
        print(json.dumps({"ok": ok, "lines": lines}, indent=2))
    else:
        for line in lines:
            print(line)
        print("RESULT: " + ("all checks passed" if ok else "checks FAILED"))
    return 0 if ok else 2


def _cmd_verify_examples(args: argparse.Namespace) -> int:
    ok, lines = verify_reference_cases()
    return _report_lines(ok, lines, args.json)


def _cmd_tables(args: argparse.Namespace) -> int:
    ok, lines = run_tables()
    return _report_lines(ok, lines, args.json)


def _add_point_flags(sub: argparse.ArgumentParser, lists: bool = False) -> None:
    if lists:
        sub.add_argument("--caches", "-C", type=_int_list, required=True,
                         help="comma list of cache counts")
        sub.add_argument("--access", "-r", type=_int_list, required=True,
                         help="comma list of access degrees")
        sub.add_argument("--t", type=_int_list, default=None,
                         help="comma list of integer cache parameters")
        sub.add_argument("--mn", type=_fraction_list, default=None,
                         help="comma list of memory fractions M/N (p/q or decimal)")
    else:
        sub.add_argument("--caches", "-C", type=int, required=True, help="number of caches")
        sub.add_argument("--access", "-r", type=int, required=True,
                         help="caches each user reads")
        sub.add_argument("--t", type=int, default=None, help="integer cache parameter t")
        sub.add_argument("--mn", type=parse_fraction, default=None,
                         help="memory fraction M/N; must give integer t = C*M/N")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="macc",
        description="Multi-access coded caching: exact metrics, byte-level "
        "simulation, and analytic comparisons.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze = subparsers.add_parser("analyze", help="closed-form metrics at one point")
    _add_point_flags(analyze)
    analyze.add_argument("--files", "-N", type=int, default=None,
                         help="library size (default: number of users)")
    analyze.set_defaults(func=_cmd_analyze)

    simulate = subparsers.add_parser("simulate", help="seeded byte-level end-to-end run")
    _add_point_flags(simulate)
    simulate.add_argument("--files", "-N", type=int, default=None,
                          help="library size (default: number of active users)")
    simulate.add_argument("--file-size", type=int, default=64, help="bytes per file")
    simulate.add_argument("--seed", type=int, default=0, help="root seed")
    simulate.add_argument("--demand-mode", choices=("distinct", "random", "worst"),
                          default="distinct")
    simulate.add_argument("--active", type=int, default=None,
                          help="simulate only this many (seeded) active users")
    simulate.add_argument("--force", action="store_true",
                          help="run past the use-at-most-1e6-users guardrail")
    simulate.add_argument("--json", action="store_true", help="machine-readable report")
    simulate.set_defaults(func=_cmd_simulate)

    sweep = subparsers.add_parser("sweep", help="comparison grid as CSV")
    _add_point_flags(sweep, lists=True)
    sweep.add_argument("--schemes", type=_scheme_list,
                       default=list(Scheme), help="comma list (default: all)")
    sweep.add_argument("--metric",
                       choices=("per_user_rate", "rate", "subpacketization"),
                       default="per_user_rate",
                       help="headline metric the sweep is meant to compare")
    sweep.add_argument("--out", default=None, help="CSV path (default: stdout)")
    sweep.set_defaults(func=_cmd_sweep)

    verify = subparsers.add_parser("verify-examples",
                                   help="regenerate the frozen reference cases")
    verify.add_argument("--json", action="store_true", help="machine-readable report")
    verify.set_defaults(func=_cmd_verify_examples)

    tables = subparsers.add_parser("tables", help="recompute the published ratio tables")
    tables.add_argument("--json", action="store_true", help="machine-readable report")
    tables.set_defaults(func=_cmd_tables)

    return parser


def main(argv: Union[Sequence[str], None] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    args.parser = parser
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
