"""Command line entry point: ``opdisk verify | moment-image | scalar-compare``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algebra import Algebra
from .errors import ConfigError
from .harness import (
    SuiteConfig,
    all_passed,
    moment_image_csv,
    report_json,
    run_suite,
    sample_moment_image,
)

SUITE_CHOICES = ("algebraic", "differential", "scalar_oracle", "moment", "halfspace", "all")


def _algebra(text: str) -> Algebra:
    try:
        return Algebra.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _summary(reports) -> None:
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        err = "n/a" if r.max_error == float("inf") else f"{r.max_error:.3e}"
        print(f"{status}  {r.check_name:<32} max_error={err}  tol={r.tolerance:.1e}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opdisk", description="Operator Poincare disk verification suites")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run property suites and write a JSON report")
    v.add_argument("--algebra", type=_algebra, default=Algebra.matrix(3))
    v.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol-exact", type=float, default=1e-9)
    v.add_argument("--tol-fd", type=float, default=1e-4)
    v.add_argument("--fd-step", type=float, default=1e-4)
    v.add_argument("--out", default=None, help="JSON path (stdout when omitted)")
    v.add_argument("--quiet", action="store_true")

    m = sub.add_parser("moment-image", help="sample the restricted moment image as CSV")
    m.add_argument("--algebra", type=_algebra, default=Algebra.scalar())
    m.add_argument("--grid", type=int, default=10)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", default=None, help="CSV path (stdout when omitted)")

    s = sub.add_parser("scalar-compare", help="compare the general machinery with scalar closed forms")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.add_argument("--quiet", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            config = SuiteConfig(args.algebra, args.samples, args.seed,
                                 args.tol_exact, args.tol_fd, args.fd_step)
            reports = run_suite(config, args.suite)
            _write(args.out, report_json(config, args.suite, reports))
            if not args.quiet:
                _summary(reports)
            return 0 if all_passed(reports) else 1
        if args.command == "scalar-compare":
            config = SuiteConfig(Algebra.scalar(), args.samples, args.seed)
            reports = run_suite(config, "scalar_oracle")
            _write(args.out, report_json(config, "scalar_oracle", reports))
            if not args.quiet:
                _summary(reports)
            return 0 if all_passed(reports) else 1
        config = SuiteConfig(args.algebra, 1, args.seed)
        rows = sample_moment_image(config, args.grid)
        _write(args.out, moment_image_csv(rows))
        return 0 if all(r["certificate_pass"] for r in rows) else 1
    except ConfigError as exc:
        print(f"opdisk: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
