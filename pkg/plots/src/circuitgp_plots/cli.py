"""circuitgp-plot: render figures from circuitgp CSV files."""

from __future__ import annotations

import argparse
import sys

from . import KINDS, DataError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circuitgp-plot")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("render", help="draw one figure from CSV inputs")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="CSV", help="input table; repeat to overlay series")
    s.add_argument("--x", help="x column (scatter/density; rank defaults to rank)")
    s.add_argument("--y", help="y column (scatter; rank defaults to count)")
    s.add_argument("--label", dest="labels", action="append", default=[],
                   metavar="NAME", help="series label, one per --in")
    s.add_argument("--xlabel")
    s.add_argument("--ylabel")
    s.add_argument("--bins", type=int, default=20)
    s.add_argument("--out", required=True, metavar="IMAGE")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        spec = FigureSpec(
            kind=args.kind,
            inputs=tuple(args.inputs),
            out=args.out,
            x=args.x,
            y=args.y,
            labels=tuple(args.labels),
            xlabel=args.xlabel,
            ylabel=args.ylabel,
            bins=args.bins,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        report = render(spec)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write {spec.out}: {exc.strerror}", file=sys.stderr)
        return 2
    print(f"wrote {report.path}: {report.n_series} series")
    return 0


def entry() -> None:
    raise SystemExit(main())
