"""Standalone figure scripts: one subcommand per figure kind.

Exit codes: 0 success, 2 on schema mismatch or bad arguments.
"""

from __future__ import annotations

import argparse
import sys

from .render import FigureRecipe, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osee-figures",
        description="Render figures from osee CLI output files.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_common(p):
        p.add_argument("--out", required=True, help="output image path")
        p.add_argument("--title")
        p.add_argument("--dpi", type=int, default=150)

    p = sub.add_parser("heatmap", help="phase-diagram CSV -> heatmap + critical line")
    p.add_argument("phase_csv")
    p.add_argument("--no-critical-line", action="store_true")
    add_common(p)

    p = sub.add_parser("trace", help="trace CSV (+ fit JSON) -> S vs log t")
    p.add_argument("trace_csv")
    p.add_argument("--fit", help="fit JSON with the slope to overlay")
    add_common(p)

    p = sub.add_parser("dispersion", help="dispersion CSV (+ points JSON) -> bands")
    p.add_argument("dispersion_csv")
    p.add_argument("--points", help="stationary-point JSON block")
    add_common(p)

    p = sub.add_parser("ensemble", help="disorder manifest -> mean curves + plateaus")
    p.add_argument("manifest_json")
    add_common(p)
    return parser


def recipe_from_args(args: argparse.Namespace) -> FigureRecipe:
    if args.cmd == "heatmap":
        return FigureRecipe(kind="heatmap", inputs=(args.phase_csv,), out=args.out,
                            title=args.title, dpi=args.dpi,
                            critical_line=not args.no_critical_line)
    if args.cmd == "trace":
        inputs = (args.trace_csv,) if args.fit is None else (args.trace_csv, args.fit)
        return FigureRecipe(kind="trace", inputs=inputs, out=args.out,
                            title=args.title, dpi=args.dpi)
    if args.cmd == "dispersion":
        inputs = (args.dispersion_csv,)
        if args.points is not None:
            inputs = (args.dispersion_csv, args.points)
        return FigureRecipe(kind="dispersion", inputs=inputs, out=args.out,
                            title=args.title, dpi=args.dpi)
    return FigureRecipe(kind="ensemble", inputs=(args.manifest_json,), out=args.out,
                        title=args.title, dpi=args.dpi)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(recipe_from_args(args))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
