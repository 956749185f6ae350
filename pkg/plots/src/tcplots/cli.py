"""tcplot: render simulator CSV/JSON files into PNG/SVG figures."""
from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import PLOT_KINDS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tcplot", description=__doc__)
    parser.add_argument("inputs", nargs="+", help="input data file(s)")
    parser.add_argument("--kind", required=True, choices=PLOT_KINDS, help="figure kind")
    parser.add_argument("-o", "--output", required=True, help="image path (.png or .svg)")
    parser.add_argument("--unwrap-phases", action="store_true",
                        help="unwrap phase series along 2 pi cycles (timeseries only)")
    parser.add_argument("--xlabel", default=None, help="x-axis label override")
    parser.add_argument("--ylabel", default=None, help="y-axis label override")
    parser.add_argument("--title", default=None, help="figure title")
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        inputs=tuple(args.inputs), kind=args.kind, output=args.output,
        xlabel=args.xlabel, ylabel=args.ylabel, title=args.title,
        unwrap=args.unwrap_phases,
    )
    try:
        path = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
