"""Dispatcher: render one reproduction target's CSV directory to images."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FORMATS, PanelSpec, render
from .schema import TARGET_SCHEMAS, FigureDataError

EXIT_OK = 0
EXIT_DATA = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


class _Usage(Exception):
    pass


def build_parser() -> _Parser:
    parser = _Parser(prog="pxpfsa-figures", description=__doc__)
    parser.add_argument("target", help=f"one of: {', '.join(sorted(TARGET_SCHEMAS))}")
    parser.add_argument("--data", type=Path, required=True,
                        help="directory with the target's CSV files")
    parser.add_argument("--out", type=Path, default=None,
                        help="output stem (default: <data>/<target>)")
    parser.add_argument("--formats", default=",".join(FORMATS),
                        help="comma-separated image formats")
    parser.add_argument("--xlabel")
    parser.add_argument("--ylabel")
    parser.add_argument("--log-y", action="store_true", dest="log_y")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.target not in TARGET_SCHEMAS:
            raise _Usage(f"unknown target {args.target!r}")
        stem = args.out if args.out else args.data / args.target
        spec = PanelSpec(target=args.target, data_dir=args.data, out_stem=stem,
                         formats=tuple(f for f in args.formats.split(",") if f),
                         xlabel=args.xlabel, ylabel=args.ylabel, log_y=args.log_y)
        written = render(spec)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FigureDataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    for path in written:
        print(path)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
