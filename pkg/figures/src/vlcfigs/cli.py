"""
Command-line entry point.

    vlcfigs render --results <dir> --out <dir> [--smooth N]

Reads a results directory written by the simulator CLI and regenerates
the four comparison figures (PNG and SVG).  Exit code 0 on success, 1
when the results directory is missing or empty.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import DEFAULT_SMOOTH, RenderError, render_all


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlcfigs", description=__doc__.strip().splitlines()[-2].strip()
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render the four comparison figures")
    p.add_argument("--results", type=Path, required=True,
                   help="results directory written by the simulator")
    p.add_argument("--out", type=Path, required=True,
                   help="directory for the rendered images")
    p.add_argument("--smooth", type=int, default=DEFAULT_SMOOTH, metavar="N",
                   help=f"rolling-mean window in slots (default {DEFAULT_SMOOTH}; "
                        "1 plots the raw per-slot series)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        written = render_all(args.results, args.out, smooth_window=args.smooth)
    except (RenderError, ValueError) as exc:
        print(f"vlcfigs: error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
