"""Command-line entry: render an EoP line chart or a runtime table from a CSV."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, SchemaError, render_eop_figure, render_runtime_table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="ssgplot", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    e = sub.add_parser("eop", help="mean-EoP lines per policy series")
    e.add_argument("--csv", required=True)
    e.add_argument("--x", choices=("rho", "n"), required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--title", default=None)
    e.add_argument("--stderr", action="store_true",
                   help="shade one standard error around each line")

    r = sub.add_parser("runtime", help="mean wall-time grid by (lambda, n)")
    r.add_argument("--csv", required=True)
    r.add_argument("--out", default=None)

    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.cmd == "eop":
            render_eop_figure(FigureSpec(args.csv, args.x, args.out,
                                         title=args.title,
                                         with_stderr=args.stderr))
            print(args.out)
        else:
            text = render_runtime_table(args.csv, args.out)
            if not args.out:
                print(text)
            else:
                print(args.out)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
