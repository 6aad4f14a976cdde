"""Command-line front end: ``plotgen render --summary s.csv --kind power --out f.png``.

Exit codes: 0 success, 2 schema error, 3 missing or mismatched sweep axis.
"""

import argparse
import sys

from .render import KINDS, MissingAxisError, SchemaError, render


def _build_parser():
    parser = argparse.ArgumentParser(prog="plotgen", description="Render sweep trend figures.")
    sub = parser.add_subparsers(dest="command", required=True)
    rend = sub.add_parser("render", help="render one figure from a summary CSV")
    rend.add_argument("--summary", required=True, help="summary CSV from the harness")
    rend.add_argument("--kind", required=True, choices=sorted(KINDS), help="figure kind")
    rend.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        modes = render(args.summary, args.kind, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MissingAxisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {args.out} with {len(modes)} curve(s): {', '.join(modes)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
