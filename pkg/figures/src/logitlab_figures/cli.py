"""CLI: figures <kind> --in <path> --out <path.png|svg>"""

import argparse
import sys

from .render import FigureSpec, KINDS, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="figures",
                                     description="Render logitlab sweep figures")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="in_path", required=True,
                        help="input CSV (harness curves output)")
    parser.add_argument("--out", dest="out_path", required=True,
                        help="output image (.png or .svg)")
    args = parser.parse_args(argv)
    try:
        out = render(FigureSpec(args.kind, args.in_path, args.out_path))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
