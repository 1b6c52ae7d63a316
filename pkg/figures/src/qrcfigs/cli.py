"""Command-line figure regeneration: render --figure 2a --in DIR --out FILE."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .render import FIGURES, FigureSpec, MissingColumnError, RenderError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render", description="Regenerate figures from experiment CSV outputs"
    )
    parser.add_argument("--figure", required=True, choices=sorted(FIGURES))
    parser.add_argument("--in", dest="input_dir", required=True, help="run or sweep directory")
    parser.add_argument("--out", dest="output_path", required=True, help="image file to write")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        figure=args.figure,
        input_dir=Path(args.input_dir),
        output_path=Path(args.output_path),
    )
    try:
        render(spec)
    except MissingColumnError as exc:
        print(json.dumps({"error": "missing-columns", "message": str(exc)}), file=sys.stderr)
        return 2
    except RenderError as exc:
        print(json.dumps({"error": "render-error", "message": str(exc)}), file=sys.stderr)
        return 2
    print(f"wrote {args.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
