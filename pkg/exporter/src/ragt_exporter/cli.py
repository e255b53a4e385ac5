"""Command-line exporter: plain and bias-injected embedding dumps."""

from __future__ import annotations

import argparse
import json
import sys

from .export import export_embeddings, export_with_bias
from .model import load_model


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ragt-export",
        description="Export frozen vision-language embeddings as RAGT tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("export", help="export visual and text embeddings")
    p_exp.add_argument("--model", default="toy", help="model spec (default: %(default)s)")
    p_exp.add_argument("--image", required=True)
    p_exp.add_argument("--prompts", required=True,
                       help="JSON file holding a list of prompt strings")
    p_exp.add_argument("--visual-out", required=True)
    p_exp.add_argument("--text-out", required=True)
    p_exp.add_argument("--manifest", required=True)

    p_bias = sub.add_parser("export-biased",
                            help="export patch embeddings with attention bias injected")
    p_bias.add_argument("--model", default="toy", help="model spec (default: %(default)s)")
    p_bias.add_argument("--image", required=True)
    p_bias.add_argument("--bias", required=True, help="RAGT tensor, (N, N) patch bias")
    p_bias.add_argument("--blocks", type=int, default=1,
                        help="how many final blocks receive the bias (default: %(default)s)")
    p_bias.add_argument("--visual-out", required=True)
    p_bias.add_argument("--manifest", required=True)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        model = load_model(args.model)
        if args.command == "export":
            with open(args.prompts) as fh:
                prompts = json.load(fh)
            export_embeddings(model, args.image, prompts,
                              args.visual_out, args.text_out, args.manifest)
        else:
            export_with_bias(model, args.image, args.bias,
                             args.visual_out, args.manifest, blocks=args.blocks)
        return 0
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"ragt-export: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
