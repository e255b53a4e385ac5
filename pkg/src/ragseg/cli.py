"""Command-line front end: one verb per pipeline stage.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import tensorio
from .imaging import (
    Blur,
    Brightness,
    Grayscale,
    Jitter,
    corrupt,
    load_image,
    read_label_png,
    save_image,
    to_gray_quantized,
    write_label_png,
)
from .pipeline import PipelineConfig, compute_node_bias, evaluate_miou, segment
from .rag import build_rag, rag_to_json
from .simfusion import EmbeddingSet
from .superpixel import slic
from .bias import bilateral_bias, spatial_gaussian
from .texture import F2F4, FEATURE_NAMES

_DEFAULTS = PipelineConfig()
_FEATURE_CHOICES = {"all": FEATURE_NAMES, "f2f4": F2F4}

# Fixed corruption presets: over/under exposure factors, blur geometry.
_OVEREXPOSE = 1.8
_UNDEREXPOSE = 0.4
_BLUR_KERNEL = 9
_BLUR_SIGMA = 5.0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ragseg",
        description="Structure-aware rectification stages for open-vocabulary segmentation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rag = sub.add_parser("rag", help="build a region adjacency graph as JSON")
    p_rag.add_argument("--image", required=True, help="input PNG/PPM image")
    p_rag.add_argument("--segments", type=int, default=_DEFAULTS.n_segments,
                       help="superpixel count (default: %(default)s)")
    p_rag.add_argument("--compactness", type=float, default=_DEFAULTS.compactness,
                       help="superpixel compactness (default: %(default)s)")
    p_rag.add_argument("--levels", type=int, default=_DEFAULTS.glcm_levels,
                       help="gray quantization levels (default: %(default)s)")
    p_rag.add_argument("--features", choices=sorted(_FEATURE_CHOICES), default="all",
                       help="texture feature subset (default: %(default)s)")
    p_rag.add_argument("--seed", type=int, default=_DEFAULTS.seed,
                       help="seed (default: %(default)s)")
    p_rag.add_argument("--out", required=True, help="output RAG JSON path")

    p_bias = sub.add_parser("bias", help="compute the bilateral attention bias matrix")
    p_bias.add_argument("--image", required=True)
    p_bias.add_argument("--patch", type=int, default=_DEFAULTS.patch_size,
                        help="patch size in pixels (default: %(default)s)")
    p_bias.add_argument("--neigh", type=int, choices=(4, 8), default=_DEFAULTS.neighborhood,
                        help="patch neighborhood (default: %(default)s)")
    p_bias.add_argument("--sigma-spatial", type=float, default=_DEFAULTS.sigma_spatial,
                        help="spatial kernel sigma in patch units (default: %(default)s)")
    p_bias.add_argument("--segments", type=int, default=_DEFAULTS.n_segments,
                        help="superpixel count (default: %(default)s)")
    p_bias.add_argument("--compactness", type=float, default=_DEFAULTS.compactness,
                        help="superpixel compactness (default: %(default)s)")
    p_bias.add_argument("--levels", type=int, default=_DEFAULTS.glcm_levels,
                        help="gray quantization levels (default: %(default)s)")
    p_bias.add_argument("--features", choices=sorted(_FEATURE_CHOICES), default="all",
                        help="texture feature subset (default: %(default)s)")
    p_bias.add_argument("--seed", type=int, default=_DEFAULTS.seed,
                        help="seed (default: %(default)s)")
    p_bias.add_argument("--out", required=True, help="output bias tensor (.ragt)")
    p_bias.add_argument("--bias-vis", default=None,
                        help="optional per-patch exp(b) heatmap PNG")

    p_seg = sub.add_parser("segment", help="predict a label map from embeddings")
    p_seg.add_argument("--image", required=True)
    p_seg.add_argument("--vis", required=True, help="visual embedding tensor [N, D]")
    p_seg.add_argument("--txt", required=True, help="text embedding tensor [M, D]")
    p_seg.add_argument("--labels", required=True, help="JSON list of class names")
    p_seg.add_argument("--patch", type=int, default=_DEFAULTS.patch_size,
                       help="patch size in pixels (default: %(default)s)")
    p_seg.add_argument("--alpha", type=float, default=_DEFAULTS.fusion_alpha,
                       help="fusion weight on smoothed similarity (default: %(default)s)")
    p_seg.add_argument("--kernel", type=int, default=_DEFAULTS.fusion_kernel,
                       help="smoothing kernel size (default: %(default)s)")
    p_seg.add_argument("--sigma", type=float, default=_DEFAULTS.fusion_sigma,
                       help="smoothing kernel sigma (default: %(default)s)")
    p_seg.add_argument("--out", required=True, help="output label PNG")
    p_seg.add_argument("--report", default=None, help="optional JSON report path")

    p_eval = sub.add_parser("eval", help="mean IoU between label maps")
    p_eval.add_argument("--pred", required=True, help="predicted label PNG")
    p_eval.add_argument("--gt", required=True, help="ground-truth label PNG")
    p_eval.add_argument("--classes", type=int, required=True, help="number of classes")
    p_eval.add_argument("--ignore", type=int, default=None,
                        help="ground-truth label excluded from scoring")
    p_eval.add_argument("--out", required=True, help="output metrics JSON")

    p_cor = sub.add_parser("corrupt", help="apply a photometric corruption")
    p_cor.add_argument("--image", required=True)
    p_cor.add_argument("--mode", required=True,
                       choices=("jitter", "over", "under", "blur", "gray"))
    p_cor.add_argument("--seed", type=int, default=0,
                       help="jitter seed (default: %(default)s)")
    p_cor.add_argument("--out", required=True, help="output PNG")

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; map usage to 1.
        return 0 if exc.code == 0 else 1
    try:
        return _dispatch(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"ragseg {args.command}: {exc}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "rag":
        img = load_image(args.image)
        spmap = slic(img, args.segments, args.compactness, seed=args.seed)
        gray = to_gray_quantized(img, args.levels)
        graph = build_rag(spmap, img, gray, _FEATURE_CHOICES[args.features])
        with open(args.out, "w") as fh:
            fh.write(rag_to_json(graph))
        return 0

    if args.command == "bias":
        img = load_image(args.image)
        cfg = PipelineConfig(
            n_segments=args.segments,
            compactness=args.compactness,
            glcm_levels=args.levels,
            feature_subset=_FEATURE_CHOICES[args.features],
            neighborhood=args.neigh,
            patch_size=args.patch,
            sigma_spatial=args.sigma_spatial,
            seed=args.seed,
        )
        b = compute_node_bias(img, cfg)
        grid_w = -(-img.width // cfg.patch_size)
        grid_h = -(-img.height // cfg.patch_size)
        g = spatial_gaussian(grid_w, grid_h, cfg.sigma_spatial)
        matrix = bilateral_bias(g, b, cfg.sigma_spatial)
        tensorio.write_tensor(args.out, matrix.values.shape, matrix.values)
        if args.bias_vis:
            _write_bias_heatmap(np.exp(b).reshape(grid_h, grid_w), args.bias_vis)
        return 0

    if args.command == "segment":
        img = load_image(args.image)
        _, visual = tensorio.read_tensor(args.vis)
        _, text = tensorio.read_tensor(args.txt)
        with open(args.labels) as fh:
            names = json.load(fh)
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise ValueError(f"{args.labels} must hold a JSON list of class names")
        cfg = PipelineConfig(
            patch_size=args.patch,
            fusion_alpha=args.alpha,
            fusion_kernel=args.kernel,
            fusion_sigma=args.sigma,
        )
        grid_w = -(-img.width // cfg.patch_size)
        grid_h = -(-img.height // cfg.patch_size)
        emb = EmbeddingSet(visual, text, grid_w, grid_h, tuple(names))
        result = segment(img, emb, cfg)
        write_label_png(result.pixel_labels, args.out)
        if args.report:
            counts = np.bincount(result.pixel_labels.ravel(), minlength=len(names))
            report = {
                "width": img.width,
                "height": img.height,
                "patch_size": cfg.patch_size,
                "grid": [grid_h, grid_w],
                "alpha": cfg.fusion_alpha,
                "kernel": cfg.fusion_kernel,
                "sigma": cfg.fusion_sigma,
                "legend": {str(i): n for i, n in enumerate(names)},
                "pixel_counts": {str(i): int(c) for i, c in enumerate(counts)},
            }
            with open(args.report, "w") as fh:
                json.dump(report, fh, indent=2)
        return 0

    if args.command == "eval":
        pred = read_label_png(args.pred)
        gt = read_label_png(args.gt)
        per_class, mean = evaluate_miou(pred, gt, args.classes, args.ignore)
        with open(args.out, "w") as fh:
            json.dump({"per_class": per_class, "miou": mean}, fh, indent=2)
        return 0

    if args.command == "corrupt":
        img = load_image(args.image)
        mode = {
            "jitter": Jitter(seed=args.seed),
            "over": Brightness(_OVEREXPOSE),
            "under": Brightness(_UNDEREXPOSE),
            "blur": Blur(_BLUR_KERNEL, _BLUR_SIGMA),
            "gray": Grayscale(),
        }[args.mode]
        save_image(corrupt(img, mode), args.out)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def _write_bias_heatmap(field: np.ndarray, path) -> None:
    """Min-max normalized grayscale rendering of per-patch exp(b)."""
    from PIL import Image

    span = field.max() - field.min()
    norm = (field - field.min()) / span if span > 0 else np.zeros_like(field)
    Image.fromarray(np.rint(norm * 255).astype(np.uint8), mode="L").save(path, format="PNG")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
