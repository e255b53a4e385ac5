"""End-to-end orchestration: image -> superpixels -> RAG -> patch bridge ->
bilateral bias, and embeddings -> fused similarity -> pixel label map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bias import BiasMatrix, NodeBias, bilateral_bias, rag_bias, spatial_gaussian
from .imaging import RgbImage, to_gray_quantized
from .patch_bridge import assign_patches, patch_pair_stats
from .rag import build_rag
from .simfusion import EmbeddingSet, cosine_similarity, fuse, predict, smooth_visual
from .superpixel import slic
from .texture import FEATURE_NAMES


@dataclass(frozen=True)
class PipelineConfig:
    n_segments: int = 300
    compactness: float = 10.0
    glcm_levels: int = 32
    feature_subset: tuple[str, ...] = FEATURE_NAMES
    neighborhood: int = 8
    patch_size: int = 16
    sigma_spatial: float = 5.0
    fusion_alpha: float = 0.6
    fusion_kernel: int = 3
    fusion_sigma: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.n_segments < 1:
            raise ValueError("n_segments must be >= 1")
        if self.compactness <= 0:
            raise ValueError("compactness must be positive")
        if self.glcm_levels < 2:
            raise ValueError("glcm_levels must be >= 2")
        if set(self.feature_subset) - set(FEATURE_NAMES):
            raise ValueError(f"unknown features in {self.feature_subset}")
        if self.neighborhood not in (4, 8):
            raise ValueError("neighborhood must be 4 or 8")
        if self.patch_size < 1:
            raise ValueError("patch_size must be >= 1")
        if self.sigma_spatial <= 0:
            raise ValueError("sigma_spatial must be positive")
        if not 0.0 <= self.fusion_alpha <= 1.0:
            raise ValueError("fusion_alpha must be in [0, 1]")
        if self.fusion_kernel < 1 or self.fusion_kernel % 2 == 0:
            raise ValueError("fusion_kernel must be odd and >= 1")
        if self.fusion_sigma <= 0:
            raise ValueError("fusion_sigma must be positive")


@dataclass(frozen=True)
class SegmentationResult:
    patch_labels: np.ndarray
    pixel_labels: np.ndarray
    fused_similarity: np.ndarray
    bias: BiasMatrix | None = None


def compute_node_bias(img: RgbImage, cfg: PipelineConfig) -> NodeBias:
    """Per-patch structural bias b for `img` under `cfg`."""
    spmap = slic(img, cfg.n_segments, cfg.compactness, seed=cfg.seed)
    gray = to_gray_quantized(img, cfg.glcm_levels)
    graph = build_rag(spmap, img, gray, cfg.feature_subset)
    grid = assign_patches(spmap, cfg.patch_size)
    stats = patch_pair_stats(grid, graph, cfg.neighborhood)
    return rag_bias(stats, grid, cfg.neighborhood)


def compute_bias_for_image(img: RgbImage, cfg: PipelineConfig) -> BiasMatrix:
    """Run the full structural chain and combine with the spatial kernel."""
    b = compute_node_bias(img, cfg)
    grid_w = -(-img.width // cfg.patch_size)
    grid_h = -(-img.height // cfg.patch_size)
    g = spatial_gaussian(grid_w, grid_h, cfg.sigma_spatial)
    return bilateral_bias(g, b, cfg.sigma_spatial)


def segment(
    img: RgbImage,
    emb: EmbeddingSet,
    cfg: PipelineConfig,
    bias: BiasMatrix | None = None,
) -> SegmentationResult:
    """Fuse raw and smoothed similarities, predict per patch, upsample to pixels.

    `emb` must be laid out on the image's patch grid. An externally computed
    bias matrix (already consumed by whatever produced the embeddings) can be
    attached to the result for inspection.
    """
    grid_w = -(-img.width // cfg.patch_size)
    grid_h = -(-img.height // cfg.patch_size)
    if (emb.grid_w, emb.grid_h) != (grid_w, grid_h):
        raise ValueError(
            f"embedding grid {emb.grid_h}x{emb.grid_w} does not match image grid "
            f"{grid_h}x{grid_w} at patch size {cfg.patch_size}"
        )
    s_raw = cosine_similarity(emb)
    s_smooth = cosine_similarity(smooth_visual(emb, cfg.fusion_kernel, cfg.fusion_sigma))
    fused = fuse(s_raw, s_smooth, cfg.fusion_alpha)
    patch_labels = predict(fused)
    pixel_labels = upsample_patch_labels(patch_labels, grid_w, grid_h, cfg.patch_size, img.width, img.height)
    return SegmentationResult(patch_labels, pixel_labels, fused, bias)


def upsample_patch_labels(
    patch_labels: np.ndarray,
    grid_w: int,
    grid_h: int,
    patch_size: int,
    width: int,
    height: int,
) -> np.ndarray:
    """Nearest-neighbor upsampling: each pixel takes its covering patch's label."""
    lattice = np.asarray(patch_labels).reshape(grid_h, grid_w)
    full = np.repeat(np.repeat(lattice, patch_size, axis=0), patch_size, axis=1)
    return full[:height, :width]


def evaluate_miou(
    pred: np.ndarray,
    gt: np.ndarray,
    num_classes: int,
    ignore_label: int | None = None,
) -> tuple[list[float | None], float]:
    """Per-class IoU and its mean.

    Classes absent from both maps are excluded from the mean (None in the
    per-class list); pixels whose ground truth equals `ignore_label` are
    excluded from every count.
    """
    pred = np.asarray(pred)
    gt = np.asarray(gt)
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape} vs gt {gt.shape}")
    if num_classes < 1:
        raise ValueError("num_classes must be >= 1")

    keep = np.ones(gt.shape, dtype=bool)
    if ignore_label is not None:
        keep = gt != ignore_label
    p = pred[keep].ravel()
    g = gt[keep].ravel()
    if ((p < 0) | (p >= num_classes)).any() or ((g < 0) | (g >= num_classes)).any():
        raise ValueError(f"labels outside [0, {num_classes}) present")

    confusion = np.bincount(
        g * num_classes + p, minlength=num_classes * num_classes
    ).reshape(num_classes, num_classes)
    inter = np.diag(confusion)
    union = confusion.sum(axis=0) + confusion.sum(axis=1) - inter

    per_class: list[float | None] = []
    present = []
    for c in range(num_classes):
        if union[c] == 0:
            per_class.append(None)
        else:
            iou = float(inter[c]) / float(union[c])
            per_class.append(iou)
            present.append(iou)
    mean = float(np.mean(present)) if present else 0.0
    return per_class, mean
