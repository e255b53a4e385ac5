"""Visual-text cosine similarity, patch-lattice feature smoothing,
geometric-mean fusion, and argmax label prediction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._gaussian import smooth2d

# Cosine values at or below this are treated as uninformative: both fusion
# inputs are clamped here before exponentiation, since x^alpha is undefined
# for x <= 0. Ordering among positive scores is preserved.
FUSION_EPS = 1e-6

# N x M similarity scores (visual rows, text columns).
SimilarityMatrix = np.ndarray


@dataclass(frozen=True)
class EmbeddingSet:
    """Patch embeddings (grid-ordered row-major) plus text embeddings.

    Rows must have norms >= 1e-12 by the time similarities are computed;
    cosine_similarity enforces this (smoothing intermediates may hold
    zero rows).
    """

    visual: np.ndarray
    text: np.ndarray
    grid_w: int
    grid_h: int
    class_names: tuple[str, ...]

    def __post_init__(self):
        visual = np.asarray(self.visual, dtype=np.float64)
        text = np.asarray(self.text, dtype=np.float64)
        if visual.ndim != 2 or text.ndim != 2 or visual.shape[1] != text.shape[1]:
            raise ValueError("visual and text must be 2D with a shared feature dim")
        if visual.shape[0] != self.grid_w * self.grid_h:
            raise ValueError(
                f"visual rows {visual.shape[0]} != grid {self.grid_h}x{self.grid_w}"
            )
        if len(self.class_names) != text.shape[0]:
            raise ValueError("one class name per text embedding required")
        object.__setattr__(self, "visual", visual)
        object.__setattr__(self, "text", text)


def cosine_similarity(emb: EmbeddingSet) -> SimilarityMatrix:
    for name, arr in (("visual", emb.visual), ("text", emb.text)):
        if (np.linalg.norm(arr, axis=1) < 1e-12).any():
            raise ValueError(f"{name} embeddings contain a zero-norm row")
    v = emb.visual / np.linalg.norm(emb.visual, axis=1, keepdims=True)
    t = emb.text / np.linalg.norm(emb.text, axis=1, keepdims=True)
    return v @ t.T


def smooth_visual(emb: EmbeddingSet, kernel_size: int = 3, sigma: float = 3.0) -> EmbeddingSet:
    """Gaussian-smooth each feature channel over the patch lattice.

    Reflect padding; the (truncated) kernel is renormalized so weights sum
    to 1, making kernel_size=1 and constant fields exact identities.
    """
    field = emb.visual.reshape(emb.grid_h, emb.grid_w, -1)
    smoothed = smooth2d(field, kernel_size, sigma)
    return EmbeddingSet(
        smoothed.reshape(emb.visual.shape),
        emb.text,
        emb.grid_w,
        emb.grid_h,
        emb.class_names,
    )


def fuse(s: SimilarityMatrix, s_smooth: SimilarityMatrix, alpha: float = 0.6) -> SimilarityMatrix:
    """Geometric-mean fusion: clamp(s_smooth)^alpha * clamp(s)^(1 - alpha)."""
    s = np.asarray(s, dtype=np.float64)
    s_smooth = np.asarray(s_smooth, dtype=np.float64)
    if s.shape != s_smooth.shape:
        raise ValueError(f"shape mismatch: {s.shape} vs {s_smooth.shape}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    s = np.maximum(s, FUSION_EPS)
    s_smooth = np.maximum(s_smooth, FUSION_EPS)
    return s_smooth**alpha * s ** (1.0 - alpha)


def predict(s: SimilarityMatrix) -> np.ndarray:
    """Per-patch argmax class; ties resolved to the lowest class index."""
    s = np.asarray(s)
    if s.ndim != 2 or s.shape[1] < 1:
        raise ValueError(f"similarity matrix must be (N, M>=1), got shape {s.shape}")
    return np.argmax(s, axis=1)
