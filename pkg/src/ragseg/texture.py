"""Per-region gray-level co-occurrence matrices and scalar texture features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import GrayImage

# (dy, dx) neighbor offsets: distance 1 at 0, 90, 45, 135 degrees. All four
# are accumulated into a single symmetrized matrix (isotropic convention).
DEFAULT_OFFSETS = ((0, 1), (1, 0), (1, 1), (1, -1))

FEATURE_NAMES = ("contrast", "homogeneity", "energy", "correlation")
# Contrast + homogeneity subset, the strongest two-feature combination.
F2F4 = ("contrast", "homogeneity")
COLOR_ONLY: tuple[str, ...] = ()


@dataclass(frozen=True)
class GlcmMatrix:
    """Symmetric normalized co-occurrence probabilities, shape (levels, levels)."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError(f"probs must be square, got shape {p.shape}")
        if p.min() < 0:
            raise ValueError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {p.sum()}")
        if not np.allclose(p, p.T, atol=1e-12):
            raise ValueError("matrix must be symmetric")
        object.__setattr__(self, "probs", p)

    @property
    def levels(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class TextureFeatures:
    contrast: float
    homogeneity: float
    energy: float
    correlation: float

    def as_array(self, subset: tuple[str, ...] = FEATURE_NAMES) -> np.ndarray:
        return np.array([getattr(self, name) for name in subset], dtype=np.float64)


def glcm(
    gray: GrayImage,
    mask: np.ndarray,
    offsets: tuple[tuple[int, int], ...] = DEFAULT_OFFSETS,
) -> GlcmMatrix:
    """Co-occurrence matrix of the masked region.

    Counts bin pairs for pixel pairs (x, x + offset) whose endpoints both lie
    inside the mask, symmetrizes (both orders counted), and normalizes to
    sum 1. A region with no valid pair collapses to P[b][b] = 1 at the
    region's dominant bin b.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != gray.data.shape:
        raise ValueError(f"mask shape {mask.shape} != image shape {gray.data.shape}")
    if not mask.any():
        raise ValueError("mask must be non-empty")

    levels = gray.levels
    data = gray.data
    counts = np.zeros((levels, levels), dtype=np.float64)
    h, w = data.shape
    for dy, dx in offsets:
        ys = slice(max(0, -dy), h - max(0, dy))
        xs = slice(max(0, -dx), w - max(0, dx))
        ys2 = slice(max(0, dy), h - max(0, -dy))
        xs2 = slice(max(0, dx), w - max(0, -dx))
        valid = mask[ys, xs] & mask[ys2, xs2]
        a = data[ys, xs][valid]
        b = data[ys2, xs2][valid]
        np.add.at(counts, (a, b), 1.0)
        np.add.at(counts, (b, a), 1.0)

    total = counts.sum()
    if total == 0:
        # Degenerate region (e.g. a single pixel): all mass on its own bin.
        vals, freq = np.unique(data[mask], return_counts=True)
        b = int(vals[np.argmax(freq)])
        counts[b, b] = 1.0
        total = 1.0
    return GlcmMatrix(counts / total)


def texture_features(p: GlcmMatrix) -> TextureFeatures:
    """Contrast, homogeneity, energy, and correlation of a GLCM.

    correlation uses the marginal means/stds of P; a degenerate marginal
    (sigma = 0, i.e. constant texture) is defined as correlation 1.
    """
    probs = p.probs
    levels = p.levels
    m = np.arange(levels, dtype=np.float64)
    mm, nn = np.meshgrid(m, m, indexing="ij")

    contrast = float(((mm - nn) ** 2 * probs).sum())
    homogeneity = float((probs / (1.0 + np.abs(mm - nn))).sum())
    energy = float((probs**2).sum())

    marg_m = probs.sum(axis=1)
    marg_n = probs.sum(axis=0)
    mu_m = float(m @ marg_m)
    mu_n = float(m @ marg_n)
    sigma_m = float(np.sqrt(((m - mu_m) ** 2) @ marg_m))
    sigma_n = float(np.sqrt(((m - mu_n) ** 2) @ marg_n))
    if sigma_m * sigma_n == 0.0:
        correlation = 1.0
    else:
        correlation = float(((mm - mu_m) * (nn - mu_n) * probs).sum() / (sigma_m * sigma_n))

    return TextureFeatures(contrast, homogeneity, energy, correlation)
