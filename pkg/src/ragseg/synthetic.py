"""Synthetic textured test images.

Generates blocky scenes whose regions are deliberately color-ambiguous
(base colors drawn from a small near-equidistant palette) but carry
distinct surface textures (flat, stripes, checker, noise). Under such
ambiguity, color-only edge weights are fragile to photometric jitter
while texture statistics stay informative, which is what the robustness
benchmarks measure.
"""

from __future__ import annotations

import numpy as np

from .imaging import RgbImage

TEXTURE_KINDS = ("flat", "hstripes", "vstripes", "checker", "noise")

# Regular tetrahedron around mid-gray: every pair of palette colors sits at
# the same RGB distance, so color alone barely ranks region pairs.
_PALETTE_DIRS = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64
)


def _texture_field(kind: str, h: int, w: int, rng: np.random.Generator) -> np.ndarray:
    """Zero-centered luminance modulation in [-1, 1]."""
    yy, xx = np.mgrid[0:h, 0:w]
    if kind == "flat":
        return np.zeros((h, w))
    if kind == "hstripes":
        return np.where(yy % 4 < 2, 1.0, -1.0)
    if kind == "vstripes":
        return np.where(xx % 4 < 2, 1.0, -1.0)
    if kind == "checker":
        return np.where((yy // 2 + xx // 2) % 2 == 0, 1.0, -1.0)
    if kind == "noise":
        return rng.uniform(-1.0, 1.0, size=(h, w))
    raise ValueError(f"unknown texture kind {kind!r}")


def textured_blocks(
    size: int = 64,
    blocks: int = 4,
    palette_scale: float = 0.08,
    amplitude: float = 0.2,
    seed: int = 0,
) -> RgbImage:
    """A `blocks` x `blocks` mosaic of color-ambiguous, textured regions."""
    rng = np.random.default_rng(seed)
    img = np.zeros((size, size, 3))
    edges = np.linspace(0, size, blocks + 1).astype(int)
    for by in range(blocks):
        for bx in range(blocks):
            y0, y1 = edges[by], edges[by + 1]
            x0, x1 = edges[bx], edges[bx + 1]
            base = 0.5 + _PALETTE_DIRS[rng.integers(len(_PALETTE_DIRS))] * palette_scale
            kind = TEXTURE_KINDS[rng.integers(len(TEXTURE_KINDS))]
            mod = _texture_field(kind, y1 - y0, x1 - x0, rng) * amplitude
            img[y0:y1, x0:x1] = np.clip(base[None, None, :] + mod[..., None], 0.0, 1.0)
    return RgbImage(img)


def planted_class_lattice(
    grid_h: int, grid_w: int, num_classes: int, block: int = 4, seed: int = 0
) -> np.ndarray:
    """Blocky per-patch class assignment, shape (grid_h * grid_w,).

    Classes are drawn per `block` x `block` tile, so the layout is spatially
    coherent (what feature smoothing assumes); not every class is guaranteed
    to appear.
    """
    rng = np.random.default_rng(seed)
    by = -(-grid_h // block)
    bx = -(-grid_w // block)
    coarse = rng.integers(num_classes, size=(by, bx))
    labels = np.repeat(np.repeat(coarse, block, axis=0), block, axis=1)
    return labels[:grid_h, :grid_w].ravel()
