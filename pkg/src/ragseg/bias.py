"""Structural attention bias: per-patch RAG bias, spatial Gaussian kernel,
their bilateral product, and biased scaled-dot-product attention."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .patch_bridge import PatchEdgeStats, PatchGrid, patch_neighbors

# Per-patch structural bias, shape (N,). Fixed across attention positions
# within an image, so it is stored per node rather than per pair.
NodeBias = np.ndarray


@dataclass(frozen=True)
class BiasMatrix:
    """Bilateral bias B[i][j] = g(i, j) * exp(b[i]); strictly positive."""

    values: np.ndarray
    sigma_spatial: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"bias matrix must be square, got shape {v.shape}")
        if self.sigma_spatial <= 0:
            raise ValueError("sigma_spatial must be positive")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class AttentionInputs:
    q: np.ndarray
    k: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=np.float64)
        k = np.asarray(self.k, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if q.shape != k.shape or q.shape[0] != v.shape[0] or q.ndim != 2 or v.ndim != 2:
            raise ValueError("Q, K, V must be (N, d) with shared N and matching Q/K d")
        for name, arr in (("Q", q), ("K", k), ("V", v)):
            if not np.isfinite(arr).all():
                raise ValueError(f"{name} contains NaN or Inf")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "v", v)

    @property
    def scale(self) -> float:
        return 1.0 / np.sqrt(self.q.shape[1])


def rag_bias(stats: PatchEdgeStats, grid: PatchGrid, neighborhood: int = 8) -> NodeBias:
    """b[i] = mean over patch i's existing neighbors k of (mu_ik + sigma_ik).

    Border patches average over however many neighbors they have; a 1x1 grid
    has none and gets b = 0 by convention.
    """
    if stats.neighborhood != neighborhood:
        raise ValueError(
            f"stats were computed under neighborhood {stats.neighborhood}, "
            f"requested {neighborhood}"
        )
    neighbors = patch_neighbors(grid.grid_w, grid.grid_h, neighborhood)
    b = np.zeros(grid.patch_count, dtype=np.float64)
    for i, adj in enumerate(neighbors):
        if adj:
            b[i] = float(np.mean([stats.mu(i, j) + stats.sigma(i, j) for j in adj]))
    return b


def spatial_gaussian(grid_w: int, grid_h: int, sigma: float) -> np.ndarray:
    """g(i, j) = exp(-||p_i - p_j||^2 / (2 sigma^2)) over integer patch coords."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    idx = np.arange(grid_w * grid_h)
    ys, xs = idx // grid_w, idx % grid_w
    sq = (ys[:, None] - ys[None, :]) ** 2 + (xs[:, None] - xs[None, :]) ** 2
    return np.exp(-sq / (2.0 * sigma**2))


def bilateral_bias(g: np.ndarray, b: NodeBias, sigma_spatial: float) -> BiasMatrix:
    """Combine the spatial kernel with the structural factor, row-wise exp(b[i])."""
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if g.shape != (b.shape[0], b.shape[0]):
        raise ValueError(f"kernel shape {g.shape} does not match bias length {b.shape[0]}")
    return BiasMatrix(g * np.exp(b)[:, None], sigma_spatial)


def biased_attention(inp: AttentionInputs, bias: BiasMatrix) -> np.ndarray:
    """softmax_j(Q_i . K_j / sqrt(d) + B_ij) @ V with max-subtracted softmax."""
    n = inp.q.shape[0]
    if bias.values.shape != (n, n):
        raise ValueError(f"bias shape {bias.values.shape} does not match N={n}")
    if not np.isfinite(bias.values).all():
        raise ValueError("bias matrix contains NaN or Inf")
    logits = inp.q @ inp.k.T * inp.scale + bias.values
    logits -= logits.max(axis=1, keepdims=True)
    weights = np.exp(logits)
    weights /= weights.sum(axis=1, keepdims=True)
    return weights @ inp.v
