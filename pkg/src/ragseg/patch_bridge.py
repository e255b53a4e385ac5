"""Bridge superpixel structure onto the transformer patch grid.

Each patch collects the regions intersecting its pixel rectangle; for every
pair of adjacent patches, the normalized distances between all cross pairs
of member regions are summarized as (mean, standard deviation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rag import RagGraph
from .superpixel import SuperpixelMap


@dataclass(frozen=True)
class PatchGrid:
    """Patch lattice over the image; patches indexed row-major (y * grid_w + x)."""

    patch_size: int
    grid_w: int
    grid_h: int
    memberships: list[np.ndarray]

    def __post_init__(self):
        if len(self.memberships) != self.grid_w * self.grid_h:
            raise ValueError("membership list length must equal grid_w * grid_h")
        if any(len(m) == 0 for m in self.memberships):
            raise ValueError("every patch must intersect at least one region")

    @property
    def patch_count(self) -> int:
        return self.grid_w * self.grid_h


@dataclass(frozen=True)
class PatchEdgeStats:
    """Per adjacent patch pair (i, j), i < j: mean and std of cross distances."""

    pairs: dict[tuple[int, int], tuple[float, float]]
    neighborhood: int

    def mu(self, i: int, j: int) -> float:
        return self.pairs[_ordered(i, j)][0]

    def sigma(self, i: int, j: int) -> float:
        return self.pairs[_ordered(i, j)][1]


def _ordered(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def assign_patches(spmap: SuperpixelMap, patch_size: int) -> PatchGrid:
    """Region r belongs to patch p iff some pixel of r lies in p's rectangle.

    Border patches cover the leftover (smaller) rectangles, so the grid is
    ceil(W / patch_size) x ceil(H / patch_size).
    """
    if patch_size < 1:
        raise ValueError(f"patch_size must be >= 1, got {patch_size}")
    grid_w = -(-spmap.width // patch_size)
    grid_h = -(-spmap.height // patch_size)

    yy, xx = np.mgrid[0 : spmap.height, 0 : spmap.width]
    patch_idx = (yy // patch_size) * grid_w + (xx // patch_size)
    pairs = np.unique(
        np.stack([patch_idx.ravel(), spmap.labels.ravel()], axis=1), axis=0
    )
    memberships: list[np.ndarray] = [
        pairs[pairs[:, 0] == p, 1] for p in range(grid_w * grid_h)
    ]
    return PatchGrid(patch_size, grid_w, grid_h, memberships)


def patch_neighbors(grid_w: int, grid_h: int, neighborhood: int) -> list[list[int]]:
    """Adjacency lists over the patch lattice (4 = cross, 8 = with diagonals)."""
    if neighborhood not in (4, 8):
        raise ValueError(f"neighborhood must be 4 or 8, got {neighborhood}")
    offsets = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    if neighborhood == 8:
        offsets += [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    out: list[list[int]] = []
    for y in range(grid_h):
        for x in range(grid_w):
            adj = [
                (y + dy) * grid_w + (x + dx)
                for dy, dx in offsets
                if 0 <= y + dy < grid_h and 0 <= x + dx < grid_w
            ]
            out.append(sorted(adj))
    return out


def patch_pair_stats(
    grid: PatchGrid, graph: RagGraph, neighborhood: int = 8
) -> PatchEdgeStats:
    """Mean/std of normalized region distances across each adjacent patch pair.

    The cross-pair set spans ALL member pairs (not only RAG-adjacent ones);
    a region present in both patches contributes its zero self-distance.
    Variance is the population variance; sigma is its square root.
    """
    if max(int(m.max()) for m in grid.memberships) >= graph.region_count():
        raise ValueError("patch grid references regions outside the graph")
    dist = graph.normalized_distances()
    neighbors = patch_neighbors(grid.grid_w, grid.grid_h, neighborhood)

    pairs: dict[tuple[int, int], tuple[float, float]] = {}
    for i, adj in enumerate(neighbors):
        for j in adj:
            if j <= i:
                continue
            cross = dist[np.ix_(grid.memberships[i], grid.memberships[j])]
            pairs[(i, j)] = (float(cross.mean()), float(cross.std()))
    return PatchEdgeStats(pairs, neighborhood)
