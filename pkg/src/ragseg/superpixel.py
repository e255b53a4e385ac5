"""SLIC superpixel segmentation.

Grid-seeded k-means in joint CIELAB + position space with a compactness
trade-off, followed by connectivity enforcement. Fully deterministic: seeds
sit on a regular grid and every tie-break is order-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from PIL import Image
from skimage.color import rgb2lab
from skimage.measure import label as cc_label

from .imaging import RgbImage


@dataclass(frozen=True)
class SuperpixelMap:
    """Per-pixel region labels in [0, region_count), each a 4-connected component."""

    labels: np.ndarray
    region_count: int

    def __post_init__(self):
        arr = np.asarray(self.labels, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"labels must be 2D, got shape {arr.shape}")
        if self.region_count < 1:
            raise ValueError("region_count must be >= 1")
        if arr.min() < 0 or arr.max() >= self.region_count:
            raise ValueError("labels must lie in [0, region_count)")
        present = np.unique(arr)
        if len(present) != self.region_count:
            raise ValueError("every label in [0, region_count) must occur")
        object.__setattr__(self, "labels", arr)

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]


def slic(
    img: RgbImage,
    n_segments: int = 300,
    compactness: float = 10.0,
    iterations: int = 10,
    seed: int = 0,
) -> SuperpixelMap:
    """Segment `img` into roughly `n_segments` compact superpixels.

    The pipeline: convert to Lab, seed cluster centers on a regular grid with
    spacing S = sqrt(H*W / n_segments), perturb each seed to the lowest-gradient
    pixel in its 3x3 neighborhood, run `iterations` rounds of windowed (2S x 2S)
    assignment with distance sqrt(d_lab^2 + (d_xy / S)^2 * m^2) and center
    updates, then absorb connected components smaller than S^2 / 4 into their
    largest neighbor and relabel contiguously.

    `seed` is accepted for interface stability; the algorithm draws no random
    numbers (grid initialization and stable tie-breaks make it deterministic).
    """
    del seed
    if n_segments < 1:
        raise ValueError(f"n_segments must be >= 1, got {n_segments}")
    if compactness <= 0:
        raise ValueError(f"compactness must be positive, got {compactness}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    h, w = img.height, img.width
    if n_segments > h * w:
        raise ValueError(f"n_segments {n_segments} exceeds pixel count {h * w}")

    lab = rgb2lab(img.data)
    spacing = np.sqrt(h * w / n_segments)

    centers = _initial_centers(lab, spacing)
    labels = _assign_iterate(lab, centers, spacing, compactness, iterations)
    labels = _enforce_connectivity(labels, min_size=max(1, int(spacing**2 / 4)))
    return SuperpixelMap(labels, int(labels.max()) + 1)


def _initial_centers(lab: np.ndarray, spacing: float) -> np.ndarray:
    """Grid seeds snapped to the lowest-gradient pixel in a 3x3 window.

    Returns (K, 5) rows [L, a, b, y, x].
    """
    h, w = lab.shape[:2]
    ny = max(1, round(h / spacing))
    nx = max(1, round(w / spacing))
    cy = ((np.arange(ny) + 0.5) * h / ny).astype(np.int64).clip(0, h - 1)
    cx = ((np.arange(nx) + 0.5) * w / nx).astype(np.int64).clip(0, w - 1)

    # Squared Lab gradient magnitude with replicated borders.
    padded = np.pad(lab, ((1, 1), (1, 1), (0, 0)), mode="edge")
    gy = padded[2:, 1:-1] - padded[:-2, 1:-1]
    gx = padded[1:-1, 2:] - padded[1:-1, :-2]
    grad = (gy**2).sum(axis=2) + (gx**2).sum(axis=2)

    centers = []
    for y in cy:
        for x in cx:
            y0, y1 = max(0, y - 1), min(h, y + 2)
            x0, x1 = max(0, x - 1), min(w, x + 2)
            window = grad[y0:y1, x0:x1]
            dy, dx = np.unravel_index(np.argmin(window), window.shape)
            py, px = y0 + dy, x0 + dx
            centers.append([lab[py, px, 0], lab[py, px, 1], lab[py, px, 2], py, px])
    return np.array(centers, dtype=np.float64)


def _assign_iterate(
    lab: np.ndarray,
    centers: np.ndarray,
    spacing: float,
    compactness: float,
    iterations: int,
) -> np.ndarray:
    h, w = lab.shape[:2]
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    ratio = (compactness / spacing) ** 2
    half = max(1, int(round(2 * spacing)))
    labels = np.zeros((h, w), dtype=np.int64)

    for _ in range(iterations):
        best = np.full((h, w), np.inf)
        labels.fill(-1)
        for k, (cl, ca, cb, cy, cx) in enumerate(centers):
            y0, y1 = max(0, int(cy) - half), min(h, int(cy) + half + 1)
            x0, x1 = max(0, int(cx) - half), min(w, int(cx) + half + 1)
            patch = lab[y0:y1, x0:x1]
            d_lab = (
                (patch[..., 0] - cl) ** 2
                + (patch[..., 1] - ca) ** 2
                + (patch[..., 2] - cb) ** 2
            )
            d_xy = (yy[y0:y1, x0:x1] - cy) ** 2 + (xx[y0:y1, x0:x1] - cx) ** 2
            dist = d_lab + d_xy * ratio
            view = best[y0:y1, x0:x1]
            closer = dist < view
            view[closer] = dist[closer]
            labels[y0:y1, x0:x1][closer] = k

        unassigned = labels < 0
        if unassigned.any():
            # Windows can miss pixels after large center drift: fall back to
            # the spatially nearest center.
            for y, x in zip(*np.nonzero(unassigned)):
                d = (centers[:, 3] - y) ** 2 + (centers[:, 4] - x) ** 2
                labels[y, x] = int(np.argmin(d))

        for k in range(len(centers)):
            member = labels == k
            if member.any():
                centers[k, :3] = lab[member].mean(axis=0)
                centers[k, 3] = yy[member].mean()
                centers[k, 4] = xx[member].mean()
    return labels


def _enforce_connectivity(labels: np.ndarray, min_size: int) -> np.ndarray:
    """Absorb 4-connected components below `min_size` into their largest neighbor."""
    comps = cc_label(labels, connectivity=1, background=-1) - 1
    n = int(comps.max()) + 1
    sizes = np.bincount(comps.ravel(), minlength=n).astype(np.int64)

    neighbors: list[set[int]] = [set() for _ in range(n)]
    for a, b in _adjacent_pairs(comps):
        neighbors[a].add(b)
        neighbors[b].add(a)

    parent = np.arange(n)

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # Merge smallest-first and repeat until a full pass changes nothing, so
    # regions that grow but stay undersized are revisited.
    changed = True
    while changed:
        changed = False
        roots = sorted({find(i) for i in range(n)}, key=lambda r: (sizes[r], r))
        for root in roots:
            if parent[root] != root or sizes[root] >= min_size:
                continue
            candidates = {find(j) for j in neighbors[root]} - {root}
            if not candidates:
                continue
            # Largest adjacent region; ties broken by lowest id for determinism.
            target = max(sorted(candidates), key=lambda r: sizes[r])
            parent[root] = target
            sizes[target] += sizes[root]
            neighbors[target] |= neighbors[root]
            changed = True

    roots = np.array([find(i) for i in range(n)])
    merged = roots[comps]

    # Contiguous ids in order of first appearance (row-major scan).
    _, first_index = np.unique(merged, return_index=True)
    order = merged.ravel()[np.sort(first_index)]
    remap = np.full(n, -1, dtype=np.int64)
    remap[order] = np.arange(len(order))
    return remap[merged]


def _adjacent_pairs(comps: np.ndarray):
    """Unique unordered 4-adjacent component pairs."""
    right = np.stack([comps[:, :-1].ravel(), comps[:, 1:].ravel()], axis=1)
    down = np.stack([comps[:-1, :].ravel(), comps[1:, :].ravel()], axis=1)
    pairs = np.concatenate([right, down])
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.sort(pairs, axis=1)
    return np.unique(pairs, axis=0)


# --- serialization -----------------------------------------------------------


def save_map(spmap: SuperpixelMap, png_path, json_path) -> None:
    """Write label ids as 16-bit grayscale PNG plus a JSON sidecar."""
    if spmap.region_count > 65536:
        raise ValueError("more than 65536 regions cannot be stored as 16-bit PNG")
    Image.fromarray(spmap.labels.astype(np.uint16)).save(png_path, format="PNG")
    sidecar = {
        "width": spmap.width,
        "height": spmap.height,
        "region_count": spmap.region_count,
    }
    with open(json_path, "w") as fh:
        json.dump(sidecar, fh)


def load_map(png_path, json_path) -> SuperpixelMap:
    with open(json_path) as fh:
        sidecar = json.load(fh)
    arr = np.asarray(Image.open(png_path)).astype(np.int64)
    if arr.shape != (sidecar["height"], sidecar["width"]):
        raise ValueError("label PNG dimensions disagree with sidecar")
    return SuperpixelMap(arr, sidecar["region_count"])
