import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ragseg import RgbImage


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def random_image(rng, h=32, w=32) -> RgbImage:
    return RgbImage(rng.uniform(0.0, 1.0, size=(h, w, 3)))


def voronoi_labels(rng, h: int, w: int, k: int) -> np.ndarray:
    """Random nearest-seed partition: a valid superpixelization with k regions."""
    while True:
        seeds = np.stack(
            [rng.integers(0, h, size=k), rng.integers(0, w, size=k)], axis=1
        ).astype(np.float64)
        yy, xx = np.mgrid[0:h, 0:w]
        d = (yy[..., None] - seeds[:, 0]) ** 2 + (xx[..., None] - seeds[:, 1]) ** 2
        labels = np.argmin(d, axis=2)
        present = np.unique(labels)
        if len(present) == k:
            return labels
        # Relabel to a contiguous range if duplicate seeds dropped a region.
        remap = np.full(k, -1)
        remap[present] = np.arange(len(present))
        return remap[labels]
