"""Shared separable Gaussian filtering over 2D lattices."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import convolve1d


def gaussian_kernel1d(size: int, sigma: float) -> np.ndarray:
    """Normalized 1D Gaussian kernel of odd length `size`."""
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd and >= 1, got {size}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    half = size // 2
    offsets = np.arange(-half, half + 1, dtype=np.float64)
    kernel = np.exp(-(offsets**2) / (2.0 * sigma**2))
    return kernel / kernel.sum()


def smooth2d(field: np.ndarray, size: int, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing of the leading two axes, reflect padding.

    Trailing axes (e.g. channels) are filtered independently.
    """
    kernel = gaussian_kernel1d(size, sigma)
    out = convolve1d(np.asarray(field, dtype=np.float64), kernel, axis=0, mode="reflect")
    return convolve1d(out, kernel, axis=1, mode="reflect")
