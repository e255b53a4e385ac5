"""Image containers, grayscale quantization, and the corruption suite.

Images are kept as float arrays in [0, 1]; 8-bit files are divided by 255
on load so that every downstream distance stays scale-bounded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError
from skimage.color import hsv2rgb, rgb2hsv

from ._gaussian import smooth2d

# ITU-R BT.601 luma. The division happens after the weighted sum so that
# exact decimal inputs (0.5, 1.0, ...) quantize without float drift.
_LUMA_NUM = np.array([299.0, 587.0, 114.0])

_SUPPORTED_FORMATS = {"PNG", "PPM"}


class ImageFormatError(ValueError):
    """Raised for files that decode but are not a supported format."""


@dataclass(frozen=True)
class RgbImage:
    """RGB image, channels normalized to [0, 1], shape (height, width, 3)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) data, got shape {arr.shape}")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("channel values must lie in [0, 1]")
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class GrayImage:
    """Quantized grayscale image: integer bin indices in [0, levels)."""

    data: np.ndarray
    levels: int

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"expected (H, W) data, got shape {arr.shape}")
        if self.levels < 2:
            raise ValueError(f"levels must be >= 2, got {self.levels}")
        if arr.min() < 0 or arr.max() >= self.levels:
            raise ValueError("bin indices must lie in [0, levels)")
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


def load_image(path) -> RgbImage:
    """Load a PNG or binary PPM file as a normalized RGB image."""
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in _SUPPORTED_FORMATS:
                raise ImageFormatError(f"unsupported image format {fmt!r} for {path}")
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.float64) / 255.0
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"cannot decode {path}") from exc
    return RgbImage(arr)


def save_image(img: RgbImage, path) -> None:
    """Write an RGB image as 8-bit PNG (values rounded to nearest level)."""
    data = np.rint(img.data * 255.0).astype(np.uint8)
    Image.fromarray(data, mode="RGB").save(path, format="PNG")


def luma(img: RgbImage) -> np.ndarray:
    """BT.601 luma in [0, 1], shape (H, W)."""
    return (img.data @ _LUMA_NUM) / 1000.0


def to_gray_quantized(img: RgbImage, levels: int) -> GrayImage:
    """Quantize luma into `levels` bins: floor(luma * levels), top-clamped."""
    if levels < 2:
        raise ValueError(f"levels must be >= 2, got {levels}")
    bins = np.floor(luma(img) * levels).astype(np.int64)
    return GrayImage(np.clip(bins, 0, levels - 1), levels)


# --- corruption suite -------------------------------------------------------


@dataclass(frozen=True)
class Brightness:
    factor: float


@dataclass(frozen=True)
class Blur:
    kernel_size: int
    sigma: float


@dataclass(frozen=True)
class Grayscale:
    pass


@dataclass(frozen=True)
class Jitter:
    """Seeded random photometric jitter.

    Brightness/contrast/saturation factors are drawn uniformly from
    [1 - x, 1 + x]; the hue angle from [-hue * 2pi, hue * 2pi]. Applied in
    the fixed order brightness -> contrast -> saturation -> hue.
    """

    brightness: float = 0.2
    contrast: float = 0.3
    saturation: float = 0.3
    hue: float = 0.1
    seed: int = 0


CorruptionMode = Brightness | Blur | Grayscale | Jitter


def adjust_brightness(img: RgbImage, factor: float) -> RgbImage:
    if factor <= 0:
        raise ValueError(f"brightness factor must be positive, got {factor}")
    return RgbImage(np.clip(img.data * factor, 0.0, 1.0))


def adjust_contrast(img: RgbImage, factor: float) -> RgbImage:
    """Blend toward the image-wide mean luma."""
    if factor <= 0:
        raise ValueError(f"contrast factor must be positive, got {factor}")
    pivot = luma(img).mean()
    return RgbImage(np.clip(img.data * factor + pivot * (1.0 - factor), 0.0, 1.0))


def adjust_saturation(img: RgbImage, factor: float) -> RgbImage:
    """Blend toward the per-pixel luma (factor 0 = grayscale)."""
    if factor <= 0:
        raise ValueError(f"saturation factor must be positive, got {factor}")
    gray = luma(img)[..., None]
    return RgbImage(np.clip(img.data * factor + gray * (1.0 - factor), 0.0, 1.0))


def rotate_hue(img: RgbImage, angle: float) -> RgbImage:
    """Rotate hue by `angle` radians in HSV space."""
    hsv = rgb2hsv(img.data)
    hsv[..., 0] = np.mod(hsv[..., 0] + angle / (2.0 * np.pi), 1.0)
    return RgbImage(np.clip(hsv2rgb(hsv), 0.0, 1.0))


def gaussian_blur(img: RgbImage, kernel_size: int, sigma: float) -> RgbImage:
    """2D Gaussian blur with a normalized `kernel_size`^2 kernel, reflect padding."""
    if kernel_size % 2 == 0:
        raise ValueError(f"kernel size must be odd, got {kernel_size}")
    out = smooth2d(img.data, kernel_size, sigma)
    return RgbImage(np.clip(out, 0.0, 1.0))


def to_grayscale_image(img: RgbImage) -> RgbImage:
    """Replicate luma across the three channels."""
    return RgbImage(np.repeat(luma(img)[..., None], 3, axis=2))


def color_jitter(img: RgbImage, params: Jitter) -> RgbImage:
    for name, mag in (
        ("brightness", params.brightness),
        ("contrast", params.contrast),
        ("saturation", params.saturation),
        ("hue", params.hue),
    ):
        if mag < 0:
            raise ValueError(f"{name} magnitude must be >= 0, got {mag}")
    rng = np.random.default_rng(params.seed)
    out = adjust_brightness(img, rng.uniform(1.0 - params.brightness, 1.0 + params.brightness))
    out = adjust_contrast(out, rng.uniform(1.0 - params.contrast, 1.0 + params.contrast))
    out = adjust_saturation(out, rng.uniform(1.0 - params.saturation, 1.0 + params.saturation))
    angle = rng.uniform(-params.hue * 2.0 * np.pi, params.hue * 2.0 * np.pi)
    return rotate_hue(out, angle)


def corrupt(img: RgbImage, mode: CorruptionMode) -> RgbImage:
    """Apply one corruption; width and height are always preserved."""
    if isinstance(mode, Brightness):
        return adjust_brightness(img, mode.factor)
    if isinstance(mode, Blur):
        return gaussian_blur(img, mode.kernel_size, mode.sigma)
    if isinstance(mode, Grayscale):
        return to_grayscale_image(img)
    if isinstance(mode, Jitter):
        return color_jitter(img, mode)
    raise ValueError(f"unknown corruption mode {mode!r}")


# --- integer label maps (segmentation outputs, ground truth) ----------------


def write_label_png(labels: np.ndarray, path) -> None:
    """Write an integer label map as 8-bit (<=256 labels) or 16-bit PNG."""
    labels = np.asarray(labels)
    if labels.ndim != 2:
        raise ValueError(f"label map must be 2D, got shape {labels.shape}")
    if labels.min() < 0:
        raise ValueError("label ids must be non-negative")
    if labels.max() < 256:
        im = Image.fromarray(labels.astype(np.uint8), mode="L")
    elif labels.max() < 65536:
        im = Image.fromarray(labels.astype(np.uint16))
    else:
        raise ValueError(f"label ids up to {labels.max()} exceed 16-bit PNG range")
    im.save(path, format="PNG")


def read_label_png(path) -> np.ndarray:
    """Read an 8/16-bit grayscale PNG as an integer label map."""
    with Image.open(path) as im:
        if im.format != "PNG":
            raise ImageFormatError(f"expected PNG label map, got {im.format!r}")
        arr = np.asarray(im)
    if arr.ndim != 2:
        raise ImageFormatError(f"label map must be single-channel, got shape {arr.shape}")
    return arr.astype(np.int64)
