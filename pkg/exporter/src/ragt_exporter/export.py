"""Embedding export: image/text tensors, manifests, and bias injection."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import torch
from PIL import Image

from .model import DualEncoder, tokenize
from .tensorfile import read_tensor, write_tensor


@dataclass(frozen=True)
class ExportManifest:
    model: str
    image: str
    patch_size: int
    grid: tuple[int, int]
    dim: int
    files: dict[str, str]
    injection: dict | None = None

    def to_json(self) -> str:
        doc = {
            "model": self.model,
            "image": self.image,
            "patch_size": self.patch_size,
            "grid": list(self.grid),
            "dim": self.dim,
            "files": self.files,
        }
        if self.injection is not None:
            doc["injection"] = self.injection
        return json.dumps(doc, indent=2)


def preprocess(path, image_size: int) -> torch.Tensor:
    """Square bilinear resize, channels standardized to mean 0.5 / std 0.5."""
    with Image.open(path) as im:
        rgb = im.convert("RGB").resize((image_size, image_size), Image.BILINEAR)
    arr = np.asarray(rgb, dtype=np.float32) / 255.0
    return torch.from_numpy((arr - 0.5) / 0.5).permute(2, 0, 1)


def export_embeddings(
    model: DualEncoder,
    image_path,
    prompts: list[str],
    visual_path,
    text_path,
    manifest_path,
) -> ExportManifest:
    """Forward the frozen towers and write visual [N, D] / text [M, D] tensors."""
    if not prompts:
        raise ValueError("at least one prompt required")
    spec = model.spec
    pixels = preprocess(image_path, spec.image)
    with torch.no_grad():
        visual = model.vision(pixels)
        text = torch.stack([model.text(tokenize(p)) for p in prompts])
    write_tensor(visual_path, visual.shape, visual.numpy())
    write_tensor(text_path, text.shape, text.numpy())
    grid = spec.image // spec.patch
    manifest = ExportManifest(
        model=spec.describe(),
        image=str(image_path),
        patch_size=spec.patch,
        grid=(grid, grid),
        dim=spec.dim,
        files={"visual": str(visual_path), "text": str(text_path)},
    )
    with open(manifest_path, "w") as fh:
        fh.write(manifest.to_json())
    return manifest


def export_with_bias(
    model: DualEncoder,
    image_path,
    bias_path,
    visual_path,
    manifest_path,
    blocks: int = 1,
) -> ExportManifest:
    """Re-export patch embeddings with the bias added to pre-softmax logits.

    The bias tensor must be (N, N) over patch tokens; the class token's
    row/column receive zero bias. `blocks` selects how many final
    transformer blocks receive the bias (default: the last one).
    """
    spec = model.spec
    grid = spec.image // spec.patch
    n = grid * grid
    shape, values = read_tensor(bias_path)
    if shape != (n, n):
        raise ValueError(f"bias tensor shape {shape} does not match {n} patch tokens")
    if blocks < 1 or blocks > len(model.vision.blocks):
        raise ValueError(f"blocks must be in [1, {len(model.vision.blocks)}]")
    pixels = preprocess(image_path, spec.image)
    bias = torch.from_numpy(np.array(values, dtype=np.float32))
    with torch.no_grad():
        visual = model.vision(pixels, bias=bias, bias_blocks=blocks)
    write_tensor(visual_path, visual.shape, visual.numpy())
    manifest = ExportManifest(
        model=spec.describe(),
        image=str(image_path),
        patch_size=spec.patch,
        grid=(grid, grid),
        dim=spec.dim,
        files={"visual": str(visual_path), "bias": str(bias_path)},
        injection={"blocks": blocks, "point": "pre_softmax_logits"},
    )
    with open(manifest_path, "w") as fh:
        fh.write(manifest.to_json())
    return manifest
