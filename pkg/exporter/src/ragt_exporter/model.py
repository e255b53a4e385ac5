"""Compact frozen CLIP-style dual encoder.

A self-contained torch model whose vision tower exposes the hook this tool
exists for: an additive bias on the pre-softmax attention logits of the last
k transformer blocks, over patch tokens only (the class token row/column
stay unbiased).

Models are built deterministically from a spec string such as

    toy:patch=16,image=336,width=64,layers=4,heads=4,dim=32,seed=0

so that exports are reproducible without shipping weights. A `state=` key
pointing at a torch state-dict file loads pretrained weights into the same
architecture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import torch
from torch import nn

CONTEXT_LENGTH = 64
PAD_ID = 256  # byte-level tokenizer: ids 0..255 are raw bytes
VOCAB = 257


@dataclass(frozen=True)
class ModelSpec:
    patch: int = 16
    image: int = 336
    width: int = 64
    layers: int = 4
    heads: int = 4
    dim: int = 32
    seed: int = 0
    state: str | None = None

    @classmethod
    def parse(cls, text: str) -> "ModelSpec":
        name, _, rest = text.partition(":")
        if name != "toy":
            raise ValueError(f"unknown model family {name!r} (expected 'toy')")
        kwargs: dict = {}
        if rest:
            for item in rest.split(","):
                key, _, value = item.partition("=")
                if key == "state":
                    kwargs[key] = value
                elif key in ("patch", "image", "width", "layers", "heads", "dim", "seed"):
                    kwargs[key] = int(value)
                else:
                    raise ValueError(f"unknown model option {key!r}")
        spec = cls(**kwargs)
        if spec.image % spec.patch != 0:
            raise ValueError(f"image size {spec.image} not divisible by patch {spec.patch}")
        if spec.width % spec.heads != 0:
            raise ValueError(f"width {spec.width} not divisible by heads {spec.heads}")
        return spec

    def describe(self) -> str:
        return (
            f"toy:patch={self.patch},image={self.image},width={self.width},"
            f"layers={self.layers},heads={self.heads},dim={self.dim},seed={self.seed}"
        )


class BiasableAttention(nn.Module):
    def __init__(self, width: int, heads: int):
        super().__init__()
        self.heads = heads
        self.head_dim = width // heads
        self.qkv = nn.Linear(width, width * 3)
        self.proj = nn.Linear(width, width)

    def forward(self, x: torch.Tensor, bias: torch.Tensor | None = None) -> torch.Tensor:
        n, _ = x.shape
        qkv = self.qkv(x).reshape(n, 3, self.heads, self.head_dim).permute(1, 2, 0, 3)
        q, k, v = qkv[0], qkv[1], qkv[2]
        logits = q @ k.transpose(-2, -1) / math.sqrt(self.head_dim)
        if bias is not None:
            logits = logits + bias.unsqueeze(0)  # shared across heads
        weights = logits.softmax(dim=-1)
        out = (weights @ v).transpose(0, 1).reshape(n, -1)
        return self.proj(out)


class Block(nn.Module):
    def __init__(self, width: int, heads: int):
        super().__init__()
        self.norm1 = nn.LayerNorm(width)
        self.attn = BiasableAttention(width, heads)
        self.norm2 = nn.LayerNorm(width)
        self.mlp = nn.Sequential(
            nn.Linear(width, width * 4), nn.GELU(), nn.Linear(width * 4, width)
        )

    def forward(self, x: torch.Tensor, bias: torch.Tensor | None = None) -> torch.Tensor:
        x = x + self.attn(self.norm1(x), bias)
        return x + self.mlp(self.norm2(x))


class VisionTower(nn.Module):
    def __init__(self, spec: ModelSpec):
        super().__init__()
        self.grid = spec.image // spec.patch
        self.patchify = nn.Conv2d(3, spec.width, kernel_size=spec.patch, stride=spec.patch)
        self.cls_token = nn.Parameter(torch.zeros(1, spec.width))
        self.pos_embed = nn.Parameter(torch.zeros(self.grid * self.grid + 1, spec.width))
        self.blocks = nn.ModuleList(Block(spec.width, spec.heads) for _ in range(spec.layers))
        self.norm = nn.LayerNorm(spec.width)
        self.project = nn.Linear(spec.width, spec.dim, bias=False)

    def forward(
        self,
        pixels: torch.Tensor,
        bias: torch.Tensor | None = None,
        bias_blocks: int = 1,
    ) -> torch.Tensor:
        """Patch embeddings [grid*grid, dim].

        `bias` is an additive pre-softmax logit bias over the patch tokens,
        shape (N, N) with N = grid*grid; it is injected into the last
        `bias_blocks` transformer blocks with zero bias on the class token.
        """
        tokens = self.patchify(pixels.unsqueeze(0)).flatten(2).squeeze(0).T
        x = torch.cat([self.cls_token, tokens], dim=0) + self.pos_embed
        padded = None
        if bias is not None:
            n = x.shape[0] - 1
            if bias.shape != (n, n):
                raise ValueError(
                    f"bias shape {tuple(bias.shape)} does not match {n} patch tokens"
                )
            padded = torch.zeros(n + 1, n + 1, dtype=x.dtype)
            padded[1:, 1:] = bias
        start = len(self.blocks) - max(0, bias_blocks)
        for i, block in enumerate(self.blocks):
            x = block(x, padded if padded is not None and i >= start else None)
        return self.project(self.norm(x[1:]))


class TextTower(nn.Module):
    def __init__(self, spec: ModelSpec):
        super().__init__()
        self.embed = nn.Embedding(VOCAB, spec.width)
        self.pos_embed = nn.Parameter(torch.zeros(CONTEXT_LENGTH, spec.width))
        self.blocks = nn.ModuleList(Block(spec.width, spec.heads) for _ in range(spec.layers))
        self.norm = nn.LayerNorm(spec.width)
        self.project = nn.Linear(spec.width, spec.dim, bias=False)

    def forward(self, ids: torch.Tensor) -> torch.Tensor:
        x = self.embed(ids) + self.pos_embed[: ids.shape[0]]
        for block in self.blocks:
            x = block(x)
        pooled = self.norm(x)[ids != PAD_ID].mean(dim=0)
        return self.project(pooled)


class DualEncoder(nn.Module):
    def __init__(self, spec: ModelSpec):
        super().__init__()
        self.spec = spec
        self.vision = VisionTower(spec)
        self.text = TextTower(spec)


def tokenize(prompt: str) -> torch.Tensor:
    ids = list(prompt.encode("utf-8"))[:CONTEXT_LENGTH]
    if not ids:
        raise ValueError("empty prompt")
    ids += [PAD_ID] * (CONTEXT_LENGTH - len(ids))
    return torch.tensor(ids, dtype=torch.long)


def load_model(spec_text: str) -> DualEncoder:
    """Build the frozen encoder described by `spec_text`, in eval mode."""
    spec = ModelSpec.parse(spec_text)
    torch.manual_seed(spec.seed)
    model = DualEncoder(spec)
    # Non-zero initialization for parameters created as zeros, so attention
    # actually mixes tokens and bias injection has visible effect.
    with torch.no_grad():
        model.vision.pos_embed.normal_(std=0.02)
        model.vision.cls_token.normal_(std=0.02)
        model.text.pos_embed.normal_(std=0.02)
    if spec.state:
        state = torch.load(spec.state, map_location="cpu", weights_only=True)
        model.load_state_dict(state)
    model.eval()
    for param in model.parameters():
        param.requires_grad_(False)
    return model
