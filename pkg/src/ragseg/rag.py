"""Region adjacency graph with combined color + texture edge weights.

Edge weight between adjacent regions = Euclidean mean-color distance plus
the L1 difference of selected GLCM features. Each GLCM feature is min-max
scaled across the image's regions before differencing so the texture term
is commensurable with the color term (raw contrast alone spans O(levels^2)
and would drown color). Stored edge weights are divided by the image-wise
maximum raw weight, keeping them in [0, 1] for the downstream exp() bias.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .imaging import GrayImage, RgbImage
from .superpixel import SuperpixelMap
from .texture import FEATURE_NAMES, TextureFeatures, glcm, texture_features


@dataclass(frozen=True)
class RegionProfile:
    region_id: int
    pixel_count: int
    mean_color: np.ndarray
    glcm_features: TextureFeatures

    def __post_init__(self):
        color = np.asarray(self.mean_color, dtype=np.float64)
        if color.shape != (3,):
            raise ValueError(f"mean_color must have 3 channels, got {color.shape}")
        if self.pixel_count < 1:
            raise ValueError("pixel_count must be >= 1")
        object.__setattr__(self, "mean_color", color)


@dataclass(frozen=True)
class RagGraph:
    """Undirected graph over regions; nodes indexed by region id.

    `edges` maps unordered pairs (i, j), i < j, to weights normalized by
    `norm_max`. `scaled_features[r]` holds region r's min-max scaled GLCM
    features for the selected subset, the representation distances are
    computed from.
    """

    profiles: list[RegionProfile]
    edges: dict[tuple[int, int], float]
    norm_max: float
    feature_subset: tuple[str, ...]
    scaled_features: np.ndarray = field(repr=False)

    def region_count(self) -> int:
        return len(self.profiles)

    def normalized_distances(self) -> np.ndarray:
        """All-pairs region distance matrix divided by norm_max."""
        colors = np.stack([p.mean_color for p in self.profiles])
        diff = colors[:, None, :] - colors[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2))
        if self.scaled_features.shape[1]:
            f = self.scaled_features
            dist = dist + np.abs(f[:, None, :] - f[None, :, :]).sum(axis=2)
        return dist / self.norm_max


def region_distance(
    a: RegionProfile,
    b: RegionProfile,
    feature_subset: tuple[str, ...] = FEATURE_NAMES,
) -> float:
    """Color distance plus L1 texture difference over `feature_subset`.

    Texture features are assumed already scaled to commensurable ranges
    (build_rag min-max scales them per image before calling this).
    """
    color = float(np.linalg.norm(a.mean_color - b.mean_color))
    texture = float(
        np.abs(a.glcm_features.as_array(feature_subset) - b.glcm_features.as_array(feature_subset)).sum()
    )
    return color + texture


def build_rag(
    spmap: SuperpixelMap,
    img: RgbImage,
    gray: GrayImage,
    feature_subset: tuple[str, ...] = FEATURE_NAMES,
) -> RagGraph:
    """Profile every region and weight the edges between 4-adjacent regions."""
    if (spmap.height, spmap.width) != (img.height, img.width) or img.data.shape[:2] != gray.data.shape:
        raise ValueError("superpixel map, image, and gray image must share dimensions")
    unknown = set(feature_subset) - set(FEATURE_NAMES)
    if unknown:
        raise ValueError(f"unknown GLCM features {sorted(unknown)}")

    labels = spmap.labels
    k = spmap.region_count

    counts = np.bincount(labels.ravel(), minlength=k).astype(np.int64)
    sums = np.zeros((k, 3), dtype=np.float64)
    for c in range(3):
        sums[:, c] = np.bincount(labels.ravel(), weights=img.data[..., c].ravel(), minlength=k)
    mean_colors = sums / counts[:, None]

    features = [texture_features(glcm(gray, labels == r)) for r in range(k)]
    profiles = [
        RegionProfile(r, int(counts[r]), mean_colors[r], features[r]) for r in range(k)
    ]

    scaled = _minmax_scale_features(features, feature_subset)
    scaled_profiles = [
        RegionProfile(
            r,
            int(counts[r]),
            mean_colors[r],
            TextureFeatures(*_expand_subset(scaled[r], feature_subset)),
        )
        for r in range(k)
    ]

    raw_edges = {
        (i, j): region_distance(scaled_profiles[i], scaled_profiles[j], feature_subset)
        for i, j in _adjacent_regions(labels)
    }
    norm_max = max(raw_edges.values(), default=0.0)
    if norm_max <= 0.0:
        norm_max = 1.0
    edges = {pair: w / norm_max for pair, w in raw_edges.items()}

    return RagGraph(profiles, edges, norm_max, tuple(feature_subset), scaled)


def _minmax_scale_features(
    features: list[TextureFeatures], subset: tuple[str, ...]
) -> np.ndarray:
    """Per-feature min-max scaling across regions; constant features map to 0."""
    if not subset:
        return np.zeros((len(features), 0))
    raw = np.stack([f.as_array(subset) for f in features])
    lo = raw.min(axis=0)
    span = raw.max(axis=0) - lo
    scaled = np.zeros_like(raw)
    informative = span > 0
    scaled[:, informative] = (raw[:, informative] - lo[informative]) / span[informative]
    return scaled


def _expand_subset(values: np.ndarray, subset: tuple[str, ...]) -> list[float]:
    """Place subset values into the full feature order, zeros elsewhere."""
    full = dict.fromkeys(FEATURE_NAMES, 0.0)
    for name, v in zip(subset, values):
        full[name] = float(v)
    return [full[name] for name in FEATURE_NAMES]


def _adjacent_regions(labels: np.ndarray) -> list[tuple[int, int]]:
    """Unordered region pairs sharing a 4-adjacent pixel boundary."""
    right = np.stack([labels[:, :-1].ravel(), labels[:, 1:].ravel()], axis=1)
    down = np.stack([labels[:-1, :].ravel(), labels[1:, :].ravel()], axis=1)
    pairs = np.concatenate([right, down])
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.sort(pairs, axis=1)
    return [(int(i), int(j)) for i, j in np.unique(pairs, axis=0)]


# --- serialization -----------------------------------------------------------


def rag_to_json(graph: RagGraph) -> str:
    """Canonical JSON: node order by id, edge order by (i, j), fixed key order."""
    doc = {
        "region_count": graph.region_count(),
        "nodes": [
            {
                "id": p.region_id,
                "pixels": p.pixel_count,
                "mean_color": [float(c) for c in p.mean_color],
                "glcm": {
                    "contrast": p.glcm_features.contrast,
                    "homogeneity": p.glcm_features.homogeneity,
                    "energy": p.glcm_features.energy,
                    "correlation": p.glcm_features.correlation,
                },
            }
            for p in graph.profiles
        ],
        "edges": [
            {"i": i, "j": j, "w": graph.edges[(i, j)]}
            for i, j in sorted(graph.edges)
        ],
        "norm_max": graph.norm_max,
    }
    return json.dumps(doc, indent=2)
