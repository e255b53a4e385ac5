"""Structure-aware feature rectification for open-vocabulary segmentation.

Builds superpixel region adjacency graphs from color and texture, projects
them onto the transformer patch grid, derives a bilateral attention bias,
and fuses raw with smoothed visual-text similarities for label prediction.
"""

from .bias import (
    AttentionInputs,
    BiasMatrix,
    NodeBias,
    biased_attention,
    bilateral_bias,
    rag_bias,
    spatial_gaussian,
)
from .imaging import (
    Blur,
    Brightness,
    GrayImage,
    Grayscale,
    ImageFormatError,
    Jitter,
    RgbImage,
    corrupt,
    load_image,
    save_image,
    to_gray_quantized,
)
from .patch_bridge import PatchEdgeStats, PatchGrid, assign_patches, patch_pair_stats
from .pipeline import (
    PipelineConfig,
    SegmentationResult,
    compute_bias_for_image,
    compute_node_bias,
    evaluate_miou,
    segment,
)
from .rag import RagGraph, RegionProfile, build_rag, rag_to_json, region_distance
from .simfusion import (
    EmbeddingSet,
    SimilarityMatrix,
    cosine_similarity,
    fuse,
    predict,
    smooth_visual,
)
from .superpixel import SuperpixelMap, load_map, save_map, slic
from .tensorio import TensorFormatError, read_tensor, write_tensor
from .texture import (
    COLOR_ONLY,
    F2F4,
    FEATURE_NAMES,
    GlcmMatrix,
    TextureFeatures,
    glcm,
    texture_features,
)

__version__ = "0.1.0"

__all__ = [
    "AttentionInputs",
    "BiasMatrix",
    "Blur",
    "Brightness",
    "COLOR_ONLY",
    "EmbeddingSet",
    "F2F4",
    "FEATURE_NAMES",
    "GlcmMatrix",
    "GrayImage",
    "Grayscale",
    "ImageFormatError",
    "Jitter",
    "NodeBias",
    "PatchEdgeStats",
    "PatchGrid",
    "PipelineConfig",
    "RagGraph",
    "RegionProfile",
    "RgbImage",
    "SegmentationResult",
    "SimilarityMatrix",
    "SuperpixelMap",
    "TensorFormatError",
    "TextureFeatures",
    "assign_patches",
    "biased_attention",
    "bilateral_bias",
    "build_rag",
    "compute_bias_for_image",
    "compute_node_bias",
    "corrupt",
    "cosine_similarity",
    "evaluate_miou",
    "fuse",
    "glcm",
    "load_image",
    "load_map",
    "patch_pair_stats",
    "predict",
    "rag_bias",
    "rag_to_json",
    "read_tensor",
    "region_distance",
    "save_image",
    "save_map",
    "segment",
    "slic",
    "smooth_visual",
    "spatial_gaussian",
    "texture_features",
    "to_gray_quantized",
    "write_tensor",
]
