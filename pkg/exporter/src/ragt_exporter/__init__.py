"""Bridge between a frozen vision-language model and RAGT tensor files."""

from .export import ExportManifest, export_embeddings, export_with_bias, preprocess
from .model import DualEncoder, ModelSpec, load_model, tokenize
from .tensorfile import TensorFormatError, read_tensor, write_tensor

__version__ = "0.1.0"

__all__ = [
    "DualEncoder",
    "ExportManifest",
    "ModelSpec",
    "TensorFormatError",
    "export_embeddings",
    "export_with_bias",
    "load_model",
    "preprocess",
    "read_tensor",
    "tokenize",
    "write_tensor",
]
