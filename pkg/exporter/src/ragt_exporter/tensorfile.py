"""RAGT tensor container codec.

The wire format shared with the segmentation toolkit: 4-byte magic "RAGT",
version byte 1, dtype byte 1 (float32 LE), ndim byte (1..4), uint32 LE dims,
then the row-major float32 payload. Little-endian regardless of host.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"RAGT"
VERSION = 1
DTYPE_F32 = 1
MAX_NDIM = 4


class TensorFormatError(ValueError):
    pass


def write_tensor(path, shape, values) -> None:
    shape = tuple(int(d) for d in shape)
    if not 1 <= len(shape) <= MAX_NDIM:
        raise ValueError(f"ndim must be in [1, {MAX_NDIM}], got {len(shape)}")
    flat = np.asarray(values, dtype="<f4").reshape(-1)
    if flat.size != int(np.prod(shape)):
        raise ValueError(f"{flat.size} values do not fill shape {shape}")
    with open(path, "wb") as fh:
        fh.write(MAGIC + struct.pack("<BBB", VERSION, DTYPE_F32, len(shape)))
        fh.write(struct.pack(f"<{len(shape)}I", *shape))
        fh.write(flat.tobytes())


def read_tensor(path) -> tuple[tuple[int, ...], np.ndarray]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 7 or raw[:4] != MAGIC:
        raise TensorFormatError(f"not a RAGT tensor: {path}")
    version, dtype, ndim = struct.unpack("<BBB", raw[4:7])
    if version != VERSION or dtype != DTYPE_F32 or not 1 <= ndim <= MAX_NDIM:
        raise TensorFormatError(f"unsupported header {(version, dtype, ndim)}")
    end = 7 + 4 * ndim
    if len(raw) < end:
        raise TensorFormatError("truncated dims")
    shape = struct.unpack(f"<{ndim}I", raw[7:end])
    count = int(np.prod(shape))
    payload = raw[end : end + 4 * count]
    if len(payload) != 4 * count:
        raise TensorFormatError("truncated payload")
    return shape, np.frombuffer(payload, dtype="<f4", count=count).reshape(shape)
