"""Minimal binary tensor container shared with external tooling.

Layout (all little-endian, independent of host byte order):

    bytes 0-3   magic  b"RAGT"
    byte  4     format version, currently 1
    byte  5     dtype code, 1 = IEEE-754 float32
    byte  6     ndim, 1..4
    next 4*ndim dims as uint32
    rest        row-major float32 payload, exactly prod(dims) values
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"RAGT"
VERSION = 1
DTYPE_F32 = 1
MAX_NDIM = 4


class TensorFormatError(ValueError):
    """Raised when a file does not conform to the tensor layout."""


def write_tensor(path, shape, values) -> None:
    """Write `values` (row-major, length prod(shape)) as a tensor file."""
    shape = tuple(int(d) for d in shape)
    if not 1 <= len(shape) <= MAX_NDIM:
        raise ValueError(f"ndim must be in [1, {MAX_NDIM}], got {len(shape)}")
    if any(d < 1 for d in shape):
        raise ValueError(f"dims must be positive, got {shape}")
    flat = np.asarray(values, dtype="<f4").reshape(-1)
    count = int(np.prod(shape))
    if flat.size != count:
        raise ValueError(f"got {flat.size} values for shape {shape} ({count} expected)")
    header = MAGIC + struct.pack("<BBB", VERSION, DTYPE_F32, len(shape))
    header += struct.pack(f"<{len(shape)}I", *shape)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(flat.tobytes())


def read_tensor(path) -> tuple[tuple[int, ...], np.ndarray]:
    """Read a tensor file, returning (shape, float32 array of that shape)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 7:
        raise TensorFormatError("file shorter than fixed header")
    if raw[:4] != MAGIC:
        raise TensorFormatError(f"bad magic {raw[:4]!r}")
    version, dtype, ndim = struct.unpack("<BBB", raw[4:7])
    if version != VERSION:
        raise TensorFormatError(f"unsupported version {version}")
    if dtype != DTYPE_F32:
        raise TensorFormatError(f"unknown dtype code {dtype}")
    if not 1 <= ndim <= MAX_NDIM:
        raise TensorFormatError(f"ndim {ndim} outside [1, {MAX_NDIM}]")
    dims_end = 7 + 4 * ndim
    if len(raw) < dims_end:
        raise TensorFormatError("truncated dims")
    shape = struct.unpack(f"<{ndim}I", raw[7:dims_end])
    count = int(np.prod(shape))
    payload = raw[dims_end : dims_end + 4 * count]
    if len(payload) != 4 * count:
        raise TensorFormatError(
            f"truncated payload: expected {4 * count} bytes, found {len(payload)}"
        )
    values = np.frombuffer(payload, dtype="<f4", count=count).reshape(shape)
    return shape, values
