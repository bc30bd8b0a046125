"""Portable binary container for frame-level matrices.

Layout: 4-byte magic, u32 version, u32 T, u32 C, f64 hop_seconds, C
length-prefixed UTF-8 column labels, then T*C little-endian f32 values in
row-major order. Posteriograms use magic "PGRM", feature matrices "FEAT".
All integers are little-endian.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import InputFormatError

MAGIC_POSTERIOGRAM = b"PGRM"
MAGIC_FEATURES = b"FEAT"
VERSION = 1

_HEADER = struct.Struct("<4sIIId")


def write_matrix(
    path: str | Path,
    magic: bytes,
    values: np.ndarray,
    hop_seconds: float,
    labels: list[str] | None = None,
) -> None:
    values = np.asarray(values, dtype=np.float32)
    if values.ndim != 2:
        raise ValueError("values must be a 2-D matrix")
    n_frames, n_cols = values.shape
    labels = labels if labels is not None else [""] * n_cols
    if len(labels) != n_cols:
        raise ValueError(f"{len(labels)} labels for {n_cols} columns")
    with open(path, "wb") as f:
        f.write(_HEADER.pack(magic, VERSION, n_frames, n_cols, hop_seconds))
        for label in labels:
            raw = label.encode("utf-8")
            f.write(struct.pack("<I", len(raw)))
            f.write(raw)
        f.write(values.astype("<f4").tobytes(order="C"))


def read_matrix(
    path: str | Path,
    expect_magic: bytes | None = None,
) -> tuple[np.ndarray, float, list[str]]:
    """Returns (values as float64 (T, C), hop_seconds, labels)."""
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise InputFormatError(f"{path}: truncated header")
    magic, version, n_frames, n_cols, hop = _HEADER.unpack_from(blob, 0)
    if expect_magic is not None and magic != expect_magic:
        raise InputFormatError(
            f"{path}: bad magic {magic!r}, expected {expect_magic!r}")
    if magic not in (MAGIC_POSTERIOGRAM, MAGIC_FEATURES):
        raise InputFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise InputFormatError(f"{path}: unsupported version {version}")
    offset = _HEADER.size
    labels = []
    for _ in range(n_cols):
        if offset + 4 > len(blob):
            raise InputFormatError(f"{path}: truncated label block")
        (length,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        if offset + length > len(blob):
            raise InputFormatError(f"{path}: truncated label block")
        labels.append(blob[offset:offset + length].decode("utf-8"))
        offset += length
    expected = n_frames * n_cols * 4
    if len(blob) - offset != expected:
        raise InputFormatError(
            f"{path}: payload is {len(blob) - offset} bytes, expected {expected}")
    values = np.frombuffer(blob, dtype="<f4", count=n_frames * n_cols,
                           offset=offset)
    return (
        values.astype(np.float64).reshape(n_frames, n_cols),
        hop,
        labels,
    )
