"""Embedding storage: headerless float32 matrices with unit-normalized rows.

The embedding file format is raw little-endian IEEE-754 float32, row-major,
with no header; the dimension must be supplied out of band (``--dim`` on the
CLI).  Rows are L2-normalized at load so cosine similarity reduces to a dot
product downstream.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DataError, FormatError

Side = str  # "src" | "tgt"
Origin = str  # "noisy" | "clean"

_SIDES = ("src", "tgt")
_ORIGINS = ("noisy", "clean")
NORM_TOLERANCE = 1e-3


@dataclass(frozen=True)
class EmbeddingSet:
    """A dense n x dim float32 matrix of unit rows, tagged with side and origin."""

    vectors: np.ndarray
    side: Side
    origin: Origin

    def __post_init__(self):
        if self.side not in _SIDES:
            raise DataError(f"side must be one of {_SIDES}, got {self.side!r}")
        if self.origin not in _ORIGINS:
            raise DataError(f"origin must be one of {_ORIGINS}, got {self.origin!r}")
        v = self.vectors
        if v.ndim != 2 or v.dtype != np.float32:
            raise DataError("vectors must be a 2-d float32 array")
        norms = np.linalg.norm(v.astype(np.float64), axis=1)
        if v.shape[0] and np.abs(norms - 1.0).max() > NORM_TOLERANCE:
            row = int(np.abs(norms - 1.0).argmax())
            raise DataError(f"row {row} is not unit-normalized (norm {norms[row]:.6f})")

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """Return a float32 copy of ``matrix`` with L2-normalized rows.

    Norms are computed in float64 before the division; zero rows are a data
    error because they carry no direction.
    """
    m = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(m, axis=1)
    zero = norms == 0.0
    if zero.any():
        raise DataError(f"zero-norm embedding at row {int(np.flatnonzero(zero)[0])}")
    return (m / norms[:, None]).astype(np.float32)


def load_embeddings(path, dim: int, side: Side, origin: Origin) -> EmbeddingSet:
    """Load and normalize a raw float32 embedding file.

    The file size must be a positive multiple of ``4 * dim`` bytes; the row
    count is inferred from it.
    """
    if dim < 1:
        raise FormatError("dim must be positive")
    size = os.stat(path).st_size
    if size == 0:
        raise FormatError(f"{path}: empty embedding file")
    if size % (4 * dim) != 0:
        raise FormatError(f"{path}: {size} bytes is not a multiple of 4*dim={4 * dim}")
    raw = np.fromfile(path, dtype="<f4")
    try:
        vectors = normalize_rows(raw.reshape(-1, dim))
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc
    vectors.flags.writeable = False
    return EmbeddingSet(vectors=vectors, side=side, origin=origin)


def write_embeddings(matrix: np.ndarray, path) -> None:
    """Write a 2-d array as a raw little-endian float32 file."""
    np.asarray(matrix, dtype="<f4").tofile(path)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of two unit vectors, accumulated in float64, clamped to [-1, 1]."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DataError(f"dimension mismatch: {a.shape} vs {b.shape}")
    value = float(np.dot(a.astype(np.float64), b.astype(np.float64)))
    return min(1.0, max(-1.0, value))


def pair_cosines(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise cosines of two aligned unit-row matrices (float64, clamped)."""
    if a.shape != b.shape:
        raise DataError(f"shape mismatch: {a.shape} vs {b.shape}")
    values = np.einsum(
        "ij,ij->i", a.astype(np.float64), b.astype(np.float64), optimize=True
    )
    return np.clip(values, -1.0, 1.0)
