"""EMB1: a minimal portable binary container for embedding matrices.

Layout (all integers little-endian):

    bytes 0-3    magic ``EMB1``
    bytes 4-7    u32 version (currently 1)
    bytes 8-11   u32 dim   (vector dimensionality, >= 1)
    bytes 12-15  u32 count (number of rows, >= 1)
    bytes 16-19  u32 L     (byte length of the space tag)
    next L bytes UTF-8 space tag
    then         count * dim float32, little-endian, row-major

Header is 20 bytes + L. Round trips are bit-exact: the float32 payload
is written and read without any conversion.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    InvalidShape,
    IoFailure,
    NonFiniteValue,
    TruncatedPayload,
    VersionUnsupported,
    ZeroNormRow,
)

MAGIC = b"EMB1"
VERSION = 1
_HEADER = struct.Struct("<4sIIII")


@dataclass(frozen=True)
class EmbeddingMatrix:
    """N x dim float32 matrix of embedding vectors in one embedding space.

    Rows must be finite and have strictly positive Euclidean norm
    (cosine distances are undefined otherwise). Instances are immutable
    and safe to share across threads.
    """

    space_tag: str
    rows: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        rows = np.ascontiguousarray(self.rows, dtype=np.float32)
        object.__setattr__(self, "rows", rows)
        validate_rows(rows)
        rows.setflags(write=False)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def mean_vector(self) -> np.ndarray:
        """Arithmetic mean of the rows, in float64.

        This is the pooling rule turning a multi-row (frame-level) file
        into a single clip vector.
        """
        return self.rows.astype(np.float64).mean(axis=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingMatrix):
            return NotImplemented
        return self.space_tag == other.space_tag and np.array_equal(
            self.rows, other.rows
        )

    def __hash__(self) -> int:
        return hash((self.space_tag, self.rows.tobytes()))


def validate_rows(rows: np.ndarray) -> None:
    """Check the EmbeddingMatrix invariants on a raw float32 array."""
    if rows.ndim != 2:
        raise InvalidShape(f"expected a 2-D matrix, got ndim={rows.ndim}")
    n, dim = rows.shape
    if n < 1 or dim < 1:
        raise InvalidShape(f"matrix must be at least 1x1, got {n}x{dim}")
    if not np.isfinite(rows).all():
        bad = np.argwhere(~np.isfinite(rows))[0]
        raise NonFiniteValue(f"non-finite entry at row {bad[0]}, column {bad[1]}")
    norms = np.linalg.norm(rows.astype(np.float64), axis=1)
    if not (norms > 0.0).all():
        row = int(np.argmin(norms))
        raise ZeroNormRow(f"row {row} has zero Euclidean norm")


def write_emb1(matrix: EmbeddingMatrix, path: str | Path) -> None:
    """Write *matrix* to *path* in the EMB1 byte layout."""
    tag = matrix.space_tag.encode("utf-8")
    header = _HEADER.pack(MAGIC, VERSION, matrix.dim, matrix.n, len(tag))
    payload = np.ascontiguousarray(matrix.rows, dtype="<f4").tobytes()
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(tag)
            fh.write(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_emb1(path: str | Path) -> EmbeddingMatrix:
    """Read an EMB1 file and return the matrix exactly as stored."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return decode_emb1(data, name=str(path))


def decode_emb1(data: bytes, name: str = "<bytes>") -> EmbeddingMatrix:
    """Decode EMB1 bytes. Raises a specific error for each malformation."""
    if data[:4] != MAGIC:
        raise BadMagic(f"{name}: missing EMB1 magic")
    if len(data) < _HEADER.size:
        raise TruncatedPayload(f"{name}: header truncated at {len(data)} bytes")
    _, version, dim, count, tag_len = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise VersionUnsupported(f"{name}: version {version} not supported")
    if dim < 1 or count < 1:
        raise InvalidShape(f"{name}: header declares {count}x{dim} matrix")
    offset = _HEADER.size
    if len(data) < offset + tag_len:
        raise TruncatedPayload(f"{name}: space tag truncated")
    try:
        tag = data[offset : offset + tag_len].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise BadMagic(f"{name}: space tag is not valid UTF-8") from exc
    offset += tag_len
    expected = count * dim * 4
    actual = len(data) - offset
    if actual != expected:
        raise TruncatedPayload(
            f"{name}: payload is {actual} bytes, header declares {expected}"
        )
    rows = np.frombuffer(data, dtype="<f4", count=count * dim, offset=offset)
    rows = rows.reshape(count, dim).copy()
    return EmbeddingMatrix(space_tag=tag, rows=rows)
