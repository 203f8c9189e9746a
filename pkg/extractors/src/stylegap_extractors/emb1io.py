"""EMB1 emission per the published byte contract.

Deliberately independent of the evaluation toolkit's own reader: this
package talks to it through files only. Layout (little-endian): magic
``EMB1``, u32 version=1, u32 dim, u32 count, u32 tag length L, L bytes
UTF-8 space tag, then count * dim float32 row-major.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import IoFailure

_HEADER = struct.Struct("<4sIIII")


def write_emb1(rows: np.ndarray, space_tag: str, path: str | Path) -> None:
    rows = np.ascontiguousarray(rows, dtype="<f4")
    if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
        raise ValueError(f"need a non-empty 2-D matrix, got shape {rows.shape}")
    if not np.isfinite(rows).all():
        raise ValueError("embedding rows must be finite")
    tag = space_tag.encode("utf-8")
    header = _HEADER.pack(b"EMB1", 1, rows.shape[1], rows.shape[0], len(tag))
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(tag)
            fh.write(rows.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
