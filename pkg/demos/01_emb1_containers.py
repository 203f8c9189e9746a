"""EMB1 containers: writing, reading, and the byte layout."""

import tempfile
from pathlib import Path

import numpy as np

from stylegap import EmbeddingMatrix, read_emb1, write_emb1

workdir = Path(tempfile.mkdtemp(prefix="emb1_demo_"))

# A 3-clip, 8-dim embedding matrix in a made-up space.
rows = np.random.default_rng(0).standard_normal((3, 8)).astype(np.float32)
matrix = EmbeddingMatrix(space_tag="demo-space", rows=rows)

path = workdir / "clips.emb1"
write_emb1(matrix, path)
raw = path.read_bytes()

print(f"wrote {path} ({len(raw)} bytes)")
print(f"magic={raw[:4]!r}  header=20 bytes + {len(matrix.space_tag)}-byte tag")
print(f"payload = {matrix.n} x {matrix.dim} x 4 = {matrix.n * matrix.dim * 4} bytes")

back = read_emb1(path)
print("round trip bit-exact:", back.rows.tobytes() == rows.tobytes())

# Multi-row files are frame-level embeddings; the pooled clip vector is
# the arithmetic mean of the rows.
print("pooled clip vector:", np.round(back.mean_vector(), 3))
