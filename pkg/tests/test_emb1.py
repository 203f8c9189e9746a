"""EMB1 container: layout arithmetic, round trips, and error mapping."""

import struct

import numpy as np
import pytest

from stylegap.emb1 import EmbeddingMatrix, decode_emb1, read_emb1, write_emb1
from stylegap.errors import (
    BadMagic,
    InvalidShape,
    NonFiniteValue,
    TruncatedPayload,
    VersionUnsupported,
    ZeroNormRow,
)


def make(rows, tag="test"):
    return EmbeddingMatrix(space_tag=tag, rows=np.asarray(rows, dtype=np.float32))


def test_identity_round_trip(tmp_path):
    path = tmp_path / "a.emb1"
    write_emb1(make([[1.0, 0.0]]), path)
    matrix = read_emb1(path)
    assert matrix.rows.tolist() == [[1.0, 0.0]]
    assert matrix.space_tag == "test"
    assert matrix.dim == 2 and matrix.n == 1


def test_decode_raw_bytes():
    header = struct.pack("<4sIIII", b"EMB1", 1, 2, 1, 0)
    payload = struct.pack("<2f", 1.0, 0.0)
    matrix = decode_emb1(header + payload)
    assert matrix.rows.tolist() == [[1.0, 0.0]]
    assert matrix.space_tag == ""


def test_header_arithmetic_empty_tag(tmp_path):
    path = tmp_path / "b.emb1"
    write_emb1(make([[2.5]], tag=""), path)
    assert path.stat().st_size == 20 + 4


def test_payload_size_15x128(tmp_path):
    path = tmp_path / "c.emb1"
    rows = np.arange(15 * 128, dtype=np.float32).reshape(15, 128) + 1.0
    write_emb1(make(rows), path)
    assert path.stat().st_size == 20 + len("test") + 7680


def test_round_trip_bit_exact_random(tmp_path):
    rng = np.random.default_rng(7)
    rows = rng.standard_normal((7, 128)).astype(np.float32)
    path = tmp_path / "d.emb1"
    write_emb1(make(rows, tag="vggish"), path)
    back = read_emb1(path)
    assert back.rows.tobytes() == rows.tobytes()
    assert back.space_tag == "vggish"


def test_unicode_space_tag(tmp_path):
    path = tmp_path / "e.emb1"
    write_emb1(make([[1.0]], tag="clap-2023"), path)
    assert read_emb1(path).space_tag == "clap-2023"


def test_truncated_payload(tmp_path):
    path = tmp_path / "f.emb1"
    write_emb1(make([[1.0, 2.0]]), path)
    data = path.read_bytes()
    path.write_bytes(data[:-4])
    with pytest.raises(TruncatedPayload):
        read_emb1(path)


def test_oversized_payload_rejected(tmp_path):
    path = tmp_path / "g.emb1"
    write_emb1(make([[1.0, 2.0]]), path)
    path.write_bytes(path.read_bytes() + b"\x00\x00\x00\x00")
    with pytest.raises(TruncatedPayload):
        read_emb1(path)


def test_bad_magic():
    with pytest.raises(BadMagic):
        decode_emb1(b"NOPE" + b"\x00" * 32)


def test_unsupported_version():
    header = struct.pack("<4sIIII", b"EMB1", 9, 1, 1, 0)
    with pytest.raises(VersionUnsupported):
        decode_emb1(header + b"\x00" * 4)


def test_zero_dims_rejected():
    header = struct.pack("<4sIIII", b"EMB1", 1, 0, 1, 0)
    with pytest.raises(InvalidShape):
        decode_emb1(header)


def test_nan_rejected_before_write(tmp_path):
    with pytest.raises(NonFiniteValue):
        make([[np.nan, 1.0]])


def test_zero_norm_row_rejected():
    with pytest.raises(ZeroNormRow):
        make([[0.0, 0.0]])


def test_stored_nan_rejected_on_read(tmp_path):
    path = tmp_path / "h.emb1"
    write_emb1(make([[1.0]]), path)
    data = bytearray(path.read_bytes())
    data[-4:] = struct.pack("<f", float("inf"))
    path.write_bytes(bytes(data))
    with pytest.raises(NonFiniteValue):
        read_emb1(path)


def test_matrix_is_immutable():
    matrix = make([[1.0, 2.0]])
    with pytest.raises(ValueError):
        matrix.rows[0, 0] = 5.0


def test_mean_vector_pools_rows():
    matrix = make([[1.0, 0.0], [3.0, 2.0]])
    assert matrix.mean_vector().tolist() == [2.0, 1.0]
