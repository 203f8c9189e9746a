"""Checkpoint loading, embedding families, and the tone generator."""

import numpy as np
import pytest

from stylegap_extractors.audio import load_wav_mono
from stylegap_extractors.errors import GenerationFailure, ModelLoadFailure
from stylegap_extractors.models import load_embedder, load_generator, write_toy_checkpoint


def test_missing_checkpoint_has_remediation(tmp_path):
    with pytest.raises(ModelLoadFailure, match="write_toy_checkpoint"):
        load_embedder(tmp_path / "nope")


def test_wrong_family_for_embedder(checkpoints):
    with pytest.raises(ModelLoadFailure, match="not an embedding model"):
        load_embedder(checkpoints["tonegen"])


def test_wrong_family_for_generator(checkpoints):
    with pytest.raises(ModelLoadFailure, match="not a generator"):
        load_generator(checkpoints["vggish"])


def test_melproj_yields_one_row_per_frame(checkpoints, test_tone):
    embedder = load_embedder(checkpoints["vggish"])
    samples = load_wav_mono(test_tone, embedder.rate)
    rows = embedder.embed(samples)
    # 15 s at 0.96 s per analysis window
    assert rows.shape == (15, 64)
    assert np.isfinite(rows).all()


def test_specpool_yields_single_row(checkpoints, test_tone):
    embedder = load_embedder(checkpoints["clap"])
    samples = load_wav_mono(test_tone, embedder.rate)
    rows = embedder.embed(samples)
    assert rows.shape == (1, 96)
    assert np.linalg.norm(rows) > 0.0


def test_embedding_is_input_deterministic(checkpoints, test_tone):
    embedder = load_embedder(checkpoints["vggish"])
    samples = load_wav_mono(test_tone, embedder.rate)
    a = embedder.embed(samples)
    b = embedder.embed(samples.copy())
    assert a.tobytes() == b.tobytes()


def test_generator_seed_and_prompt_determinism(checkpoints):
    generator = load_generator(checkpoints["tonegen"])
    a = generator.render("warm pad, low pulse", 4)
    b = generator.render("warm pad, low pulse", 4)
    c = generator.render("warm pad, low pulse", 5)
    d = generator.render("bright keys, fast arp", 4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    assert a.shape == (15 * 32000,)


def test_generator_rejects_empty_prompt(checkpoints):
    generator = load_generator(checkpoints["tonegen"])
    with pytest.raises(GenerationFailure):
        generator.render("", 0)


def test_toy_checkpoint_weights_are_seeded(tmp_path):
    a = write_toy_checkpoint(tmp_path / "a", "specpool", space_tag="x", dim=8, seed=5)
    b = write_toy_checkpoint(tmp_path / "b", "specpool", space_tag="x", dim=8, seed=5)
    wa = np.load(a / "weights.npz")["projection"]
    wb = np.load(b / "weights.npz")["projection"]
    assert np.array_equal(wa, wb)
