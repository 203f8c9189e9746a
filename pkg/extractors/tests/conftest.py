"""Shared fixtures: toy checkpoints and a synthesized test tone."""

from pathlib import Path

import numpy as np
import pytest

from stylegap_extractors import write_toy_checkpoint
from stylegap_extractors.audio import save_wav_pcm16


@pytest.fixture(scope="session")
def checkpoints(tmp_path_factory) -> dict:
    root = tmp_path_factory.mktemp("checkpoints")
    return {
        "vggish": write_toy_checkpoint(
            root / "vggish", "melproj", space_tag="vggish", dim=64,
            sample_rate=16000, seed=11,
        ),
        "clap": write_toy_checkpoint(
            root / "clap", "specpool", space_tag="clap", dim=96,
            sample_rate=32000, seed=22,
        ),
        "tonegen": write_toy_checkpoint(
            root / "tonegen", "tonegen", sample_rate=32000, clip_seconds=15.0, seed=33,
        ),
    }


@pytest.fixture(scope="session")
def test_tone(tmp_path_factory) -> Path:
    """A 15-second 32 kHz synthesized tone."""
    out = tmp_path_factory.mktemp("tone") / "tone_a440.wav"
    t = np.arange(15 * 32000) / 32000.0
    samples = 0.4 * np.sin(2 * np.pi * 440.0 * t) + 0.1 * np.sin(2 * np.pi * 880.0 * t)
    save_wav_pcm16(samples, 32000, out)
    return out


def make_bundle(path: Path, artist: str, flavor: str) -> Path:
    """A minimal valid descriptor bundle for tests."""
    import json

    sets = [
        [f"{flavor} lead timbre", f"{flavor} bass floor", f"{flavor} room tone"],
        [f"soft {flavor} pad", f"deep {flavor} pulse", f"dry {flavor} space"],
        [f"airy {flavor} keys", f"warm {flavor} drone", f"tight {flavor} groove"],
        [f"glassy {flavor} chime", f"round {flavor} sub", f"open {flavor} hall"],
        [f"dusty {flavor} texture", f"low {flavor} thrum", f"close {flavor} mix"],
    ]
    doc = {
        "artist_name": artist,
        "baseline": f"a steady instrumental sketch with {flavor} motion",
        "sets": sets,
    }
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return path
