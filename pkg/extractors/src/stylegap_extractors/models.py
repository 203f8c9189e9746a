"""Model checkpoints behind a directory contract.

A checkpoint is a directory holding ``model.json`` plus ``weights.npz``.
``model.json`` declares a ``family`` that selects the loader:

* ``melproj``  - frame-level embedder: log-mel patches over fixed
  windows, one linear projection per window, one EMB1 row per frame.
* ``specpool`` - clip-level embedder: global log-mel statistics through
  a linear projection, exactly one EMB1 row per clip.
* ``tonegen``  - deterministic prompt-conditioned tone synthesizer used
  for seeded clip generation.

Anything else (including adapters for heavyweight pretrained networks)
plugs in through the same contract; loading a checkpoint that is not on
disk raises ModelLoadFailure with a remediation hint. The shipped
``write_toy_checkpoint`` materializes small seeded weights for each
family so the full extract/generate pipeline runs anywhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GenerationFailure, ModelLoadFailure

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1


def _fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK
    return h


def _load_checkpoint_dir(path: str | Path) -> tuple[dict, dict]:
    path = Path(path)
    meta_path = path / "model.json"
    weights_path = path / "weights.npz"
    if not meta_path.is_file() or not weights_path.is_file():
        raise ModelLoadFailure(
            f"no checkpoint at {path}: expected model.json and weights.npz "
            f"(create one with write_toy_checkpoint or point --checkpoint at "
            f"an existing checkpoint directory)"
        )
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        weights = dict(np.load(weights_path))
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise ModelLoadFailure(f"unreadable checkpoint at {path}: {exc}") from exc
    if not isinstance(meta, dict) or "family" not in meta:
        raise ModelLoadFailure(f"{meta_path}: missing 'family'")
    return meta, weights


# ---------------------------------------------------------------------------
# Log-mel frontend (shared by both embedding families)
# ---------------------------------------------------------------------------


def _hz_to_mel(hz: np.ndarray) -> np.ndarray:
    return 2595.0 * np.log10(1.0 + hz / 700.0)


def _mel_to_hz(mel: np.ndarray) -> np.ndarray:
    return 700.0 * (10.0 ** (mel / 2595.0) - 1.0)


def _mel_filterbank(n_mels: int, n_fft: int, rate: int, fmin: float, fmax: float) -> np.ndarray:
    freqs = np.linspace(0.0, rate / 2.0, n_fft // 2 + 1)
    edges = _mel_to_hz(np.linspace(_hz_to_mel(np.array(fmin)), _hz_to_mel(np.array(fmax)), n_mels + 2))
    bank = np.zeros((n_mels, freqs.size))
    for m in range(n_mels):
        lo, mid, hi = edges[m], edges[m + 1], edges[m + 2]
        up = (freqs - lo) / max(mid - lo, 1e-9)
        down = (hi - freqs) / max(hi - mid, 1e-9)
        bank[m] = np.clip(np.minimum(up, down), 0.0, None)
    return bank


def log_mel_frames(
    samples: np.ndarray,
    rate: int,
    n_mels: int,
    win_seconds: float = 0.025,
    hop_seconds: float = 0.010,
    fmin: float = 125.0,
    fmax: float = 7500.0,
) -> np.ndarray:
    """Log-mel spectrogram, one row per analysis sub-frame."""
    win = int(round(win_seconds * rate))
    hop = int(round(hop_seconds * rate))
    if samples.size < win:
        samples = np.pad(samples, (0, win - samples.size))
    n_frames = 1 + (samples.size - win) // hop
    window = np.hanning(win)
    n_fft = int(2 ** math.ceil(math.log2(win)))
    bank = _mel_filterbank(n_mels, n_fft, rate, fmin, min(fmax, rate / 2.0))
    frames = np.lib.stride_tricks.sliding_window_view(samples, win)[::hop][:n_frames]
    spectrum = np.abs(np.fft.rfft(frames * window, n=n_fft, axis=1)) ** 2
    mel = spectrum @ bank.T
    return np.log(mel + 1e-6)


# ---------------------------------------------------------------------------
# Embedding families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Embedder:
    """Loaded embedding model: maps mono samples at .rate to EMB1 rows."""

    family: str
    space_tag: str
    rate: int
    dim: int
    meta: dict
    weights: dict

    def embed(self, samples: np.ndarray) -> np.ndarray:
        if self.family == "melproj":
            return self._embed_melproj(samples)
        return self._embed_specpool(samples)

    def _embed_melproj(self, samples: np.ndarray) -> np.ndarray:
        n_mels = int(self.meta["n_mels"])
        mel = log_mel_frames(samples, self.rate, n_mels)
        per_window = int(round(float(self.meta["frame_seconds"]) / 0.010))
        n_windows = mel.shape[0] // per_window
        if n_windows < 1:
            n_windows = 1
            mel = np.pad(mel, ((0, per_window - mel.shape[0]), (0, 0)))
        patches = mel[: n_windows * per_window].reshape(n_windows, per_window * n_mels)
        return patches @ self.weights["projection"] + self.weights["bias"]

    def _embed_specpool(self, samples: np.ndarray) -> np.ndarray:
        n_mels = int(self.meta["n_mels"])
        mel = log_mel_frames(samples, self.rate, n_mels)
        stats = np.concatenate([mel.mean(axis=0), mel.std(axis=0)])
        row = stats @ self.weights["projection"] + self.weights["bias"]
        return row.reshape(1, -1)


def load_embedder(path: str | Path) -> Embedder:
    meta, weights = _load_checkpoint_dir(path)
    family = meta["family"]
    if family not in ("melproj", "specpool"):
        raise ModelLoadFailure(
            f"{path}: family {family!r} is not an embedding model"
        )
    for key in ("space_tag", "sample_rate", "n_mels", "dim"):
        if key not in meta:
            raise ModelLoadFailure(f"{path}: model.json missing {key!r}")
    if "projection" not in weights or "bias" not in weights:
        raise ModelLoadFailure(f"{path}: weights.npz missing projection/bias")
    embedder = Embedder(
        family=family,
        space_tag=str(meta["space_tag"]),
        rate=int(meta["sample_rate"]),
        dim=int(meta["dim"]),
        meta=meta,
        weights=weights,
    )
    if weights["projection"].shape[1] != embedder.dim:
        raise ModelLoadFailure(f"{path}: projection width != declared dim")
    return embedder


# ---------------------------------------------------------------------------
# Tone generator family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ToneGenerator:
    """Prompt-conditioned, seed-deterministic tone synthesizer.

    The prompt hash selects partials, decay, and vibrato from the
    checkpoint's tables; the seed drives phases and a low-level noise
    floor through a generator re-seeded immediately before each render.
    Same (prompt, seed) always produces identical samples.
    """

    rate: int
    clip_seconds: float
    freq_table: np.ndarray
    amp_table: np.ndarray

    def render(self, prompt: str, seed: int) -> np.ndarray:
        if not prompt:
            raise GenerationFailure("prompt must be a non-empty string")
        rng = np.random.default_rng(seed)  # re-seeded for every render
        h = _fnv1a64(prompt)
        n_partials = 3 + (h & 0x3)
        idx = [(h >> (8 * i)) % self.freq_table.size for i in range(n_partials)]
        freqs = self.freq_table[idx]
        amps = self.amp_table[idx]
        decay = 0.2 + ((h >> 32) & 0xFF) / 255.0 * 1.2
        vibrato = 0.002 + ((h >> 40) & 0xFF) / 255.0 * 0.006

        t = np.arange(int(self.rate * self.clip_seconds)) / self.rate
        phases = rng.uniform(0.0, 2.0 * np.pi, size=n_partials)
        signal = np.zeros_like(t)
        for f, a, phi in zip(freqs, amps, phases):
            wobble = 1.0 + vibrato * np.sin(2.0 * np.pi * 0.5 * t + phi)
            signal += a * np.sin(2.0 * np.pi * f * wobble * t + phi)
        envelope = np.exp(-decay * t) * 0.5 + 0.5
        signal *= envelope
        signal += 1e-3 * rng.standard_normal(t.size)
        peak = np.abs(signal).max()
        return 0.5 * signal / peak


def load_generator(path: str | Path) -> ToneGenerator:
    meta, weights = _load_checkpoint_dir(path)
    if meta["family"] != "tonegen":
        raise ModelLoadFailure(f"{path}: family {meta['family']!r} is not a generator")
    for key in ("sample_rate", "clip_seconds"):
        if key not in meta:
            raise ModelLoadFailure(f"{path}: model.json missing {key!r}")
    if "freq_table" not in weights or "amp_table" not in weights:
        raise ModelLoadFailure(f"{path}: weights.npz missing freq_table/amp_table")
    return ToneGenerator(
        rate=int(meta["sample_rate"]),
        clip_seconds=float(meta["clip_seconds"]),
        freq_table=weights["freq_table"].astype(np.float64),
        amp_table=weights["amp_table"].astype(np.float64),
    )


# ---------------------------------------------------------------------------
# Toy checkpoints
# ---------------------------------------------------------------------------


def write_toy_checkpoint(
    path: str | Path,
    family: str,
    space_tag: str = "",
    dim: int = 128,
    sample_rate: int = 16000,
    n_mels: int = 64,
    frame_seconds: float = 0.96,
    clip_seconds: float = 15.0,
    seed: int = 0,
) -> Path:
    """Materialize a small deterministic checkpoint for a model family."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    if family == "melproj":
        per_window = int(round(frame_seconds / 0.010))
        width = per_window * n_mels
        meta = {
            "family": family,
            "space_tag": space_tag,
            "sample_rate": sample_rate,
            "n_mels": n_mels,
            "frame_seconds": frame_seconds,
            "dim": dim,
        }
        arrays = {
            "projection": rng.standard_normal((width, dim)) / math.sqrt(width),
            "bias": 0.01 * rng.standard_normal(dim),
        }
    elif family == "specpool":
        meta = {
            "family": family,
            "space_tag": space_tag,
            "sample_rate": sample_rate,
            "n_mels": n_mels,
            "dim": dim,
        }
        arrays = {
            "projection": rng.standard_normal((2 * n_mels, dim)) / math.sqrt(2 * n_mels),
            "bias": 0.01 * rng.standard_normal(dim),
        }
    elif family == "tonegen":
        meta = {
            "family": family,
            "sample_rate": sample_rate,
            "clip_seconds": clip_seconds,
        }
        arrays = {
            "freq_table": np.geomspace(110.0, 1760.0, 64),
            "amp_table": 0.3 + 0.7 * rng.random(64),
        }
    else:
        raise ModelLoadFailure(f"unknown model family {family!r}")
    (path / "model.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    np.savez(path / "weights.npz", **arrays)
    return path
