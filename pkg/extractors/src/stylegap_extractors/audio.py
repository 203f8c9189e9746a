"""WAV handling: decode to mono float, resample, and PCM16 output."""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.signal import resample_poly

from .errors import AudioDecodeFailure, IoFailure, SampleRateUnsupported

MIN_SAMPLE_RATE = 8000
MAX_SAMPLE_RATE = 192000

_PCM_SCALE = {np.dtype(np.int16): 2.0**15, np.dtype(np.int32): 2.0**31}


def load_wav_mono(path: str | Path, target_rate: int) -> np.ndarray:
    """Decode a WAV file to mono float64 in [-1, 1] at *target_rate*."""
    try:
        rate, data = wavfile.read(str(path))
    except (OSError, ValueError) as exc:
        raise AudioDecodeFailure(f"cannot decode {path}: {exc}") from exc
    if data.size == 0:
        raise AudioDecodeFailure(f"{path}: zero-length audio")
    if not MIN_SAMPLE_RATE <= rate <= MAX_SAMPLE_RATE:
        raise SampleRateUnsupported(
            f"{path}: sample rate {rate} outside "
            f"[{MIN_SAMPLE_RATE}, {MAX_SAMPLE_RATE}]"
        )
    samples = np.asarray(data)
    if samples.dtype in _PCM_SCALE:
        samples = samples.astype(np.float64) / _PCM_SCALE[samples.dtype]
    elif samples.dtype == np.uint8:
        samples = (samples.astype(np.float64) - 128.0) / 128.0
    else:
        samples = samples.astype(np.float64)
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    if not np.isfinite(samples).all():
        raise AudioDecodeFailure(f"{path}: non-finite samples")
    if rate != target_rate:
        gcd = np.gcd(rate, target_rate)
        samples = resample_poly(samples, target_rate // gcd, rate // gcd)
    return samples


def save_wav_pcm16(samples: np.ndarray, rate: int, path: str | Path) -> None:
    """Write mono float samples in [-1, 1] as a PCM16 WAV (deterministic bytes)."""
    clipped = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0)
    pcm = np.round(clipped * 32767.0).astype("<i2")
    try:
        with wave.open(str(path), "wb") as fh:
            fh.setnchannels(1)
            fh.setsampwidth(2)
            fh.setframerate(rate)
            fh.writeframes(pcm.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
