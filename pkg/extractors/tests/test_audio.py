"""WAV decode/encode and resampling."""

import numpy as np
import pytest

from stylegap_extractors.audio import load_wav_mono, save_wav_pcm16
from stylegap_extractors.errors import AudioDecodeFailure


def test_pcm16_round_trip(tmp_path):
    t = np.arange(32000) / 32000.0
    samples = 0.25 * np.sin(2 * np.pi * 220.0 * t)
    path = tmp_path / "a.wav"
    save_wav_pcm16(samples, 32000, path)
    back = load_wav_mono(path, 32000)
    assert back.shape == samples.shape
    assert np.abs(back - samples).max() < 1.0 / 32000.0


def test_resampling_halves_length(tmp_path):
    samples = np.sin(2 * np.pi * 100.0 * np.arange(32000) / 32000.0)
    path = tmp_path / "b.wav"
    save_wav_pcm16(samples, 32000, path)
    down = load_wav_mono(path, 16000)
    assert down.shape == (16000,)


def test_write_is_deterministic(tmp_path):
    samples = np.sin(2 * np.pi * 330.0 * np.arange(8000) / 32000.0)
    p1, p2 = tmp_path / "c1.wav", tmp_path / "c2.wav"
    save_wav_pcm16(samples, 32000, p1)
    save_wav_pcm16(samples, 32000, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_zero_length_audio_rejected(tmp_path):
    path = tmp_path / "empty.wav"
    save_wav_pcm16(np.zeros(1), 32000, path)
    # strip the data chunk down to zero frames
    import wave

    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(32000)
        fh.writeframes(b"")
    with pytest.raises(AudioDecodeFailure):
        load_wav_mono(path, 16000)


def test_garbage_file_rejected(tmp_path):
    path = tmp_path / "junk.wav"
    path.write_bytes(b"this is not audio")
    with pytest.raises(AudioDecodeFailure):
        load_wav_mono(path, 16000)


def test_extreme_sample_rate_rejected(tmp_path):
    from scipy.io import wavfile

    from stylegap_extractors.errors import SampleRateUnsupported

    path = tmp_path / "slow.wav"
    wavfile.write(str(path), 4000, (np.zeros(100) + 0.1 * 32767).astype(np.int16))
    with pytest.raises(SampleRateUnsupported):
        load_wav_mono(path, 16000)


def test_stereo_downmixes(tmp_path):
    from scipy.io import wavfile

    stereo = np.stack(
        [np.full(1000, 0.5), np.full(1000, -0.5)], axis=1
    )
    path = tmp_path / "stereo.wav"
    wavfile.write(str(path), 32000, (stereo * 32767).astype(np.int16))
    mono = load_wav_mono(path, 32000)
    assert mono.ndim == 1
    assert abs(mono.mean()) < 1e-3
