"""Mono WAV reading/writing and the final output signal chain.

The output chain fixes the delivery format: audio generated at 24 kHz is
sample-doubled to 48 kHz, low-passed at 12 kHz with a first-order filter
(6 dB per octave) to suppress the imaging copy, and quantized to int16.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.signal import bilinear, lfilter

from .errors import EmptyAudio, InputFormatError

OUTPUT_RATE = 48000
SYNTHESIS_RATE = 24000
LOWPASS_HZ = 12000.0


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a mono WAV as float64 in [-1, 1]."""
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
    if data.ndim != 1:
        raise InputFormatError(f"{path}: expected mono audio, got {data.ndim} channels")
    if data.dtype == np.int16:
        audio = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        audio = data.astype(np.float64) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        audio = data.astype(np.float64)
    else:
        raise InputFormatError(f"{path}: unsupported sample format {data.dtype}")
    return audio, int(rate)


def write_wav(path: str | Path, audio: np.ndarray, sample_rate: int,
              dtype: str = "float32") -> None:
    audio = np.asarray(audio)
    if audio.size == 0:
        raise EmptyAudio("refusing to write an empty WAV")
    if dtype == "float32":
        wavfile.write(path, sample_rate, audio.astype(np.float32))
    elif dtype == "int16":
        if audio.dtype == np.int16:
            wavfile.write(path, sample_rate, audio)
        else:
            wavfile.write(path, sample_rate, quantize_int16(audio))
    else:
        raise ValueError(f"unsupported dtype {dtype!r}")


def _lowpass_coefficients() -> tuple[np.ndarray, np.ndarray]:
    # First-order analog prototype 1 / (1 + s/wc), discretized at 48 kHz.
    wc = 2.0 * np.pi * LOWPASS_HZ
    return bilinear([1.0], [1.0 / wc, 1.0], fs=OUTPUT_RATE)


def anti_imaging_filter(audio: np.ndarray) -> np.ndarray:
    """First-order 12 kHz low-pass at the 48 kHz output rate."""
    b, a = _lowpass_coefficients()
    return lfilter(b, a, np.asarray(audio, dtype=np.float64))


def quantize_int16(audio: np.ndarray) -> np.ndarray:
    """Scale to int16 with round-half-away-from-zero and clamping."""
    scaled = np.asarray(audio, dtype=np.float64) * 32767.0
    rounded = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    return np.clip(rounded, -32768, 32767).astype(np.int16)


def finalize_output(audio_24k: np.ndarray) -> np.ndarray:
    """24 kHz float audio -> 48 kHz int16 samples.

    Every sample is repeated once (exact length doubling), the imaging
    copy above 12 kHz is attenuated by the first-order low-pass, and the
    result is quantized.
    """
    audio_24k = np.asarray(audio_24k, dtype=np.float64)
    if audio_24k.size == 0:
        raise EmptyAudio("expected non-empty audio")
    doubled = np.repeat(audio_24k, 2)
    return quantize_int16(anti_imaging_filter(doubled))
