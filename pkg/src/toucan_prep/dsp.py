"""Frame-level signal analysis: log-mel spectrogram, pitch and energy.

All three analyses share one framing convention so their frame counts
always agree: centered frames, reflection padding of half a window on each
side, frame count 1 + len(audio) // hop. Pitch uses window-corrected
autocorrelation with a voicing decision, so the whole pipeline runs
without any external analysis tool.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import get_window

from .errors import EmptyAudio, SampleRateMismatch, ValidationError


@dataclass(frozen=True)
class MelConfig:
    sample_rate: int = 16000
    win_length: int = 1024
    hop_length: int = 256
    window: str = "hann"
    n_mels: int = 80
    fmin: float = 0.0
    fmax: float = 8000.0
    log_floor: float = 1e-10

    def __post_init__(self):
        if self.hop_length > self.win_length:
            raise ValidationError("hop_length must not exceed win_length")
        if self.n_mels < 1:
            raise ValidationError("n_mels must be at least 1")
        if self.fmax > self.sample_rate / 2:
            raise ValidationError("fmax must not exceed the Nyquist frequency")
        if not 0 <= self.fmin < self.fmax:
            raise ValidationError("need 0 <= fmin < fmax")

    def n_frames(self, n_samples: int) -> int:
        return 1 + n_samples // self.hop_length


@dataclass(frozen=True)
class FrameTrack:
    """Per-frame scalars on the shared frame grid."""

    values: np.ndarray
    kind: str  # "pitch_hz" or "energy"

    def __post_init__(self):
        if self.kind not in ("pitch_hz", "energy"):
            raise ValidationError(f"unknown track kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.values)


def _check_audio(audio: np.ndarray, sample_rate: int, cfg: MelConfig) -> np.ndarray:
    audio = np.asarray(audio, dtype=np.float64)
    if audio.ndim != 1 or audio.size == 0:
        raise EmptyAudio("expected non-empty mono audio")
    if sample_rate != cfg.sample_rate:
        raise SampleRateMismatch(
            f"audio is {sample_rate} Hz but config expects {cfg.sample_rate} Hz")
    if audio.size <= cfg.win_length // 2:
        raise EmptyAudio(
            f"audio must be longer than {cfg.win_length // 2} samples to frame")
    return audio


def frame_signal(audio: np.ndarray, cfg: MelConfig) -> np.ndarray:
    """Centered frames with reflection padding, shape (n_frames, win)."""
    pad = cfg.win_length // 2
    padded = np.pad(audio, pad, mode="reflect")
    n_frames = cfg.n_frames(audio.size)
    starts = cfg.hop_length * np.arange(n_frames)
    idx = starts[:, None] + np.arange(cfg.win_length)[None, :]
    return padded[idx]


@lru_cache(maxsize=8)
def _window(name: str, length: int) -> np.ndarray:
    return get_window(name, length, fftbins=True)


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(cfg: MelConfig) -> np.ndarray:
    """Triangular mel filters, shape (n_mels, n_fft // 2 + 1), peaks at 1."""
    n_fft = cfg.win_length
    bin_freqs = np.arange(n_fft // 2 + 1) * cfg.sample_rate / n_fft
    mel_points = np.linspace(hz_to_mel(cfg.fmin), hz_to_mel(cfg.fmax),
                             cfg.n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    weights = np.zeros((cfg.n_mels, bin_freqs.size))
    for m in range(cfg.n_mels):
        lower, center, upper = hz_points[m], hz_points[m + 1], hz_points[m + 2]
        up = (bin_freqs - lower) / (center - lower)
        down = (upper - bin_freqs) / (upper - center)
        weights[m] = np.maximum(0.0, np.minimum(up, down))
    return weights


def mel_spectrogram(audio: np.ndarray, sample_rate: int,
                    cfg: MelConfig | None = None) -> np.ndarray:
    """Log10 mel spectrogram, shape (n_frames, n_mels)."""
    cfg = cfg or MelConfig()
    audio = _check_audio(audio, sample_rate, cfg)
    frames = frame_signal(audio, cfg) * _window(cfg.window, cfg.win_length)
    magnitude = np.abs(np.fft.rfft(frames, axis=1))
    mel = magnitude @ mel_filterbank(cfg).T
    return np.log10(np.maximum(mel, cfg.log_floor))


def extract_energy(audio: np.ndarray, sample_rate: int,
                   cfg: MelConfig | None = None) -> FrameTrack:
    """Per-frame RMS of the windowed frame."""
    cfg = cfg or MelConfig()
    audio = _check_audio(audio, sample_rate, cfg)
    frames = frame_signal(audio, cfg) * _window(cfg.window, cfg.win_length)
    return FrameTrack(np.sqrt(np.mean(frames ** 2, axis=1)), "energy")


@lru_cache(maxsize=8)
def _window_autocorr(name: str, length: int) -> np.ndarray:
    w = _window(name, length)
    spectrum = np.abs(np.fft.rfft(w, 2 * length)) ** 2
    r = np.fft.irfft(spectrum)[:length]
    return r / r[0]


def extract_pitch(
    audio: np.ndarray,
    sample_rate: int,
    cfg: MelConfig | None = None,
    fmin: float = 60.0,
    fmax: float = 400.0,
    voicing_threshold: float = 0.45,
    silence_rms: float = 1e-4,
    octave_cost: float = 0.01,
) -> FrameTrack:
    """Per-frame fundamental frequency in Hz; unvoiced frames are 0.

    Window-corrected autocorrelation per frame: the normalized ACF of the
    windowed frame divided by the window's own ACF estimates the signal
    ACF. Candidate lags are the local maxima in the search range, scored
    with a small octave cost so period multiples do not win over the true
    period. A frame is voiced when the winning candidate exceeds the
    voicing threshold; its lag is refined by parabolic interpolation.
    """
    cfg = cfg or MelConfig()
    audio = _check_audio(audio, sample_rate, cfg)
    n = cfg.win_length
    lag_min = max(2, int(np.floor(sample_rate / fmax)))
    lag_max = min(n - 2, int(np.ceil(sample_rate / fmin)))
    if lag_min >= lag_max:
        raise ValidationError("pitch search range is empty for this window")

    window = _window(cfg.window, n)
    win_acf = _window_autocorr(cfg.window, n)
    frames = frame_signal(audio, cfg)
    frames = frames - frames.mean(axis=1, keepdims=True)
    rms = np.sqrt(np.mean(frames ** 2, axis=1))

    windowed = frames * window
    spectrum = np.abs(np.fft.rfft(windowed, 2 * n, axis=1)) ** 2
    acf = np.fft.irfft(spectrum, axis=1)[:, :n]

    lags = np.arange(lag_min, lag_max + 1)
    octave_penalty = octave_cost * np.log2(fmin * lags / sample_rate)

    out = np.zeros(len(frames))
    for i in range(len(frames)):
        if rms[i] < silence_rms or acf[i, 0] <= 0.0:
            continue
        corrected = (acf[i] / acf[i, 0]) / win_acf
        segment = corrected[lag_min:lag_max + 1]
        is_peak = np.zeros(segment.shape, dtype=bool)
        is_peak[1:-1] = (segment[1:-1] > segment[:-2]) & (segment[1:-1] >= segment[2:])
        if not is_peak.any():
            continue
        scores = np.where(is_peak, segment - octave_penalty, -np.inf)
        peak = int(np.argmax(scores)) + lag_min
        strength = corrected[peak]
        if strength < voicing_threshold:
            continue
        # Parabolic refinement around the integer peak.
        left, mid, right = corrected[peak - 1], corrected[peak], corrected[peak + 1]
        denom = left - 2.0 * mid + right
        delta = 0.0 if denom == 0.0 else 0.5 * (left - right) / denom
        delta = float(np.clip(delta, -1.0, 1.0))
        out[i] = sample_rate / (peak + delta)
    return FrameTrack(out, "pitch_hz")
