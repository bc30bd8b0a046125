"""Integrated loudness measurement and gain-based normalization.

Implements the gated loudness algorithm of ITU-R BS.1770-4 for mono audio:
two-stage K-weighting, 400 ms blocks at 75% overlap, an absolute gate at
-70 LUFS and a relative gate 10 LU below the absolutely-gated mean. The
K-weighting stages are designed parametrically from the analog prototype
(De Man's coefficients), so any sample rate yields the response the
standard fixes at 48 kHz.
"""
from __future__ import annotations

import warnings

import numpy as np
from scipy.signal import lfilter

from .errors import EmptyAudio, TooShort

BLOCK_SECONDS = 0.400
STEP_SECONDS = 0.100  # 75% overlap
ABSOLUTE_GATE_LUFS = -70.0
RELATIVE_GATE_LU = -10.0
_OFFSET = -0.691


def _high_shelf(fs: float) -> tuple[np.ndarray, np.ndarray]:
    f0 = 1681.9744509555319
    gain_db = 3.99984385397
    q = 0.7071752369554193
    k = np.tan(np.pi * f0 / fs)
    vh = 10.0 ** (gain_db / 20.0)
    vb = vh ** 0.499666774155
    a0 = 1.0 + k / q + k * k
    b = np.array([
        (vh + vb * k / q + k * k) / a0,
        2.0 * (k * k - vh) / a0,
        (vh - vb * k / q + k * k) / a0,
    ])
    a = np.array([1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0])
    return b, a


def _high_pass(fs: float) -> tuple[np.ndarray, np.ndarray]:
    f0 = 38.13547087613982
    q = 0.5003270373253953
    k = np.tan(np.pi * f0 / fs)
    a0 = 1.0 + k / q + k * k
    b = np.array([1.0, -2.0, 1.0])
    a = np.array([1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0])
    return b, a


def k_weight(audio: np.ndarray, sample_rate: int) -> np.ndarray:
    """Apply both K-weighting stages."""
    out = lfilter(*_high_shelf(sample_rate), audio)
    return lfilter(*_high_pass(sample_rate), out)


def measure_loudness(audio: np.ndarray, sample_rate: int) -> float:
    """Gated integrated loudness in LUFS.

    Needs at least one 400 ms gating block. Returns -inf when every block
    is below the absolute gate (digital silence).
    """
    audio = np.asarray(audio, dtype=np.float64)
    if audio.ndim != 1 or audio.size == 0:
        raise EmptyAudio("expected non-empty mono audio")
    block = int(round(BLOCK_SECONDS * sample_rate))
    step = int(round(STEP_SECONDS * sample_rate))
    if audio.size < block:
        raise TooShort(
            f"audio is {audio.size / sample_rate:.3f} s, need {BLOCK_SECONDS} s")

    weighted = k_weight(audio, sample_rate)
    n_blocks = (audio.size - block) // step + 1
    starts = step * np.arange(n_blocks)
    power = np.array([
        np.mean(weighted[s:s + block] ** 2) for s in starts
    ])

    with np.errstate(divide="ignore"):
        block_loudness = _OFFSET + 10.0 * np.log10(power)
    gated_abs = power[block_loudness > ABSOLUTE_GATE_LUFS]
    if gated_abs.size == 0:
        return float("-inf")
    relative_gate = (_OFFSET + 10.0 * np.log10(gated_abs.mean())
                     + RELATIVE_GATE_LU)
    gated = power[(block_loudness > ABSOLUTE_GATE_LUFS)
                  & (block_loudness > relative_gate)]
    if gated.size == 0:
        return float("-inf")
    return float(_OFFSET + 10.0 * np.log10(gated.mean()))


def measure_rms_dbfs(audio: np.ndarray) -> float:
    """Plain RMS level in dBFS; the unweighted, ungated alternative scale."""
    audio = np.asarray(audio, dtype=np.float64)
    if audio.ndim != 1 or audio.size == 0:
        raise EmptyAudio("expected non-empty mono audio")
    rms = float(np.sqrt(np.mean(audio ** 2)))
    return 20.0 * np.log10(rms) if rms > 0.0 else float("-inf")


def normalize_loudness(
    audio: np.ndarray,
    target_lufs: float,
    sample_rate: int,
    peak_safe: bool = False,
) -> np.ndarray:
    """Scale audio so it measures `target_lufs`.

    Pure gain: re-measuring the output hits the target as long as the
    signal stays clear of the absolute gate. When the gain pushes peaks
    past full scale a warning is issued; `peak_safe` rescales to 0.999
    instead (and then intentionally misses the target).
    """
    audio = np.asarray(audio, dtype=np.float64)
    measured = measure_loudness(audio, sample_rate)
    gain = 10.0 ** ((target_lufs - measured) / 20.0)
    out = audio * gain
    return _warn_on_peak(out, target_lufs, peak_safe)


def normalize_rms_dbfs(
    audio: np.ndarray,
    target_dbfs: float,
    peak_safe: bool = False,
) -> np.ndarray:
    """Gain to a plain RMS target instead of a gated loudness target."""
    audio = np.asarray(audio, dtype=np.float64)
    gain = 10.0 ** ((target_dbfs - measure_rms_dbfs(audio)) / 20.0)
    return _warn_on_peak(audio * gain, target_dbfs, peak_safe)


def _warn_on_peak(out: np.ndarray, target: float, peak_safe: bool) -> np.ndarray:
    peak = np.max(np.abs(out)) if out.size else 0.0
    if peak > 1.0:
        if peak_safe:
            out = out * (0.999 / peak)
        else:
            warnings.warn(
                f"normalization to {target} pushes peak to "
                f"{peak:.3f}; output exceeds full scale", stacklevel=3)
    return out
