"""Collapse frame tracks to phone-level prosody values.

Pitch and energy are averaged over each phone's frame span (pitch over
voiced frames only), pitch is zeroed for voiceless phones, both are zeroed
for silence tokens, and finally each track is divided by its nonzero mean
so the resulting curves are speaker independent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dsp import FrameTrack
from .errors import LengthMismatch, ValidationError
from .phonemes import FeatureTable, PhonemeToken, default_feature_table


@dataclass(frozen=True)
class PhoneProsody:
    duration_frames: int
    pitch: float
    energy: float


def average_per_phone(track: FrameTrack, durations: Sequence[int]) -> np.ndarray:
    """Mean track value per phone span; pitch averages voiced frames only."""
    values = np.asarray(track.values, dtype=np.float64)
    total = int(sum(durations))
    if total != len(values):
        raise LengthMismatch(
            f"durations cover {total} frames, track has {len(values)}")
    out = np.zeros(len(durations))
    start = 0
    for i, dur in enumerate(durations):
        span = values[start:start + dur]
        start += dur
        if dur == 0:
            continue
        if track.kind == "pitch_hz":
            voiced = span[span > 0]
            out[i] = voiced.mean() if voiced.size else 0.0
        else:
            out[i] = span.mean()
    return out


def zero_silences(
    values: np.ndarray,
    tokens: Sequence[PhonemeToken],
    kind: str,
    table: FeatureTable | None = None,
) -> np.ndarray:
    """Zero pitch on voiceless phones, pitch and energy on silence tokens."""
    if kind not in ("pitch_hz", "energy"):
        raise ValidationError(f"unknown track kind {kind!r}")
    values = np.asarray(values, dtype=np.float64)
    if len(values) != len(tokens):
        raise LengthMismatch(f"{len(values)} values for {len(tokens)} tokens")
    table = table or default_feature_table()
    unvoiced = table.unvoiced_symbols()
    out = values.copy()
    for i, token in enumerate(tokens):
        if token.is_silence:
            out[i] = 0.0
        elif kind == "pitch_hz" and token.symbol in unvoiced:
            out[i] = 0.0
    return out


def normalize_per_utterance(values: np.ndarray, mode: str = "divide") -> np.ndarray:
    """Normalize by the mean of the nonzero entries; zeros stay zero.

    The default divides (curves keep their shape across speakers); the
    "subtract" mode removes the mean instead, for consumers that prefer
    offsets over ratios.
    """
    if mode not in ("divide", "subtract"):
        raise ValidationError(f"unknown normalization mode {mode!r}")
    values = np.asarray(values, dtype=np.float64)
    nonzero = values != 0.0
    if not nonzero.any():
        return values.copy()
    mean = values[nonzero].mean()
    if mode == "divide":
        return values / mean
    out = values.copy()
    out[nonzero] -= mean
    return out


def phone_prosody(
    tokens: Sequence[PhonemeToken],
    durations: Sequence[int],
    pitch_track: FrameTrack,
    energy_track: FrameTrack,
    table: FeatureTable | None = None,
    norm_mode: str = "divide",
) -> list[PhoneProsody]:
    """Full per-phone chain: average, zero silences, normalize."""
    if len(tokens) != len(durations):
        raise LengthMismatch(f"{len(tokens)} tokens for {len(durations)} durations")
    pitch = average_per_phone(pitch_track, durations)
    energy = average_per_phone(energy_track, durations)
    pitch = normalize_per_utterance(
        zero_silences(pitch, tokens, "pitch_hz", table), norm_mode)
    energy = normalize_per_utterance(
        zero_silences(energy, tokens, "energy", table), norm_mode)
    return [
        PhoneProsody(int(d), float(p), float(e))
        for d, p, e in zip(durations, pitch, energy)
    ]
