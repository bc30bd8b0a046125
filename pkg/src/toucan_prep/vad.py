"""Energy-hysteresis voice activity detection.

Frame RMS in dB is compared against an enter threshold (utterance median,
floored at an absolute level) and a lower exit threshold; the hysteresis
keeps moderate in-speech dips from chopping segments. Labels share the
frame grid of the spectral features. Externally produced label files are
accepted through `read_vad_labels`.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .dsp import MelConfig, _check_audio, frame_signal
from .errors import ParseError


def energy_vad(
    audio: np.ndarray,
    sample_rate: int,
    cfg: MelConfig | None = None,
    enter_rel_db: float = -3.0,
    hysteresis_db: float = 8.0,
    floor_db: float = -50.0,
) -> np.ndarray:
    """Per-frame speech labels (1 = speech, 0 = non-speech), dtype uint8."""
    cfg = cfg or MelConfig()
    audio = _check_audio(audio, sample_rate, cfg)
    frames = frame_signal(audio, cfg)
    rms_db = 20.0 * np.log10(np.sqrt(np.mean(frames ** 2, axis=1)) + 1e-10)
    enter = max(floor_db, float(np.median(rms_db)) + enter_rel_db)
    exit_ = enter - hysteresis_db

    labels = np.zeros(len(rms_db), dtype=np.uint8)
    speech = False
    for i, db in enumerate(rms_db):
        if not speech and db >= enter:
            speech = True
        elif speech and db < exit_:
            speech = False
        labels[i] = 1 if speech else 0
    return labels


def read_vad_labels(path: str | Path) -> dict[str, np.ndarray]:
    """Label file rows: utt_id<TAB>frame_labels as a 0/1 string."""
    out: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not set(parts[1]) <= {"0", "1"}:
            raise ParseError("expected utt_id<TAB>binary label string", line=lineno)
        out[parts[0]] = np.frombuffer(parts[1].encode(), dtype=np.uint8) - ord("0")
    return out


def write_vad_labels(path: str | Path, labels: dict[str, np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for utt_id in sorted(labels):
            bits = "".join(str(int(v)) for v in labels[utt_id])
            f.write(f"{utt_id}\t{bits}\n")
