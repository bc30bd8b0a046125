"""Corpus-level preparation: manifests, splitting, joining, marker
validation and loss-ranked cleaning.

An UtteranceRecord row ties an audio span to its transcript and any
features computed so far; manifests are JSONL with a stable field order so
repeated runs are byte-identical.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    LengthMismatch,
    OverlappingSpans,
    ParseError,
    SpanOutOfBounds,
    TooFewSamples,
    ValidationError,
)
from .phonemes import SILENCE_PUNCTUATION, PhonemeToken

# Heuristic pause markers validated against silence evidence.
PAUSE_MARKERS = frozenset({",", ";", "-", '"'})

JOIN_PAUSE_SECONDS = 0.22
JOIN_MAX_SECONDS = 15.0

# Serialization order for manifest rows.
_FIELDS = (
    "utt_id", "audio_path", "start", "end", "transcript", "phonemes",
    "durations", "pitch", "energy", "loudness_lufs", "is_joint",
    "source_ids", "enhanced",
)


@dataclass
class UtteranceRecord:
    utt_id: str
    audio_path: str
    start: float
    end: float
    transcript: str
    phonemes: str | None = None
    durations: list[int] | None = None
    pitch: list[float] | None = None
    energy: list[float] | None = None
    loudness_lufs: float | None = None
    is_joint: bool = False
    source_ids: list[str] | None = None
    enhanced: bool = False

    def __post_init__(self):
        if self.end <= self.start:
            raise ValidationError(
                f"{self.utt_id}: end {self.end} must exceed start {self.start}")
        if self.is_joint and (self.source_ids is None or len(self.source_ids) < 2):
            raise ValidationError(
                f"{self.utt_id}: joint records need at least 2 source ids")

    @property
    def duration(self) -> float:
        return self.end - self.start

    def to_dict(self) -> dict:
        out = {}
        for name in _FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            if name in ("is_joint", "enhanced") and value is False:
                continue
            out[name] = value
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "UtteranceRecord":
        known = {k: v for k, v in obj.items() if k in _FIELDS}
        return cls(**known)


def read_manifest(path: str | Path) -> list[UtteranceRecord]:
    records = []
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(UtteranceRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, TypeError) as exc:
            raise ParseError(f"bad manifest row: {exc}", line=lineno) from exc
    return records


def write_manifest(path: str | Path, records: list[UtteranceRecord]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


# --- splitting and joining ---

def split_chapters(
    spans: list[tuple[float, float, str]],
    paragraph_breaks: set[int],
    audio_duration: float,
    audio_path: str,
    prefix: str = "utt",
) -> list[UtteranceRecord]:
    """Group aligned spans into paragraph-bounded utterance records.

    `paragraph_breaks` holds span indices after which a paragraph ends.
    Without any break information the conservative output is one record
    per span. Spans must be sorted, non-overlapping and inside the audio.
    """
    previous_end = 0.0
    for i, (start, end, _) in enumerate(spans):
        if start < 0.0 or end > audio_duration:
            raise SpanOutOfBounds(
                f"span {i} [{start}, {end}] outside audio of {audio_duration} s")
        if end <= start:
            raise SpanOutOfBounds(f"span {i} has non-positive length")
        if start < previous_end:
            raise OverlappingSpans(f"span {i} starts before span {i - 1} ends")
        previous_end = end

    records = []
    group: list[tuple[float, float, str]] = []

    def flush():
        if not group:
            return
        records.append(UtteranceRecord(
            utt_id=f"{prefix}_{len(records):04d}",
            audio_path=audio_path,
            start=group[0][0],
            end=group[-1][1],
            transcript=" ".join(text for _, _, text in group),
        ))
        group.clear()

    for i, span in enumerate(spans):
        group.append(span)
        if i in paragraph_breaks or not paragraph_breaks:
            flush()
    flush()
    return records


def make_joint_utterances(
    records: list[UtteranceRecord],
    pause_seconds: float = JOIN_PAUSE_SECONDS,
    max_total_seconds: float = JOIN_MAX_SECONDS,
) -> list[UtteranceRecord]:
    """Greedy forward concatenation under the duration cap.

    From every starting utterance, consecutive successors are appended
    while the running total (including one inserted pause per boundary)
    stays within the cap; a joint is emitted only when at least two
    utterances fit.
    """
    joints = []
    for i, start_record in enumerate(records):
        total = start_record.duration
        members = [start_record]
        for successor in records[i + 1:]:
            extended = total + pause_seconds + successor.duration
            if extended > max_total_seconds:
                break
            total = extended
            members.append(successor)
        if len(members) < 2:
            continue
        joints.append(UtteranceRecord(
            utt_id=f"joint_{start_record.utt_id}",
            audio_path=start_record.audio_path,
            start=0.0,
            end=total,
            transcript=" ".join(m.transcript for m in members),
            is_joint=True,
            source_ids=[m.utt_id for m in members],
        ))
    return joints


def concat_with_pauses(
    segments: list[np.ndarray],
    sample_rate: int,
    pause_seconds: float = JOIN_PAUSE_SECONDS,
) -> np.ndarray:
    """Concatenate audio parts with a fixed silence between them."""
    if not segments:
        raise ValidationError("need at least one segment")
    gap = np.zeros(int(round(pause_seconds * sample_rate)))
    pieces = []
    for k, segment in enumerate(segments):
        if k:
            pieces.append(gap)
        pieces.append(np.asarray(segment, dtype=np.float64))
    return np.concatenate(pieces)


# --- pause marker validation ---

@dataclass(frozen=True)
class MarkerDecision:
    char_index: int
    marker: str
    kept: bool
    duration_frames: int
    nonspeech_fraction: float


def validate_pause_markers(
    transcript: str,
    durations: list[int],
    tokens: list[PhonemeToken],
    vad_labels: np.ndarray,
    min_sil_frames: int = 5,
    markers: frozenset[str] = PAUSE_MARKERS,
) -> tuple[str, list[MarkerDecision]]:
    """Delete pause markers that have no silence evidence.

    A marker stays when its silence token got at least `min_sil_frames`
    aligner frames AND at least half of the overlapped VAD labels are
    non-speech. Punctuation in the transcript must correspond in order to
    the silence tokens of the token stream (which the IPA tokenizer
    guarantees: one silence token per punctuation character).
    """
    if len(durations) != len(tokens):
        raise LengthMismatch(f"{len(durations)} durations for {len(tokens)} tokens")
    vad_labels = np.asarray(vad_labels)
    if int(sum(durations)) != len(vad_labels):
        raise LengthMismatch(
            f"durations cover {sum(durations)} frames, VAD has {len(vad_labels)}")

    spans = []
    start = 0
    for token, dur in zip(tokens, durations):
        if token.is_silence:
            spans.append((start, start + dur))
        start += dur
    punct_positions = [i for i, ch in enumerate(transcript)
                       if ch in SILENCE_PUNCTUATION]
    if len(punct_positions) != len(spans):
        raise LengthMismatch(
            f"{len(punct_positions)} punctuation characters but "
            f"{len(spans)} silence tokens")

    decisions = []
    delete = set()
    for (lo, hi), char_index in zip(spans, punct_positions):
        marker = transcript[char_index]
        if marker not in markers:
            continue
        dur = hi - lo
        if dur > 0:
            nonspeech = float(np.mean(vad_labels[lo:hi] == 0))
        else:
            nonspeech = 0.0
        kept = dur >= min_sil_frames and nonspeech >= 0.5
        if not kept:
            delete.add(char_index)
        decisions.append(MarkerDecision(char_index, marker, kept, dur, nonspeech))

    pruned = "".join(ch for i, ch in enumerate(transcript) if i not in delete)
    return pruned, decisions


# --- loss-ranked cleaning ---

@dataclass(frozen=True)
class CleaningReport:
    removed_ids: tuple[str, ...]
    kept_count: int
    threshold_trace: tuple[tuple[float, float], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "removed_ids": list(self.removed_ids),
            "kept_count": self.kept_count,
            "threshold_trace": [list(t) for t in self.threshold_trace],
        }


def clean_by_loss(losses: dict[str, float], threshold: float = 0.1) -> CleaningReport:
    """Remove top-loss samples until the ranking flattens out.

    The current highest loss is dropped while it exceeds the mean of the
    next ten losses by more than `threshold`; evaluation stops when fewer
    than eleven samples remain.
    """
    if len(losses) < 11:
        raise TooFewSamples(f"cleaning needs at least 11 samples, got {len(losses)}")
    ranked = sorted(losses.items(), key=lambda kv: (-kv[1], kv[0]))
    removed = []
    trace = []
    while len(ranked) >= 11:
        top_id, top_loss = ranked[0]
        next_mean = float(np.mean([loss for _, loss in ranked[1:11]]))
        trace.append((top_loss, next_mean))
        if top_loss - next_mean > threshold:
            removed.append(top_id)
            ranked.pop(0)
        else:
            break
    return CleaningReport(tuple(removed), len(ranked), tuple(trace))


def read_loss_file(path: str | Path) -> dict[str, float]:
    """Loss file rows: utt_id<TAB>loss."""
    losses: dict[str, float] = {}
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("expected utt_id<TAB>loss", line=lineno)
        try:
            losses[parts[0]] = float(parts[1])
        except ValueError:
            raise ParseError(f"bad loss value {parts[1]!r}", line=lineno) from None
    return losses
