"""Phoneme-to-frame alignment decoding over acoustic posteriograms.

The posteriogram comes from an external recognizer; this module only
decodes paths. Monotonic alignment search assigns every frame to exactly
one phone, never skips a phone, and maximizes total log-likelihood. A
Dijkstra decoder with skip moves is kept alongside for A/B comparison: it
is allowed to produce zero-length phones, which is exactly the failure
mode the monotonic search exists to rule out.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from . import containers
from .errors import (
    EmptyCorpus,
    SymbolNotInModel,
    TooFewFrames,
    ValidationError,
)

# Probabilities below this are floored before entering the log domain.
PROB_FLOOR = 1e-12
LOG_FLOOR = float(np.log(PROB_FLOOR))


@dataclass
class Posteriogram:
    """T x C per-frame log-probabilities over phoneme classes."""

    values: np.ndarray
    hop_seconds: float
    class_symbols: list[str]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise ValidationError("posteriogram must be a non-empty T x C matrix")
        if len(self.class_symbols) != self.values.shape[1]:
            raise ValidationError(
                f"{len(self.class_symbols)} symbols for {self.values.shape[1]} classes")
        if self.hop_seconds <= 0:
            raise ValidationError("hop_seconds must be positive")
        residual = logsumexp(self.values, axis=1)
        if np.max(np.abs(residual)) > 1e-3:
            raise ValidationError("rows are not normalized log-distributions")

    @property
    def n_frames(self) -> int:
        return self.values.shape[0]

    @property
    def n_classes(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_probabilities(cls, probs, hop_seconds, class_symbols) -> "Posteriogram":
        probs = np.asarray(probs, dtype=np.float64)
        probs = probs / probs.sum(axis=1, keepdims=True)
        return cls(np.log(np.maximum(probs, PROB_FLOOR)), hop_seconds,
                   list(class_symbols))


@dataclass(frozen=True)
class AlignmentPath:
    durations: tuple[int, ...]
    score: float

    @property
    def n_frames(self) -> int:
        return sum(self.durations)


def _symbol_of(item) -> str:
    return item.symbol if hasattr(item, "symbol") else str(item)


def reorder(post: Posteriogram, transcript: Sequence) -> np.ndarray:
    """Select posteriogram columns in transcript order (T x N)."""
    index = {s: i for i, s in enumerate(post.class_symbols)}
    columns = []
    for item in transcript:
        symbol = _symbol_of(item)
        if symbol not in index:
            raise SymbolNotInModel(f"{symbol!r} not among posteriogram classes")
        columns.append(index[symbol])
    return post.values[:, columns]


def mas(scores: np.ndarray) -> AlignmentPath:
    """Monotonic alignment search over a T x N log-likelihood matrix.

    Every frame is assigned to exactly one phone, the phone index never
    decreases, and every phone covers at least one frame. Ties are broken
    toward the later transition, so a run of identical columns puts the
    extra frames on the earlier phone.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2:
        raise ValidationError("scores must be 2-D")
    n_frames, n_phones = scores.shape
    if n_phones < 1 or n_frames < 1:
        raise ValidationError("scores must be non-empty")
    if n_frames < n_phones:
        raise TooFewFrames(f"{n_frames} frames cannot cover {n_phones} phones")

    neg = -np.inf
    best = np.full((n_frames, n_phones), neg)
    best[0, 0] = scores[0, 0]
    for t in range(1, n_frames):
        prev = best[t - 1]
        advanced = np.empty(n_phones)
        advanced[0] = neg
        advanced[1:] = prev[:-1]
        best[t] = np.maximum(prev, advanced) + scores[t]

    durations = [0] * n_phones
    j = n_phones - 1
    durations[j] = 1
    for t in range(n_frames - 1, 0, -1):
        # >= prefers the diagonal move, i.e. the transition happens at t.
        if j > 0 and best[t - 1, j - 1] >= best[t - 1, j]:
            j -= 1
        durations[j] += 1
    return AlignmentPath(tuple(durations), float(best[-1, -1]))


def dijkstra_align(scores: np.ndarray) -> AlignmentPath:
    """Grid shortest path with skip moves; zero-length phones are legal.

    Nodes are (frame, phone) with entry cost -log p; moves advance one
    frame and zero or more phones. Kept for comparison against `mas` only.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2:
        raise ValidationError("scores must be 2-D")
    n_frames, n_phones = scores.shape
    if n_phones < 1 or n_frames < 1:
        raise ValidationError("scores must be non-empty")
    if n_phones > 1 and n_frames < 2:
        raise TooFewFrames("at least 2 frames needed to traverse several phones")

    cost = np.maximum(-scores, 0.0)
    start = (0, 0)
    goal = (n_frames - 1, n_phones - 1)
    dist = {start: cost[0, 0]}
    prev: dict[tuple[int, int], tuple[int, int]] = {}
    heap = [(cost[0, 0], start)]
    settled = set()
    while heap:
        d, node = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node == goal:
            break
        t, j = node
        if t + 1 >= n_frames:
            continue
        for nj in range(j, n_phones):
            cand = d + cost[t + 1, nj]
            nxt = (t + 1, nj)
            if cand < dist.get(nxt, np.inf):
                dist[nxt] = cand
                prev[nxt] = node
                heapq.heappush(heap, (cand, nxt))

    durations = [0] * n_phones
    node = goal
    score = 0.0
    while True:
        t, j = node
        durations[j] += 1
        score += scores[t, j]
        if node == start:
            break
        node = prev[node]
    return AlignmentPath(tuple(durations), float(score))


def compare_skip_rate(corpus: Iterable[np.ndarray]) -> dict:
    """Zero-duration statistics of both decoders over a corpus of matrices."""
    total_phones = 0
    mas_zero = 0
    dijkstra_zero = 0
    count = 0
    for scores in corpus:
        count += 1
        path_mas = mas(scores)
        path_dij = dijkstra_align(scores)
        total_phones += len(path_mas.durations)
        mas_zero += sum(d == 0 for d in path_mas.durations)
        dijkstra_zero += sum(d == 0 for d in path_dij.durations)
    if count == 0:
        raise EmptyCorpus("skip-rate comparison needs at least one matrix")
    return {
        "count": count,
        "mas_zero_rate": mas_zero / total_phones,
        "dijkstra_zero_rate": dijkstra_zero / total_phones,
    }


def durations_to_seconds(durations: Sequence[int], hop_seconds: float) -> list[float]:
    if hop_seconds <= 0:
        raise ValidationError("hop_seconds must be positive")
    return [d * hop_seconds for d in durations]


# --- synthetic posteriograms (test/demo corpus source) ---

def synthetic_posteriogram(
    durations: Sequence[int],
    class_indices: Sequence[int],
    class_symbols: Sequence[str],
    hop_seconds: float = 0.016,
    peak: float = 0.9,
    noise: float = 0.0,
    rng: np.random.Generator | None = None,
) -> Posteriogram:
    """Render a posteriogram around a known ground-truth path.

    Each frame puts probability `peak` on its true class and spreads the
    rest uniformly; `noise` perturbs the distribution multiplicatively
    before renormalization.
    """
    if len(durations) != len(class_indices):
        raise ValidationError("durations and class_indices must match")
    n_classes = len(class_symbols)
    frames = []
    for dur, cls in zip(durations, class_indices):
        row = np.full(n_classes, (1.0 - peak) / max(n_classes - 1, 1))
        row[cls] = peak if n_classes > 1 else 1.0
        frames.extend([row.copy() for _ in range(dur)])
    probs = np.asarray(frames)
    if noise > 0.0:
        rng = rng or np.random.default_rng(0)
        probs = probs * np.exp(noise * rng.standard_normal(probs.shape))
    return Posteriogram.from_probabilities(probs, hop_seconds, class_symbols)


def adversarial_scores(
    rng: np.random.Generator,
    n_frames: int,
    n_phones: int,
    dead_phone: int | None = None,
    peak: float = 0.9,
) -> np.ndarray:
    """Reordered score matrix with one phone nearly impossible everywhere.

    Exercises the decoder difference: a skip-capable search drops the dead
    phone, a monotonic search must give it a frame.
    """
    if n_phones < 3:
        raise ValidationError("need at least 3 phones to bury one mid-path")
    if dead_phone is None:
        dead_phone = int(rng.integers(1, n_phones - 1))
    live = [j for j in range(n_phones) if j != dead_phone]
    # Ground-truth path over the live phones only.
    cuts = np.sort(rng.choice(np.arange(1, n_frames), len(live) - 1, replace=False))
    bounds = np.concatenate(([0], cuts, [n_frames]))
    probs = np.full((n_frames, n_phones), PROB_FLOOR)
    for k, j in enumerate(live):
        probs[bounds[k]:bounds[k + 1], j] = peak
    off = (1.0 - peak) / max(n_phones - 2, 1)
    for j in live:
        probs[probs[:, j] == PROB_FLOOR, j] = off
    return np.log(np.maximum(probs, PROB_FLOOR))


# --- file plumbing ---

def write_posteriogram(path: str | Path, post: Posteriogram) -> None:
    containers.write_matrix(path, containers.MAGIC_POSTERIOGRAM,
                            post.values, post.hop_seconds, post.class_symbols)


def read_posteriogram(path: str | Path) -> Posteriogram:
    values, hop, symbols = containers.read_matrix(
        path, expect_magic=containers.MAGIC_POSTERIOGRAM)
    return Posteriogram(values, hop, symbols)
