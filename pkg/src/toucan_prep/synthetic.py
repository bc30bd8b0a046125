"""Synthetic test corpus: audio, posteriograms and a manifest.

Builds a small deterministic corpus from the shipped sentence list: each
phoneme token gets a duration, voiced tokens are rendered as harmonic
tones, voiceless ones as noise bursts and silences as zeros, and a peaked
posteriogram is written around the ground-truth path. This gives the full
pipeline something real to chew on without any external model.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from . import alignment, audio_io, corpus
from .frontend import phonemize_with_homographs
from .homographs import default_dictionary
from .phonemes import _data_path, default_feature_table, tokenize_ipa
from .providers import LexiconProvider
from .tagging import default_unigram_tagger

SAMPLE_RATE = 16000
HOP = 256


def _read_sentences() -> list[tuple[str, str]]:
    rows = []
    with open(_data_path("smoke/sentences.tsv"), encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            utt_id, text = line.split("\t")
            rows.append((utt_id, text))
    return rows


def _render_token(symbol: str, is_silence: bool, n_samples: int,
                  f0: float, voiced: bool, rng: np.random.Generator) -> np.ndarray:
    if is_silence:
        return np.zeros(n_samples)
    t = np.arange(n_samples) / SAMPLE_RATE
    if voiced:
        wave = (0.6 * np.sin(2 * np.pi * f0 * t)
                + 0.3 * np.sin(2 * np.pi * 2 * f0 * t)
                + 0.1 * np.sin(2 * np.pi * 3 * f0 * t))
        return 0.25 * wave
    return 0.15 * rng.standard_normal(n_samples)


def build_corpus(dest: str | Path, seed: int = 0) -> dict[str, Path]:
    """Write WAVs, posteriograms and a starting manifest under `dest`."""
    dest = Path(dest)
    audio_dir = dest / "audio"
    post_dir = dest / "posteriograms"
    audio_dir.mkdir(parents=True, exist_ok=True)
    post_dir.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(seed)
    g2p = LexiconProvider.from_file(_data_path("smoke/lexicon.tsv"))
    tagger = default_unigram_tagger()
    dictionary = default_dictionary()
    table = default_feature_table()
    unvoiced = table.unvoiced_symbols()

    sentences = _read_sentences()
    class_symbols = sorted({
        token.symbol
        for _, text in sentences
        for token in tokenize_ipa(
            phonemize_with_homographs(text, g2p, tagger, dictionary))
    })
    class_index = {s: i for i, s in enumerate(class_symbols)}

    records = []
    for utt_id, text in sentences:
        ipa = phonemize_with_homographs(text, g2p, tagger, dictionary)
        tokens = tokenize_ipa(ipa)
        durations = [
            int(rng.integers(4, 9)) if t.is_silence else int(rng.integers(3, 11))
            for t in tokens
        ]
        f0 = float(rng.uniform(160.0, 280.0))

        pieces = [
            _render_token(t.symbol, t.is_silence, d * HOP, f0,
                          t.symbol not in unvoiced, rng)
            for t, d in zip(tokens, durations)
        ]
        audio = np.concatenate(pieces)[:-HOP]  # length (sum(d) - 1) * HOP
        wav_path = audio_dir / f"{utt_id}.wav"
        audio_io.write_wav(wav_path, audio, SAMPLE_RATE)

        post = alignment.synthetic_posteriogram(
            durations, [class_index[t.symbol] for t in tokens], class_symbols,
            hop_seconds=HOP / SAMPLE_RATE, peak=0.85, noise=0.2, rng=rng)
        alignment.write_posteriogram(post_dir / f"{utt_id}.pgrm", post)

        records.append(corpus.UtteranceRecord(
            utt_id=utt_id,
            audio_path=str(wav_path),
            start=0.0,
            end=len(audio) / SAMPLE_RATE,
            transcript=text,
        ))

    manifest = dest / "manifest.jsonl"
    corpus.write_manifest(manifest, records)

    config = dest / "config.toml"
    lexicon = str(_data_path("smoke/lexicon.tsv")).replace("\\", "/")
    config.write_text(
        f'g2p_lexicon = "{lexicon}"\n'
        f"sample_rate = {SAMPLE_RATE}\n"
        f"hop_length = {HOP}\n",
        encoding="utf-8")
    return {
        "manifest": manifest,
        "audio": audio_dir,
        "posteriograms": post_dir,
        "config": config,
    }
