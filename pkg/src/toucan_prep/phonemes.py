"""IPA token stream handling and articulatory vector encoding.

A phonemizer emits an IPA string containing base segments, nonsegmental
modifier marks (stress, length, tone) and punctuation. :func:`tokenize_ipa`
folds the modifiers into their neighbouring segments per the direction
table (stress attaches forward, length and tone attach backward) and turns
punctuation into silence tokens. :func:`vectorize` then maps every token to
a fixed-width binary vector through the shipped feature table.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, UnknownSymbol

# Canonical symbol for pauses; the feature table marks it silence-only.
SILENCE_SYMBOL = "~"

# Punctuation that becomes a silence token in the phoneme stream. One token
# is emitted per character so downstream marker validation can match
# transcript punctuation to silence tokens by order.
SILENCE_PUNCTUATION = frozenset(",;:.!?-\"()")

# Vector layout. The order is part of the on-disk table contract: changing
# it invalidates any stored feature matrices.
FEATURE_ORDER = (
    # consonant place
    "bilabial", "labiodental", "dental", "alveolar", "postalveolar",
    "palatal", "velar", "uvular", "glottal", "labiopalatal", "labiovelar",
    # consonant manner
    "plosive", "nasal", "fricative", "approximant", "lateral", "trill", "tap",
    "voiced",
    # vowel height
    "close", "close_mid", "mid", "open_mid", "open",
    # vowel backness
    "front", "central", "back",
    "rounded",
    "nasalized",
    "silence",
    # nonsegmental flags
    "stress", "lengthened", "shortened",
    "tone1", "tone2", "tone3", "tone4", "tone5",
)
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_ORDER)}
VECTOR_SIZE = len(FEATURE_ORDER)

_PLACES = FEATURE_ORDER[0:11]
_MANNERS = FEATURE_ORDER[11:18]
_HEIGHTS = FEATURE_ORDER[19:24]
_BACKNESS = FEATURE_ORDER[24:27]


class Tone(Enum):
    NONE = 0
    LEVEL1 = 1
    LEVEL2 = 2
    LEVEL3 = 3
    LEVEL4 = 4
    LEVEL5 = 5


@dataclass(frozen=True)
class PhonemeToken:
    """One IPA segment plus its attached nonsegmental modifier flags."""

    symbol: str
    stress: bool = False
    lengthened: bool = False
    shortened: bool = False
    tone: Tone = Tone.NONE
    is_silence: bool = False
    word_index: int = 0

    def __post_init__(self):
        if self.lengthened and self.shortened:
            raise ValueError("token cannot be both lengthened and shortened")
        if self.is_silence and (
            self.stress or self.lengthened or self.shortened
            or self.tone is not Tone.NONE
        ):
            raise ValueError("silence tokens carry no modifier flags")

    @staticmethod
    def silence(word_index: int = 0) -> "PhonemeToken":
        return PhonemeToken(SILENCE_SYMBOL, is_silence=True, word_index=word_index)


class FeatureTable:
    """Immutable symbol-to-feature lookup loaded from the TSV table."""

    def __init__(self, rows: dict[str, frozenset[str]]):
        self._rows = dict(rows)
        for symbol, feats in self._rows.items():
            self._check_row(symbol, feats)

    @staticmethod
    def _check_row(symbol: str, feats: frozenset[str]) -> None:
        unknown = feats.difference(FEATURE_ORDER)
        if unknown:
            raise ParseError(f"unknown feature(s) {sorted(unknown)} for {symbol!r}")
        if "silence" in feats:
            if len(feats) != 1:
                raise ParseError(f"silence row {symbol!r} must carry only the silence flag")
            return
        n_place = sum(f in feats for f in _PLACES)
        n_manner = sum(f in feats for f in _MANNERS)
        n_height = sum(f in feats for f in _HEIGHTS)
        n_back = sum(f in feats for f in _BACKNESS)
        if n_manner or n_place:
            if not (n_place == 1 and n_manner == 1 and n_height == 0 and n_back == 0):
                raise ParseError(f"consonant row {symbol!r} needs exactly one place and one manner")
        else:
            if not (n_height == 1 and n_back == 1):
                raise ParseError(f"vowel row {symbol!r} needs exactly one height and one backness")

    @classmethod
    def from_file(cls, path: str | Path) -> "FeatureTable":
        rows: dict[str, frozenset[str]] = {}
        text = Path(path).read_text(encoding="utf-8")
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected symbol<TAB>features", line=lineno)
            symbol, featspec = parts
            feats = set()
            for item in featspec.split(","):
                name, _, value = item.partition("=")
                if value != "1":
                    raise ParseError(f"feature {item!r} must be name=1", line=lineno)
                feats.add(name)
            if symbol in rows:
                raise ParseError(f"duplicate symbol {symbol!r}", line=lineno)
            rows[symbol] = frozenset(feats)
        return cls(rows)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._rows

    def __len__(self) -> int:
        return len(self._rows)

    def features(self, symbol: str) -> frozenset[str]:
        try:
            return self._rows[symbol]
        except KeyError:
            raise UnknownSymbol(symbol) from None

    def symbols(self) -> list[str]:
        return sorted(self._rows)

    def unvoiced_symbols(self) -> frozenset[str]:
        """Voiceless consonant symbols (pitch is meaningless for them)."""
        out = set()
        for symbol, feats in self._rows.items():
            if any(m in feats for m in _MANNERS) and "voiced" not in feats:
                out.add(symbol)
        return frozenset(out)

    def vectorize(self, tokens: Sequence[PhonemeToken]) -> np.ndarray:
        """Encode tokens as a (len(tokens), VECTOR_SIZE) binary matrix."""
        out = np.zeros((len(tokens), VECTOR_SIZE), dtype=np.uint8)
        for i, token in enumerate(tokens):
            if token.is_silence:
                out[i, FEATURE_INDEX["silence"]] = 1
                continue
            for feat in self.features(token.symbol):
                out[i, FEATURE_INDEX[feat]] = 1
            if token.stress:
                out[i, FEATURE_INDEX["stress"]] = 1
            if token.lengthened:
                out[i, FEATURE_INDEX["lengthened"]] = 1
            if token.shortened:
                out[i, FEATURE_INDEX["shortened"]] = 1
            if token.tone is not Tone.NONE:
                out[i, FEATURE_INDEX[f"tone{token.tone.value}"]] = 1
        return out


class ModifierTable:
    """Maps modifier characters to (flag, attachment direction)."""

    _FLAGS = ("stress", "lengthened", "shortened",
              "tone1", "tone2", "tone3", "tone4", "tone5")

    def __init__(self, rows: dict[str, tuple[str, str]]):
        for symbol, (flag, direction) in rows.items():
            if flag not in self._FLAGS:
                raise ParseError(f"unknown modifier flag {flag!r} for {symbol!r}")
            if direction not in ("prev", "next"):
                raise ParseError(f"direction must be prev or next, got {direction!r}")
        self._rows = dict(rows)

    @classmethod
    def from_file(cls, path: str | Path) -> "ModifierTable":
        rows: dict[str, tuple[str, str]] = {}
        text = Path(path).read_text(encoding="utf-8")
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected symbol<TAB>flag<TAB>direction", line=lineno)
            rows[parts[0]] = (parts[1], parts[2])
        return cls(rows)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._rows

    def lookup(self, symbol: str) -> tuple[str, str]:
        return self._rows[symbol]


def _data_path(name: str) -> Path:
    return Path(str(resources.files("toucan_prep.data").joinpath(name)))


@lru_cache(maxsize=1)
def default_feature_table() -> FeatureTable:
    return FeatureTable.from_file(_data_path("articulatory_features.tsv"))


@lru_cache(maxsize=1)
def default_modifier_table() -> ModifierTable:
    return ModifierTable.from_file(_data_path("ipa_modifiers.tsv"))


def _apply_flag(token: PhonemeToken, flag: str) -> PhonemeToken:
    if flag == "stress":
        return replace(token, stress=True)
    if flag == "lengthened":
        return replace(token, lengthened=True, shortened=False)
    if flag == "shortened":
        return replace(token, shortened=True, lengthened=False)
    return replace(token, tone=Tone(int(flag[-1])))


def tokenize_ipa(
    ipa: str,
    table: FeatureTable | None = None,
    modifiers: ModifierTable | None = None,
) -> list[PhonemeToken]:
    """Split an IPA string into tokens with modifiers folded in.

    Stress marks flag the following segment, length and tone marks the
    preceding one. Punctuation becomes one silence token per character;
    spaces advance the word index. A modifier with no segment to attach to
    is dropped. Raises UnknownSymbol for characters absent from both tables.
    """
    table = table or default_feature_table()
    modifiers = modifiers or default_modifier_table()

    tokens: list[PhonemeToken] = []
    pending: list[str] = []  # next-attaching flags waiting for a segment
    word_index = 0
    # index of the last real segment; silence tokens never take modifiers
    last_segment = -1

    for pos, ch in enumerate(ipa):
        if ch == " ":
            if tokens and tokens[-1].word_index == word_index:
                word_index += 1
            continue
        if ch in modifiers:
            flag, direction = modifiers.lookup(ch)
            if direction == "next":
                pending.append(flag)
            elif last_segment >= 0:
                tokens[last_segment] = _apply_flag(tokens[last_segment], flag)
            continue
        if ch in SILENCE_PUNCTUATION:
            pending.clear()
            tokens.append(PhonemeToken.silence(word_index))
            continue
        if unicodedata.combining(ch):
            # Non-modifier combining mark: part of the previous base char.
            if last_segment < 0:
                raise UnknownSymbol(ch, pos)
            merged = tokens[last_segment].symbol + ch
            if merged not in table:
                raise UnknownSymbol(merged, pos)
            tokens[last_segment] = replace(tokens[last_segment], symbol=merged)
            continue
        if ch not in table:
            raise UnknownSymbol(ch, pos)
        token = PhonemeToken(ch, word_index=word_index)
        for flag in pending:
            token = _apply_flag(token, flag)
        pending.clear()
        tokens.append(token)
        last_segment = len(tokens) - 1
    return tokens


def vectorize(
    tokens: Iterable[PhonemeToken],
    table: FeatureTable | None = None,
) -> np.ndarray:
    """Articulatory vectors for a token sequence, one row per token."""
    table = table or default_feature_table()
    return table.vectorize(list(tokens))
