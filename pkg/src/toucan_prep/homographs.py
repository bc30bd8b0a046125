"""French homograph detection and pronunciation selection.

Resolution is a fixed cascade: dictionary lookup, the dedicated grammar
rules for `plus`, a unique coarse-tag match, an extended-tag match, then
the entry's default pronunciation. The word `plus` gets its own rule set
because its three pronunciations depend on negation context and on the
liaison with the following word rather than on its own tag.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path

from .errors import (
    DuplicateGrapheme,
    EmptyGoldSet,
    InvariantViolation,
    ParseError,
)
from .phonemes import _data_path
from .tagging import PosProvider, TaggedToken, TagMap, default_tag_map, tag_text

# Tokens that put `plus` in a negative context when they precede it within
# the same clause.
NEGATION_CUES = frozenset({
    "ne", "n'", "non", "sans", "aucun", "aucune", "jamais", "rien", "personne",
})

# Punctuation that closes a clause for the negation scan.
CLAUSE_DELIMITERS = frozenset({",", ";", ":", "(", ")", ".", "!", "?", "-"})

_VOWEL_LETTERS = frozenset("aàâäeéèêëiîïoôöuùûüœæ")

PRON_PLUS_NEG = "ply"
PRON_PLUS_DEFAULT = "plys"
PRON_PLUS_LIAISON = "plyz"


class Method(Enum):
    NOT_HOMOGRAPH = "not_homograph"
    COARSE_MATCH = "coarse_match"
    EXTENDED_MATCH = "extended_match"
    DEFAULT_FALLBACK = "default_fallback"
    PLUS_RULE = "plus_rule"


@dataclass(frozen=True)
class Resolution:
    pronunciation: str | None
    method: Method


@dataclass(frozen=True)
class Candidate:
    ipa: str
    coarse_pos: str
    extended_pos: str | None = None


@dataclass(frozen=True)
class HomographEntry:
    grapheme: str
    candidates: tuple[Candidate, ...]
    default_index: int

    def __post_init__(self):
        if not self.candidates:
            raise InvariantViolation(f"{self.grapheme!r}: empty candidate list")
        if not 0 <= self.default_index < len(self.candidates):
            raise InvariantViolation(f"{self.grapheme!r}: default index out of range")
        pairs = [(c.coarse_pos, c.extended_pos) for c in self.candidates]
        if len(set(pairs)) != len(pairs):
            raise InvariantViolation(f"{self.grapheme!r}: duplicate tag pair")

    @property
    def default(self) -> Candidate:
        return self.candidates[self.default_index]


class HomographDictionary:
    def __init__(self, entries: dict[str, HomographEntry]):
        self._entries = dict(entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, grapheme: str) -> bool:
        return grapheme.lower() in self._entries

    def get(self, grapheme: str) -> HomographEntry | None:
        return self._entries.get(grapheme.lower())


def load_dictionary(path: str | Path) -> HomographDictionary:
    """Load a homograph dictionary from JSONL.

    One object per line: {"grapheme": ..., "candidates":
    [{"ipa": ..., "coarse": ..., "extended": ...}], "default": 0}.
    """
    entries: dict[str, HomographEntry] = {}
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        try:
            grapheme = obj["grapheme"].lower()
            candidates = tuple(
                Candidate(c["ipa"], c["coarse"], c.get("extended"))
                for c in obj["candidates"]
            )
            default = obj.get("default", 0)
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"bad entry structure: {exc}", line=lineno) from exc
        if grapheme in entries:
            raise DuplicateGrapheme(f"{grapheme!r} defined twice (line {lineno})")
        entries[grapheme] = HomographEntry(grapheme, candidates, default)
    return HomographDictionary(entries)


@lru_cache(maxsize=1)
def default_dictionary() -> HomographDictionary:
    return load_dictionary(_data_path("homographs.jsonl"))


@lru_cache(maxsize=1)
def default_h_aspire() -> frozenset[str]:
    words = set()
    for line in _data_path("h_aspire.txt").read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def starts_with_vowel_sound(word: str, h_aspire: frozenset[str] | None = None) -> bool:
    """Phonetic vowel-initial test driving the liaison decision.

    Mute-h words count as vowel-initial unless listed in the aspirated-h
    exception file; y-initial words behave as consonants (no liaison).
    """
    if not word:
        return False
    h_aspire = h_aspire if h_aspire is not None else default_h_aspire()
    first = word[0].lower()
    if first == "h":
        return word.lower() not in h_aspire
    return first in _VOWEL_LETTERS


def resolve_plus(
    sentence: list[TaggedToken],
    position: int,
    h_aspire: frozenset[str] | None = None,
) -> Resolution:
    """Grammar-rule cascade for `plus`; exactly one rule fires.

    (a) negation cue earlier in the clause: "ply"; else (b) following
    adjective/adverb starting with a consonant sound: "ply"; (c) following
    adjective/adverb starting with a vowel sound: "plyz" (liaison);
    (d) otherwise "plys".
    """
    if sentence[position].surface.lower() != "plus":
        raise ValueError("resolve_plus called on a token that is not 'plus'")
    for earlier in reversed(sentence[:position]):
        if earlier.surface in CLAUSE_DELIMITERS:
            break
        if earlier.surface.lower() in NEGATION_CUES:
            return Resolution(PRON_PLUS_NEG, Method.PLUS_RULE)
    if position + 1 < len(sentence):
        following = sentence[position + 1]
        if following.coarse_tag in ("ADJ", "ADV"):
            if starts_with_vowel_sound(following.surface, h_aspire):
                return Resolution(PRON_PLUS_LIAISON, Method.PLUS_RULE)
            return Resolution(PRON_PLUS_NEG, Method.PLUS_RULE)
    return Resolution(PRON_PLUS_DEFAULT, Method.PLUS_RULE)


def resolve(
    token: TaggedToken,
    dictionary: HomographDictionary,
    sentence: list[TaggedToken] | None = None,
    h_aspire: frozenset[str] | None = None,
) -> Resolution:
    """Select a pronunciation for one tagged token.

    Total over tagged tokens: words outside the dictionary come back as
    NOT_HOMOGRAPH, everything else always gets a pronunciation.
    """
    entry = dictionary.get(token.surface)
    if entry is None:
        return Resolution(None, Method.NOT_HOMOGRAPH)
    if token.surface.lower() == "plus":
        context = sentence if sentence is not None else [token]
        position = token.token_index if sentence is not None else 0
        return resolve_plus(context, position, h_aspire)
    coarse_hits = [c for c in entry.candidates if c.coarse_pos == token.coarse_tag]
    if len(coarse_hits) == 1:
        return Resolution(coarse_hits[0].ipa, Method.COARSE_MATCH)
    extended_hits = [
        c for c in entry.candidates
        if c.extended_pos is not None and c.extended_pos == token.extended_tag
    ]
    if extended_hits:
        return Resolution(extended_hits[0].ipa, Method.EXTENDED_MATCH)
    return Resolution(entry.default.ipa, Method.DEFAULT_FALLBACK)


@dataclass(frozen=True)
class Annotation:
    sentence_index: int
    token_index: int
    surface: str
    resolution: Resolution


def annotate_text(
    text: str,
    provider: PosProvider,
    dictionary: HomographDictionary,
    tag_map: TagMap | None = None,
) -> list[Annotation]:
    """One record per homograph occurrence, in reading order."""
    annotations = []
    for sentence in tag_text(text, provider, tag_map):
        for token in sentence:
            resolution = resolve(token, dictionary, sentence)
            if resolution.method is not Method.NOT_HOMOGRAPH:
                annotations.append(Annotation(
                    token.sentence_index, token.token_index,
                    token.surface, resolution))
    return annotations


@dataclass(frozen=True)
class GoldItem:
    sentence: str
    token_index: int
    pronunciation: str


def load_gold_set(path: str | Path) -> list[GoldItem]:
    """Gold file rows: sentence<TAB>token_index<TAB>ipa."""
    items = []
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("expected sentence<TAB>token_index<TAB>ipa", line=lineno)
        try:
            index = int(parts[1])
        except ValueError:
            raise ParseError(f"bad token index {parts[1]!r}", line=lineno) from None
        items.append(GoldItem(parts[0], index, parts[2]))
    return items


def evaluate_accuracy(
    gold: list[GoldItem],
    provider: PosProvider,
    dictionary: HomographDictionary,
    tag_map: TagMap | None = None,
) -> dict:
    """Exact-match accuracy over gold items with a per-method breakdown."""
    if not gold:
        raise EmptyGoldSet("gold set contains no items")
    tag_map = tag_map or default_tag_map()
    correct = 0
    by_method: dict[str, dict[str, int]] = {}
    for item in gold:
        sentences = tag_text(item.sentence, provider, tag_map)
        tokens = [t for sentence in sentences for t in sentence]
        token = tokens[item.token_index]
        sentence = sentences[token.sentence_index]
        resolution = resolve(token, dictionary, sentence)
        stats = by_method.setdefault(
            resolution.method.value, {"correct": 0, "wrong": 0})
        if resolution.pronunciation == item.pronunciation:
            correct += 1
            stats["correct"] += 1
        else:
            stats["wrong"] += 1
    return {
        "accuracy": correct / len(gold),
        "total": len(gold),
        "correct": correct,
        "by_method": by_method,
    }
