"""Word tokenization and part-of-speech providers.

The extended tagset carries morphology (gender, number, finiteness) as a
suffix, e.g. NOUN-MS or ADJ-FP; the shipped mapping table collapses it to
coarse tags. Two providers are included: one backed by a pre-computed tag
file (stand-in for an external neural tagger) and a unigram lexicon tagger
for hermetic runs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Protocol, runtime_checkable

from .errors import ParseError, ProviderUnavailable
from .phonemes import _data_path

# Words keep internal apostrophes only when the apostrophe ends an elided
# clitic (l', n', d' ...); other punctuation becomes its own token.
_TOKEN_RE = re.compile(r"\w+'|\w+|[^\w\s]", re.UNICODE)

_SENTENCE_FINAL = frozenset(".!?")

COARSE_TAGS = frozenset({
    "NOUN", "PROPN", "VERB", "AUX", "ADJ", "ADV", "DET", "PRON",
    "PREP", "CONJ", "NUM", "INTJ", "PUNCT", "X",
})


def tokenize_words(text: str) -> list[str]:
    """Split cleaned text into word and punctuation tokens."""
    return _TOKEN_RE.findall(text)


def split_sentences(tokens: Iterable[str]) -> list[list[str]]:
    """Group a token stream into sentences at final punctuation."""
    sentences: list[list[str]] = []
    current: list[str] = []
    for token in tokens:
        current.append(token)
        if token in _SENTENCE_FINAL:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


class TagMap:
    """Extended-to-coarse tag mapping loaded from the shipped table."""

    def __init__(self, mapping: dict[str, str]):
        self._mapping = dict(mapping)

    @classmethod
    def from_file(cls, path: str | Path) -> "TagMap":
        mapping: dict[str, str] = {}
        for lineno, line in enumerate(
                Path(path).read_text(encoding="utf-8").splitlines(), start=1):
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected extended<TAB>coarse", line=lineno)
            if parts[1] not in COARSE_TAGS:
                raise ParseError(f"unknown coarse tag {parts[1]!r}", line=lineno)
            mapping[parts[0]] = parts[1]
        return cls(mapping)

    def coarse_of(self, extended: str) -> str:
        tag = self._mapping.get(extended)
        if tag is not None:
            return tag
        # Morphology suffixes hang off the coarse tag with a dash.
        head = extended.split("-", 1)[0]
        return head if head in COARSE_TAGS else "X"


@lru_cache(maxsize=1)
def default_tag_map() -> TagMap:
    return TagMap.from_file(_data_path("tag_coarse_map.tsv"))


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    extended_tag: str
    coarse_tag: str
    sentence_index: int = 0
    token_index: int = 0


@runtime_checkable
class PosProvider(Protocol):
    """Emits exactly one extended tag per input token, deterministically."""

    name: str

    def tag_sentence(self, tokens: list[str]) -> list[str]:
        ...


class FilePosProvider:
    """Pre-computed tags read from a file, keyed by the token sequence.

    File format: one `token<TAB>extended_tag` line per token, sentences
    separated by blank lines.
    """

    def __init__(self, blocks: dict[tuple[str, ...], list[str]]):
        self.name = "tagfile"
        self._blocks = blocks

    @classmethod
    def from_file(cls, path: str | Path) -> "FilePosProvider":
        blocks: dict[tuple[str, ...], list[str]] = {}
        tokens: list[str] = []
        tags: list[str] = []
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        for lineno, line in enumerate(lines + [""], start=1):
            if not line:
                if tokens:
                    blocks[tuple(tokens)] = tags
                    tokens, tags = [], []
                continue
            if line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected token<TAB>extended_tag", line=lineno)
            tokens.append(parts[0])
            tags.append(parts[1])
        return cls(blocks)

    def tag_sentence(self, tokens: list[str]) -> list[str]:
        tags = self._blocks.get(tuple(tokens))
        if tags is None:
            raise ProviderUnavailable(
                f"no pre-computed tags for sentence {' '.join(tokens)!r}")
        return list(tags)


class UnigramTagger:
    """Most-frequent-tag lexicon tagger; punctuation and digits get fixed tags."""

    def __init__(self, lexicon: dict[str, str], unknown_tag: str = "X"):
        self.name = "unigram"
        self.unknown_tag = unknown_tag
        self._lexicon = {k.lower(): v for k, v in lexicon.items()}

    @classmethod
    def from_file(cls, path: str | Path, unknown_tag: str = "X") -> "UnigramTagger":
        lexicon: dict[str, str] = {}
        for lineno, line in enumerate(
                Path(path).read_text(encoding="utf-8").splitlines(), start=1):
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected word<TAB>extended_tag", line=lineno)
            lexicon[parts[0]] = parts[1]
        return cls(lexicon)

    def tag_sentence(self, tokens: list[str]) -> list[str]:
        tags = []
        for token in tokens:
            if not token[0].isalnum() and token[0] != "'":
                tags.append("PUNCT")
            elif token.isdigit():
                tags.append("NUM")
            else:
                tags.append(self._lexicon.get(token.lower(), self.unknown_tag))
        return tags


@lru_cache(maxsize=1)
def default_unigram_tagger() -> UnigramTagger:
    return UnigramTagger.from_file(_data_path("unigram_tags.tsv"))


def tag_text(
    text: str,
    provider: PosProvider,
    tag_map: TagMap | None = None,
) -> list[list[TaggedToken]]:
    """Tokenize, sentence-split and tag text; one token list per sentence."""
    tag_map = tag_map or default_tag_map()
    sentences = split_sentences(tokenize_words(text))
    tagged: list[list[TaggedToken]] = []
    for s_idx, sentence in enumerate(sentences):
        tags = provider.tag_sentence(sentence)
        if len(tags) != len(sentence):
            raise ProviderUnavailable(
                f"{provider.name} returned {len(tags)} tags for "
                f"{len(sentence)} tokens")
        tagged.append([
            TaggedToken(surface, tag, tag_map.coarse_of(tag), s_idx, t_idx)
            for t_idx, (surface, tag) in enumerate(zip(sentence, tags))
        ])
    return tagged
