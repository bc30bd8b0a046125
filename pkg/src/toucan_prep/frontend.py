"""Text-to-phoneme pipeline: cleaning, homograph-aware phonemization,
tokenization and vector encoding in one call path.

Homograph pronunciations are spliced at word granularity: the text is
tagged, flagged words take their resolved pronunciation, and every other
word goes through the G2P provider individually.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .homographs import HomographDictionary, Method, resolve
from .phonemes import (
    FeatureTable,
    ModifierTable,
    PhonemeToken,
    default_feature_table,
    default_modifier_table,
    tokenize_ipa,
    vectorize,
)
from .providers import G2pProvider
from .tagging import PosProvider, TagMap, tag_text
from .text import clean_text


def phonemize_with_homographs(
    text: str,
    g2p: G2pProvider,
    tagger: PosProvider,
    dictionary: HomographDictionary,
    language: str = "fr",
    tag_map: TagMap | None = None,
) -> str:
    """IPA for cleaned text with homograph pronunciations spliced in."""
    cleaned = clean_text(text)
    if not cleaned:
        return ""
    pieces: list[str] = []
    for sentence in tag_text(cleaned, tagger, tag_map):
        for token in sentence:
            if token.coarse_tag == "PUNCT" or (
                    not token.surface[0].isalnum() and token.surface[0] != "'"):
                pieces.append(token.surface)
                continue
            resolution = resolve(token, dictionary, sentence)
            if resolution.method is not Method.NOT_HOMOGRAPH:
                pieces.append(resolution.pronunciation)
            else:
                ipa = g2p.to_ipa(token.surface, language)
                if ipa:
                    pieces.append(ipa)
    return " ".join(pieces)


@dataclass
class FrontendResult:
    text: str
    ipa: str
    tokens: list[PhonemeToken]
    vectors: np.ndarray


def text_to_vectors(
    text: str,
    g2p: G2pProvider,
    tagger: PosProvider | None = None,
    dictionary: HomographDictionary | None = None,
    language: str = "fr",
    table: FeatureTable | None = None,
    modifiers: ModifierTable | None = None,
) -> FrontendResult:
    """Full front-end: cleaned text, IPA, tokens and articulatory vectors.

    Without a tagger and dictionary the homograph stage is skipped and the
    provider sees the whole cleaned text at once.
    """
    table = table or default_feature_table()
    cleaned = clean_text(text)
    if tagger is not None and dictionary is not None:
        ipa = phonemize_with_homographs(
            cleaned, g2p, tagger, dictionary, language)
    else:
        ipa = g2p.to_ipa(cleaned, language) if cleaned else ""
    tokens = tokenize_ipa(ipa, table, modifiers or default_modifier_table())
    return FrontendResult(cleaned, ipa, tokens, vectorize(tokens, table))
