"""Rudimentary text cleaning applied before phonemization.

The rule list is deliberately small and lives in one place: NFC
normalization, typographic-to-ASCII mapping for quotes and dashes, control
character removal, and whitespace collapsing. French typographic thin
spaces (the hair-width spacers set inside guillemets) are deleted rather
than widened to a full space.
"""
import unicodedata

# Typographic characters folded to their ASCII equivalents.
_CHAR_MAP = {
    "«": '"',   # «
    "»": '"',   # »
    "“": '"',   # "
    "”": '"',   # "
    "„": '"',   # „
    "‟": '"',   # ‟
    "‘": "'",   # '
    "’": "'",   # '
    "‚": "'",   # ‚
    "‛": "'",   # ‛
    "‐": "-",   # hyphen
    "‑": "-",   # non-breaking hyphen
    "‒": "-",   # figure dash
    "–": "-",   # en dash
    "—": "-",   # em dash
    "―": "-",   # horizontal bar
    "…": "...",  # ellipsis
}

# Zero-width and French thin spaces: removed outright, never widened.
_DELETE = {" ", " ", " ", "​", "﻿"}


def clean_text(raw: str) -> str:
    """Normalize raw text to a clean single-spaced form.

    Total on valid Unicode input: never raises, empty in gives empty out.
    """
    text = unicodedata.normalize("NFC", raw)
    out = []
    for ch in text:
        if ch in _DELETE:
            continue
        if ch in _CHAR_MAP:
            out.append(_CHAR_MAP[ch])
            continue
        category = unicodedata.category(ch)
        if category in ("Cc", "Cf"):
            # Control characters act as soft breaks so words never fuse.
            out.append(" ")
            continue
        if category == "Zs" or ch.isspace():
            out.append(" ")
            continue
        out.append(ch)
    return " ".join("".join(out).split())
