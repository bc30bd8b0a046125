"""Pluggable grapheme-to-phoneme providers.

Two implementations ship with the package: an adapter that spawns any
external IPA-emitting phonemizer command, and a deterministic lexicon
provider so tests and hermetic pipelines never need an external binary.
"""
from __future__ import annotations

import re
import subprocess
from pathlib import Path
from typing import Protocol, runtime_checkable

from .errors import ParseError, ProviderUnavailable, UnsupportedLanguage

_WORD_RE = re.compile(r"[\w']+|[^\w\s]", re.UNICODE)


@runtime_checkable
class G2pProvider(Protocol):
    """Anything that deterministically turns text into an IPA string."""

    name: str
    languages: frozenset[str]

    def to_ipa(self, text: str, language: str) -> str:
        ...


class LexiconProvider:
    """Word-by-word lookup in a fixed lexicon.

    Punctuation passes through unchanged (the tokenizer downstream turns it
    into silence). Unknown words either raise or are skipped, depending on
    `on_missing`.
    """

    def __init__(self, lexicon: dict[str, str], language: str = "fr",
                 on_missing: str = "error"):
        if on_missing not in ("error", "skip"):
            raise ValueError("on_missing must be 'error' or 'skip'")
        self.name = "lexicon"
        self.languages = frozenset([language])
        self.on_missing = on_missing
        self._lexicon = {k.lower(): v for k, v in lexicon.items()}

    @classmethod
    def from_file(cls, path: str | Path, language: str = "fr",
                  on_missing: str = "error") -> "LexiconProvider":
        """Load a `word<TAB>ipa` lexicon file; # lines are comments."""
        lexicon: dict[str, str] = {}
        for lineno, line in enumerate(
                Path(path).read_text(encoding="utf-8").splitlines(), start=1):
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected word<TAB>ipa", line=lineno)
            lexicon[parts[0]] = parts[1]
        return cls(lexicon, language=language, on_missing=on_missing)

    def lookup(self, word: str) -> str | None:
        return self._lexicon.get(word.lower())

    def to_ipa(self, text: str, language: str) -> str:
        if language not in self.languages:
            raise UnsupportedLanguage(f"{self.name} does not support {language!r}")
        pieces = []
        for chunk in _WORD_RE.findall(text):
            if not chunk[0].isalnum() and chunk[0] != "'":
                pieces.append(chunk)
                continue
            ipa = self._lexicon.get(chunk.lower())
            if ipa is None:
                if self.on_missing == "error":
                    raise ProviderUnavailable(
                        f"word {chunk!r} not in lexicon and on_missing='error'")
                continue
            pieces.append(ipa)
        return " ".join(pieces)


class ExternalCommandProvider:
    """Adapter around an external phonemizer process.

    The command is invoked as `cmd --lang <language> --ipa` with the text on
    stdin and is expected to print IPA on stdout and exit 0.
    """

    def __init__(self, command: str | list[str], languages=("fr",),
                 timeout: float = 60.0):
        self.command = [command] if isinstance(command, str) else list(command)
        self.name = Path(self.command[0]).name
        self.languages = frozenset(languages)
        self.timeout = timeout

    def to_ipa(self, text: str, language: str) -> str:
        if language not in self.languages:
            raise UnsupportedLanguage(f"{self.name} does not support {language!r}")
        argv = self.command + ["--lang", language, "--ipa"]
        try:
            proc = subprocess.run(
                argv, input=text.encode("utf-8"), capture_output=True,
                timeout=self.timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise ProviderUnavailable(f"{argv[0]}: {exc}") from exc
        if proc.returncode != 0:
            raise ProviderUnavailable(
                f"{argv[0]} exited {proc.returncode}: "
                f"{proc.stderr.decode('utf-8', 'replace').strip()}")
        return proc.stdout.decode("utf-8").strip()


def phonemize(text: str, provider: G2pProvider, language: str = "fr") -> str:
    """Run the provider on cleaned text; empty input short-circuits."""
    if not text:
        return ""
    return provider.to_ipa(text, language)
