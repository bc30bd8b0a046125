"""Exception hierarchy shared by all pipeline stages.

Every error raised on purpose by this package derives from
:class:`ToucanPrepError`, so callers (and the CLI) can distinguish pipeline
failures from genuine bugs. The three subfamilies map onto the CLI exit
codes: configuration (2), input format (3), validation (4).
"""


class ToucanPrepError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ToucanPrepError):
    """Invalid or incomplete pipeline configuration."""


class InputFormatError(ToucanPrepError):
    """Malformed input file or byte stream."""


class ValidationError(ToucanPrepError):
    """Inputs are well-formed but violate a documented precondition."""


# --- text / phoneme front-end ---

class UnknownSymbol(InputFormatError):
    """A character is absent from the articulatory feature table."""

    def __init__(self, symbol, position=None):
        self.symbol = symbol
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown symbol {symbol!r}{where}")


class ProviderUnavailable(ToucanPrepError):
    """An external provider (G2P command, tagger) failed or is missing."""


class UnsupportedLanguage(ValidationError):
    """The provider does not support the requested language tag."""


# --- homograph dictionary ---

class ParseError(InputFormatError):
    """A data file does not parse (carries the offending line number)."""

    def __init__(self, message, line=None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


class DuplicateGrapheme(InputFormatError):
    """Two dictionary lines define the same grapheme."""


class InvariantViolation(InputFormatError):
    """A dictionary entry breaks a structural invariant."""


class EmptyGoldSet(ValidationError):
    """An evaluation was requested over zero gold items."""


# --- alignment ---

class SymbolNotInModel(ValidationError):
    """A transcript symbol has no class in the posteriogram."""


class TooFewFrames(ValidationError):
    """The posteriogram is shorter than the transcript."""


class EmptyCorpus(ValidationError):
    """An aggregate statistic was requested over zero utterances."""


# --- audio / prosody ---

class SampleRateMismatch(ValidationError):
    """Audio sample rate differs from the configured rate."""


class EmptyAudio(ValidationError):
    """An operation received a zero-length signal."""


class LengthMismatch(ValidationError):
    """Two sequences that must align frame-for-frame do not."""


class TooShort(ValidationError):
    """Audio is shorter than one loudness gating block."""


# --- corpus preparation ---

class OverlappingSpans(ValidationError):
    """Segment spans overlap in time."""


class SpanOutOfBounds(ValidationError):
    """A segment span extends past the audio it indexes."""


class TooFewSamples(ValidationError):
    """Loss-ranked cleaning needs at least 11 samples."""
