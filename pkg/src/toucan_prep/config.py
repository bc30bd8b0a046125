"""Pipeline configuration: one TOML file, defaults matching the shipped
data tables and the standard preparation constants.

Every constant used by a subcommand can be overridden per run; referenced
files are checked at load time so path typos fail before any audio work.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError

ENV_CONFIG = "TOUCAN_PREP_CONFIG"


@dataclass
class PipelineConfig:
    # data files; None means the packaged default
    homograph_dictionary: str | None = None
    feature_table: str | None = None
    modifier_table: str | None = None
    tag_map: str | None = None
    h_aspire: str | None = None
    g2p_lexicon: str | None = None
    unigram_tags: str | None = None
    # G2P
    g2p_provider: str = "lexicon"  # "lexicon" or "command"
    g2p_command: str | None = None
    language: str = "fr"
    # spectral analysis
    sample_rate: int = 16000
    win_length: int = 1024
    hop_length: int = 256
    n_mels: int = 80
    fmin: float = 0.0
    fmax: float = 8000.0
    # pitch
    pitch_fmin: float = 60.0
    pitch_fmax: float = 400.0
    voicing_threshold: float = 0.45
    # prosody normalization
    prosody_norm_mode: str = "divide"
    # loudness
    loudness_target_lufs: float = -30.0
    loudness_unit: str = "lufs"
    speaker_targets: dict = field(default_factory=dict)
    # joining
    join_pause_seconds: float = 0.22
    join_max_seconds: float = 15.0
    # cleaning
    cleaning_threshold: float = 0.1
    # VAD / pause validation
    vad_enter_rel_db: float = -3.0
    vad_hysteresis_db: float = 8.0
    vad_floor_db: float = -50.0
    min_sil_frames: int = 5
    # execution
    parallelism: int = 1

    _PATH_FIELDS = (
        "homograph_dictionary", "feature_table", "modifier_table", "tag_map",
        "h_aspire", "g2p_lexicon", "unigram_tags",
    )

    def __post_init__(self):
        for name in self._PATH_FIELDS:
            value = getattr(self, name)
            if value is not None and not Path(value).is_file():
                raise ConfigError(f"{name}: no such file: {value}")
        if self.g2p_provider not in ("lexicon", "command"):
            raise ConfigError(f"unknown g2p provider {self.g2p_provider!r}")
        if self.g2p_provider == "command" and not self.g2p_command:
            raise ConfigError("g2p_provider 'command' needs g2p_command")
        if not 0 < self.hop_length <= self.win_length:
            raise ConfigError("need 0 < hop_length <= win_length")
        if self.n_mels < 1:
            raise ConfigError("n_mels must be at least 1")
        if not 0 <= self.fmin < self.fmax <= self.sample_rate / 2:
            raise ConfigError("need 0 <= fmin < fmax <= sample_rate / 2")
        if not 0 < self.pitch_fmin < self.pitch_fmax:
            raise ConfigError("need 0 < pitch_fmin < pitch_fmax")
        if self.prosody_norm_mode not in ("divide", "subtract"):
            raise ConfigError(f"unknown prosody_norm_mode {self.prosody_norm_mode!r}")
        if self.loudness_unit not in ("lufs", "rms_dbfs"):
            raise ConfigError(f"unknown loudness_unit {self.loudness_unit!r}")
        if self.join_pause_seconds < 0 or self.join_max_seconds <= 0:
            raise ConfigError("join parameters must be positive")
        if self.cleaning_threshold < 0:
            raise ConfigError("cleaning_threshold must be non-negative")
        if self.min_sil_frames < 0:
            raise ConfigError("min_sil_frames must be non-negative")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be at least 1")


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Load config from `path`, the env fallback, or pure defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG) or None
    if path is None:
        return PipelineConfig()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    known = {f.name for f in fields(PipelineConfig) if not f.name.startswith("_")}
    flat: dict = {}
    for key, value in data.items():
        if isinstance(value, dict) and key != "speaker_targets":
            # tables like [mel] or [paths] flatten into top-level keys
            flat.update(value)
        else:
            flat[key] = value
    unknown = set(flat) - known
    if unknown:
        raise ConfigError(f"{path}: unknown option(s) {sorted(unknown)}")
    return PipelineConfig(**flat)
