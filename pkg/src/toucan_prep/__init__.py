"""Deterministic front-end and data preparation for a French TTS pipeline.

Text becomes IPA phoneme tokens and articulatory vectors (with rule-based
homograph resolution), external posteriograms become phone durations via
monotonic alignment search, audio becomes phone-level prosody features, and
corpora are split, joined, loudness-normalized, pause-validated and
loss-cleaned under one manifest format.
"""
from .alignment import (
    AlignmentPath,
    Posteriogram,
    compare_skip_rate,
    dijkstra_align,
    durations_to_seconds,
    mas,
    read_posteriogram,
    reorder,
    write_posteriogram,
)
from .audio_io import finalize_output, read_wav, write_wav
from .config import PipelineConfig, load_config
from .corpus import (
    CleaningReport,
    UtteranceRecord,
    clean_by_loss,
    concat_with_pauses,
    make_joint_utterances,
    read_manifest,
    split_chapters,
    validate_pause_markers,
    write_manifest,
)
from .dsp import FrameTrack, MelConfig, extract_energy, extract_pitch, mel_spectrogram
from .frontend import FrontendResult, phonemize_with_homographs, text_to_vectors
from .homographs import (
    HomographDictionary,
    HomographEntry,
    Method,
    Resolution,
    annotate_text,
    evaluate_accuracy,
    load_dictionary,
    load_gold_set,
    resolve,
    resolve_plus,
)
from .loudness import (
    measure_loudness,
    measure_rms_dbfs,
    normalize_loudness,
    normalize_rms_dbfs,
)
from .phonemes import (
    FeatureTable,
    ModifierTable,
    PhonemeToken,
    Tone,
    tokenize_ipa,
    vectorize,
)
from .prosody import (
    PhoneProsody,
    average_per_phone,
    normalize_per_utterance,
    phone_prosody,
    zero_silences,
)
from .providers import ExternalCommandProvider, G2pProvider, LexiconProvider, phonemize
from .tagging import (
    FilePosProvider,
    PosProvider,
    TaggedToken,
    UnigramTagger,
    tag_text,
    tokenize_words,
)
from .text import clean_text
from .vad import energy_vad, read_vad_labels, write_vad_labels

__version__ = "0.1.0"
