"""Command-line pipeline driver.

Subcommands compose over JSONL manifests: `phonemize` fills phoneme
strings, `align` decodes durations from posteriograms, `prosody` adds
phone-level pitch/energy, `prep` handles loudness, pause validation,
joining and cleaning, and `eval-homographs` scores the resolver against a
gold set. Exit codes: 0 success, 2 configuration, 3 input format,
4 validation; diagnostics go to stderr as single-line JSON.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import alignment, audio_io, corpus, dsp, prosody, vad
from .config import PipelineConfig, load_config
from .errors import (
    ConfigError,
    InputFormatError,
    ProviderUnavailable,
    ToucanPrepError,
    ValidationError,
)
from .frontend import text_to_vectors
from .homographs import (
    default_dictionary,
    evaluate_accuracy,
    load_dictionary,
    load_gold_set,
)
from .phonemes import (
    FeatureTable,
    ModifierTable,
    default_feature_table,
    default_modifier_table,
    tokenize_ipa,
)
from .providers import ExternalCommandProvider, LexiconProvider
from .tagging import FilePosProvider, UnigramTagger, default_unigram_tagger

# Accuracy of the reference rule-based resolver on its published test set;
# printed alongside evaluation results for orientation.
REFERENCE_ACCURACY = 0.84

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FORMAT = 3
EXIT_VALIDATION = 4


def _diagnostic(error: Exception) -> None:
    print(json.dumps({"error": type(error).__name__, "message": str(error)}),
          file=sys.stderr)


def _build_g2p(cfg: PipelineConfig):
    if cfg.g2p_provider == "command":
        return ExternalCommandProvider(cfg.g2p_command, languages=(cfg.language,))
    if cfg.g2p_lexicon is None:
        raise ConfigError("lexicon G2P provider needs g2p_lexicon in the config")
    return LexiconProvider.from_file(cfg.g2p_lexicon, language=cfg.language)


def _build_tagger(cfg: PipelineConfig, tags_file: str | None = None):
    if tags_file:
        return FilePosProvider.from_file(tags_file)
    if cfg.unigram_tags:
        return UnigramTagger.from_file(cfg.unigram_tags)
    return default_unigram_tagger()


def _build_dictionary(cfg: PipelineConfig):
    if cfg.homograph_dictionary:
        return load_dictionary(cfg.homograph_dictionary)
    return default_dictionary()


def _build_tables(cfg: PipelineConfig) -> tuple[FeatureTable, ModifierTable]:
    table = (FeatureTable.from_file(cfg.feature_table)
             if cfg.feature_table else default_feature_table())
    modifiers = (ModifierTable.from_file(cfg.modifier_table)
                 if cfg.modifier_table else default_modifier_table())
    return table, modifiers


def _mel_config(cfg: PipelineConfig) -> dsp.MelConfig:
    return dsp.MelConfig(
        sample_rate=cfg.sample_rate, win_length=cfg.win_length,
        hop_length=cfg.hop_length, n_mels=cfg.n_mels,
        fmin=cfg.fmin, fmax=cfg.fmax)


def _read_span(record: corpus.UtteranceRecord, sample_rate: int) -> np.ndarray:
    audio, rate = audio_io.read_wav(record.audio_path)
    if rate != sample_rate:
        raise ValidationError(
            f"{record.utt_id}: audio is {rate} Hz, config expects {sample_rate}")
    lo = int(round(record.start * rate))
    hi = int(round(record.end * rate))
    return audio[lo:hi]


# --- phonemize ---

def cmd_phonemize(args, cfg: PipelineConfig) -> int:
    g2p = _build_g2p(cfg)
    tagger = _build_tagger(cfg, getattr(args, "tags", None))
    dictionary = _build_dictionary(cfg)
    table, modifiers = _build_tables(cfg)

    if args.manifest:
        records = corpus.read_manifest(args.manifest)
        for record in records:
            result = text_to_vectors(
                record.transcript, g2p, tagger, dictionary,
                language=cfg.language, table=table, modifiers=modifiers)
            record.phonemes = result.ipa
        corpus.write_manifest(args.output, records)
        return EXIT_OK

    stream = open(args.input, encoding="utf-8") if args.input else sys.stdin
    sink = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for line in stream:
            line = line.rstrip("\n")
            if not line:
                continue
            result = text_to_vectors(
                line, g2p, tagger, dictionary,
                language=cfg.language, table=table, modifiers=modifiers)
            if args.format == "ipa":
                print(result.ipa, file=sink)
            else:
                print(json.dumps({
                    "text": result.text,
                    "ipa": result.ipa,
                    "symbols": [t.symbol for t in result.tokens],
                    "vectors": result.vectors.tolist(),
                }, ensure_ascii=False), file=sink)
    finally:
        if args.input:
            stream.close()
        if args.output:
            sink.close()
    return EXIT_OK


# --- align ---

def _align_one(task: tuple[str, str, str, str]) -> dict:
    utt_id, pgrm_path, phonemes, algo = task
    post = alignment.read_posteriogram(pgrm_path)
    tokens = tokenize_ipa(phonemes)
    scores = alignment.reorder(post, tokens)
    decode = alignment.mas if algo == "mas" else alignment.dijkstra_align
    path = decode(scores)
    return {"utt_id": utt_id,
            "durations": list(path.durations),
            "score": path.score}


def cmd_align(args, cfg: PipelineConfig) -> int:
    records = sorted(corpus.read_manifest(args.manifest), key=lambda r: r.utt_id)
    post_dir = Path(args.posteriograms)
    tasks = []
    for record in records:
        if record.phonemes is None:
            raise ValidationError(f"{record.utt_id}: manifest has no phonemes")
        pgrm = post_dir / f"{record.utt_id}.pgrm"
        if not pgrm.is_file():
            raise InputFormatError(f"no posteriogram for {record.utt_id}: {pgrm}")
        tasks.append((record.utt_id, str(pgrm), record.phonemes, args.algo))

    if cfg.parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            rows = list(pool.map(_align_one, tasks))
    else:
        rows = [_align_one(task) for task in tasks]
    rows.sort(key=lambda r: r["utt_id"])

    with open(args.output, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row) + "\n")

    if args.report:
        matrices = []
        for _, pgrm_path, phonemes, _algo in tasks:
            post = alignment.read_posteriogram(pgrm_path)
            matrices.append(alignment.reorder(post, tokenize_ipa(phonemes)))
        report = alignment.compare_skip_rate(matrices)
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n",
                                     encoding="utf-8")

    if args.update_manifest:
        by_id = {row["utt_id"]: row for row in rows}
        for record in records:
            record.durations = by_id[record.utt_id]["durations"]
        corpus.write_manifest(args.update_manifest, records)
    return EXIT_OK


# --- prosody ---

def _prosody_one(task: tuple) -> dict:
    (utt_id, audio_path, start, end, phonemes, durations,
     mel_kwargs, pitch_kwargs, norm_mode, features_dir) = task
    cfg = dsp.MelConfig(**mel_kwargs)
    record = corpus.UtteranceRecord(utt_id, audio_path, start, end, "")
    audio = _read_span(record, cfg.sample_rate)
    tokens = tokenize_ipa(phonemes)
    pitch_track = dsp.extract_pitch(audio, cfg.sample_rate, cfg, **pitch_kwargs)
    energy_track = dsp.extract_energy(audio, cfg.sample_rate, cfg)
    phones = prosody.phone_prosody(tokens, durations, pitch_track, energy_track,
                                   norm_mode=norm_mode)
    if features_dir:
        mel = dsp.mel_spectrogram(audio, cfg.sample_rate, cfg)
        from . import containers
        containers.write_matrix(
            Path(features_dir) / f"{utt_id}.feat", containers.MAGIC_FEATURES,
            mel, cfg.hop_length / cfg.sample_rate)
    return {"utt_id": utt_id,
            "pitch": [p.pitch for p in phones],
            "energy": [p.energy for p in phones]}


def cmd_prosody(args, cfg: PipelineConfig) -> int:
    records = sorted(corpus.read_manifest(args.manifest), key=lambda r: r.utt_id)
    mel_cfg = _mel_config(cfg)
    mel_kwargs = {
        "sample_rate": mel_cfg.sample_rate, "win_length": mel_cfg.win_length,
        "hop_length": mel_cfg.hop_length, "n_mels": mel_cfg.n_mels,
        "fmin": mel_cfg.fmin, "fmax": mel_cfg.fmax,
    }
    pitch_kwargs = {
        "fmin": cfg.pitch_fmin, "fmax": cfg.pitch_fmax,
        "voicing_threshold": cfg.voicing_threshold,
    }
    if args.features_dir:
        Path(args.features_dir).mkdir(parents=True, exist_ok=True)
    tasks = []
    for record in records:
        if record.phonemes is None or record.durations is None:
            raise ValidationError(
                f"{record.utt_id}: prosody needs phonemes and durations")
        tasks.append((
            record.utt_id, record.audio_path, record.start, record.end,
            record.phonemes, record.durations, mel_kwargs, pitch_kwargs,
            cfg.prosody_norm_mode, args.features_dir))

    if cfg.parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            rows = list(pool.map(_prosody_one, tasks))
    else:
        rows = [_prosody_one(task) for task in tasks]

    by_id = {row["utt_id"]: row for row in rows}
    for record in records:
        record.pitch = by_id[record.utt_id]["pitch"]
        record.energy = by_id[record.utt_id]["energy"]
    corpus.write_manifest(args.output, records)
    return EXIT_OK


# --- prep ---

def cmd_prep(args, cfg: PipelineConfig) -> int:
    from .loudness import measure_loudness, normalize_loudness

    records = sorted(corpus.read_manifest(args.manifest), key=lambda r: r.utt_id)
    mel_cfg = _mel_config(cfg)
    report: dict = {}

    if args.validate_pauses:
        external = vad.read_vad_labels(args.vad_labels) if args.vad_labels else None
        decisions = {}
        for record in records:
            if record.phonemes is None or record.durations is None:
                raise ValidationError(
                    f"{record.utt_id}: pause validation needs phonemes and durations")
            tokens = tokenize_ipa(record.phonemes)
            if external is not None:
                labels = external.get(record.utt_id)
                if labels is None:
                    raise ValidationError(
                        f"{record.utt_id}: no VAD labels in {args.vad_labels}")
            else:
                audio = _read_span(record, cfg.sample_rate)
                labels = vad.energy_vad(
                    audio, cfg.sample_rate, mel_cfg,
                    enter_rel_db=cfg.vad_enter_rel_db,
                    hysteresis_db=cfg.vad_hysteresis_db,
                    floor_db=cfg.vad_floor_db)
            pruned, marks = corpus.validate_pause_markers(
                record.transcript, record.durations, tokens, labels,
                min_sil_frames=cfg.min_sil_frames)
            record.transcript = pruned
            decisions[record.utt_id] = [
                {"marker": m.marker, "char_index": m.char_index,
                 "kept": m.kept} for m in marks]
        report["pauses"] = decisions

    if args.loudness:
        from .loudness import measure_rms_dbfs, normalize_rms_dbfs

        target = args.target if args.target is not None else cfg.loudness_target_lufs
        out_dir = Path(args.audio_out) if args.audio_out else None
        if out_dir:
            out_dir.mkdir(parents=True, exist_ok=True)
        measured = {}
        for record in records:
            audio = _read_span(record, cfg.sample_rate)
            if cfg.loudness_unit == "lufs":
                level = measure_loudness(audio, cfg.sample_rate)
            else:
                level = measure_rms_dbfs(audio)
            record.loudness_lufs = round(level, 4)
            measured[record.utt_id] = record.loudness_lufs
            if out_dir:
                if cfg.loudness_unit == "lufs":
                    normalized = normalize_loudness(audio, target, cfg.sample_rate)
                else:
                    normalized = normalize_rms_dbfs(audio, target)
                path = out_dir / f"{record.utt_id}.wav"
                audio_io.write_wav(path, normalized, cfg.sample_rate)
                record.audio_path = str(path)
                record.start = 0.0
                record.end = len(normalized) / cfg.sample_rate
        report["loudness"] = {"target": target, "unit": cfg.loudness_unit,
                              "measured": measured}

    if args.join:
        joints = corpus.make_joint_utterances(
            records, pause_seconds=cfg.join_pause_seconds,
            max_total_seconds=cfg.join_max_seconds)
        report["join"] = {"emitted": len(joints)}
        records.extend(joints)

    if args.clean:
        if not args.losses:
            raise ConfigError("--clean needs --losses FILE")
        losses = corpus.read_loss_file(args.losses)
        cleaning = corpus.clean_by_loss(losses, threshold=cfg.cleaning_threshold)
        removed = set(cleaning.removed_ids)
        records = [r for r in records if r.utt_id not in removed]
        report["cleaning"] = cleaning.to_dict()

    records.sort(key=lambda r: r.utt_id)
    corpus.write_manifest(args.output, records)
    if args.report:
        Path(args.report).write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


# --- eval-homographs ---

def cmd_eval_homographs(args, cfg: PipelineConfig) -> int:
    from .phonemes import _data_path

    gold_path = args.gold or str(_data_path("gold_homographs.tsv"))
    gold = load_gold_set(gold_path)
    tagger = _build_tagger(cfg, args.tags)
    dictionary = _build_dictionary(cfg)
    result = evaluate_accuracy(gold, tagger, dictionary)
    result["tagger"] = tagger.name
    result["reference_accuracy"] = REFERENCE_ACCURACY
    result["meets_reference"] = result["accuracy"] >= REFERENCE_ACCURACY
    payload = json.dumps(result, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return EXIT_OK


# --- argument parsing ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toucan-prep",
        description="Deterministic TTS front-end and corpus preparation")
    parser.add_argument("--config", default=None, help="TOML config file "
                        "(falls back to $TOUCAN_PREP_CONFIG)")
    # --config is accepted before or after the subcommand; SUPPRESS keeps
    # the subparser from clobbering a value given up front.
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", default=argparse.SUPPRESS,
                        help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phonemize", parents=[shared],
                       help="text to IPA and articulatory vectors")
    p.add_argument("--input", help="text file (default: stdin)")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--manifest", help="read transcripts from this manifest "
                   "and write an updated manifest to --output")
    p.add_argument("--format", choices=("ipa", "json"), default="ipa")
    p.add_argument("--tags", help="pre-computed POS tag file")
    p.set_defaults(func=cmd_phonemize)

    p = sub.add_parser("align", help="decode durations from posteriograms")
    p.add_argument("--posteriograms", required=True, help="directory of .pgrm files")
    p.add_argument("--manifest", required=True)
    p.add_argument("--output", required=True, help="durations JSONL")
    p.add_argument("--algo", choices=("mas", "dijkstra"), default="mas")
    p.add_argument("--report", help="skip-rate comparison JSON")
    p.add_argument("--update-manifest", help="write manifest with durations")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("prosody", help="phone-level pitch and energy")
    p.add_argument("--manifest", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--features-dir", help="write log-mel matrices here")
    p.set_defaults(func=cmd_prosody)

    p = sub.add_parser("prep", help="loudness, pauses, joining, cleaning")
    p.add_argument("--manifest", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--loudness", action="store_true")
    p.add_argument("--target", type=float, help="loudness target in LUFS")
    p.add_argument("--audio-out", help="write loudness-normalized audio here")
    p.add_argument("--validate-pauses", action="store_true")
    p.add_argument("--vad-labels", help="external VAD label file")
    p.add_argument("--join", action="store_true")
    p.add_argument("--clean", action="store_true")
    p.add_argument("--losses", help="utt_id<TAB>loss file for --clean")
    p.add_argument("--report", help="write a JSON preparation report")
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("eval-homographs", help="score homograph resolution")
    p.add_argument("--gold", help="gold TSV (default: packaged suite)")
    p.add_argument("--tags", help="oracle POS tag file")
    p.add_argument("--output", help="write the report JSON here")
    p.set_defaults(func=cmd_eval_homographs)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except ConfigError as exc:
        _diagnostic(exc)
        return EXIT_CONFIG
    except ProviderUnavailable as exc:
        _diagnostic(exc)
        return EXIT_CONFIG
    except InputFormatError as exc:
        _diagnostic(exc)
        return EXIT_FORMAT
    except ToucanPrepError as exc:
        _diagnostic(exc)
        return EXIT_VALIDATION
    except OSError as exc:
        _diagnostic(exc)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
