import numpy as np
import pytest

from toucan_prep.audio_io import anti_imaging_filter, finalize_output, quantize_int16
from toucan_prep.corpus import (
    UtteranceRecord,
    clean_by_loss,
    concat_with_pauses,
    make_joint_utterances,
    read_manifest,
    split_chapters,
    validate_pause_markers,
    write_manifest,
)
from toucan_prep.errors import (
    LengthMismatch,
    OverlappingSpans,
    SpanOutOfBounds,
    TooFewSamples,
    ValidationError,
)
from toucan_prep.phonemes import PhonemeToken


def record(utt_id, duration, **kw):
    return UtteranceRecord(utt_id, "a.wav", 0.0, duration, f"text {utt_id}", **kw)


class TestSplitChapters:
    SPANS = [(0.0, 1.0, "Un ."), (1.5, 2.5, "Deux ."), (3.0, 4.0, "Trois .")]

    def test_paragraph_grouping(self):
        records = split_chapters(self.SPANS, {1}, 5.0, "ch.wav")
        assert len(records) == 2
        assert records[0].start == 0.0 and records[0].end == 2.5
        assert records[0].transcript == "Un . Deux ."
        assert records[1].transcript == "Trois ."

    def test_no_marks_one_record_per_span(self):
        records = split_chapters(self.SPANS, set(), 5.0, "ch.wav")
        assert len(records) == 3

    def test_overlap_rejected(self):
        spans = [(0.0, 2.0, "a"), (1.5, 3.0, "b")]
        with pytest.raises(OverlappingSpans):
            split_chapters(spans, set(), 5.0, "ch.wav")

    def test_out_of_bounds_rejected(self):
        with pytest.raises(SpanOutOfBounds):
            split_chapters([(0.0, 6.0, "a")], set(), 5.0, "ch.wav")


class TestJoinUtterances:
    def test_boundary_case_from_rule_arithmetic(self):
        # 6+0.22+5 = 11.22 fits; +0.22+4 = 15.44 exceeds the cap
        records = [record("u0", 6.0), record("u1", 5.0), record("u2", 4.0)]
        joints = make_joint_utterances(records)
        first = [j for j in joints if j.source_ids[0] == "u0"]
        assert len(first) == 1
        assert first[0].source_ids == ["u0", "u1"]
        assert first[0].duration == pytest.approx(11.22)

    def test_long_single_emits_nothing(self):
        joints = make_joint_utterances([record("u0", 16.0), record("u1", 1.0)])
        assert all(j.source_ids[0] != "u0" for j in joints)

    def test_seven_short_utterances_all_join(self):
        records = [record(f"u{i}", 1.0) for i in range(7)]
        joints = make_joint_utterances(records)
        first = [j for j in joints if j.source_ids[0] == "u0"][0]
        assert len(first.source_ids) == 7
        assert first.duration == pytest.approx(7 + 6 * 0.22)

    def test_every_joint_respects_cap(self, rng):
        records = [record(f"u{i:02d}", float(rng.uniform(0.5, 8.0)))
                   for i in range(30)]
        for joint in make_joint_utterances(records):
            assert joint.duration <= 15.0 + 1e-9
            assert joint.is_joint and len(joint.source_ids) >= 2

    def test_join_flag_requires_sources(self):
        with pytest.raises(ValidationError):
            UtteranceRecord("j", "a.wav", 0.0, 1.0, "t", is_joint=True)


class TestConcatWithPauses:
    def test_exact_gap_length(self):
        sr = 16000
        out = concat_with_pauses([np.ones(sr), np.ones(sr)], sr)
        gap = int(round(0.22 * sr))
        assert len(out) == 2 * sr + gap
        assert np.all(out[sr:sr + gap] == 0.0)


class TestValidatePauseMarkers:
    def tokens_for(self, *symbols):
        return [PhonemeToken.silence() if s == "~" else PhonemeToken(s)
                for s in symbols]

    def test_marker_with_silence_evidence_kept(self):
        tokens = self.tokens_for("a", "~", "b")
        durations = [3, 20, 3]
        vad = np.concatenate([np.ones(3), np.zeros(20), np.ones(3)])
        pruned, decisions = validate_pause_markers("a, b", durations, tokens, vad)
        assert pruned == "a, b"
        assert decisions[0].kept

    def test_marker_without_duration_removed(self):
        tokens = self.tokens_for("a", "~", "b")
        durations = [3, 0, 3]
        vad = np.ones(6)
        pruned, decisions = validate_pause_markers("a, b", durations, tokens, vad)
        assert pruned == "a b"
        assert not decisions[0].kept

    def test_marker_with_speech_vad_removed(self):
        # long aligner silence but VAD says speech (e.g. a filled pause)
        tokens = self.tokens_for("a", "~", "b")
        durations = [3, 20, 3]
        vad = np.ones(26)
        pruned, decisions = validate_pause_markers("a, b", durations, tokens, vad)
        assert pruned == "a b"
        assert not decisions[0].kept
        assert decisions[0].nonspeech_fraction == 0.0

    def test_half_rule_boundary(self):
        tokens = self.tokens_for("a", "~", "b")
        durations = [2, 10, 2]
        vad = np.concatenate([np.ones(2), np.ones(5), np.zeros(5), np.ones(2)])
        pruned, decisions = validate_pause_markers("a, b", durations, tokens, vad)
        assert decisions[0].kept  # exactly 50% non-speech passes

    def test_non_marker_punctuation_untouched(self):
        tokens = self.tokens_for("a", "~")
        pruned, decisions = validate_pause_markers(
            "a.", [3, 0], tokens, np.ones(3))
        assert pruned == "a."
        assert decisions == []

    def test_deletions_only(self):
        tokens = self.tokens_for("a", "~", "b", "~")
        durations = [2, 0, 2, 8]
        vad = np.concatenate([np.ones(4), np.zeros(8)])
        original = 'a, b"'
        pruned, _ = validate_pause_markers(original, durations, tokens, vad)
        # pruned must be a subsequence of the original
        it = iter(original)
        assert all(ch in it for ch in pruned)

    def test_length_mismatch(self):
        tokens = self.tokens_for("a", "~")
        with pytest.raises(LengthMismatch):
            validate_pause_markers("a,", [2, 2], tokens, np.ones(3))

    def test_punctuation_token_mismatch(self):
        tokens = self.tokens_for("a")
        with pytest.raises(LengthMismatch):
            validate_pause_markers("a,", [2], tokens, np.ones(2))


def oracle_removed_count(values, threshold):
    """Five-line re-implementation of the stop rule used as reference."""
    ranked = sorted(values, reverse=True)
    removed = 0
    while len(ranked) >= 11 and ranked[0] - np.mean(ranked[1:11]) > threshold:
        ranked.pop(0)
        removed += 1
    return removed


class TestCleanByLoss:
    def test_single_outlier(self):
        losses = {"bad": 3.0}
        losses.update({f"u{i}": 1.0 for i in range(10)})
        report = clean_by_loss(losses)
        assert report.removed_ids == ("bad",)
        assert report.kept_count == 10
        assert report.threshold_trace[0] == (3.0, 1.0)

    def test_all_equal_removes_nothing(self):
        losses = {f"u{i}": 2.5 for i in range(15)}
        report = clean_by_loss(losses)
        assert report.removed_ids == ()

    def test_descending_staircase_matches_oracle(self):
        values = [5.0 - 0.05 * i for i in range(30)]
        losses = {f"u{i:02d}": v for i, v in enumerate(values)}
        expected = oracle_removed_count(values, 0.1)
        report = clean_by_loss(losses)
        assert len(report.removed_ids) == expected
        assert expected == 20  # frozen from the oracle: removal runs to the floor

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            clean_by_loss({f"u{i}": 1.0 for i in range(10)})

    def test_removal_order_non_increasing(self, rng):
        losses = {f"u{i:03d}": float(rng.random() * 3) for i in range(40)}
        report = clean_by_loss(losses)
        removed_losses = [losses[u] for u in report.removed_ids]
        assert all(a >= b for a, b in zip(removed_losses, removed_losses[1:]))

    def test_threshold_monotonicity(self, rng):
        for _ in range(100):
            losses = {f"u{i:03d}": float(rng.random() * 2)
                      for i in range(int(rng.integers(11, 40)))}
            loose = set(clean_by_loss(losses, threshold=0.1).removed_ids)
            for bigger in (0.3, 0.8):
                strict = set(clean_by_loss(losses, threshold=bigger).removed_ids)
                assert strict <= loose


class TestFinalizeOutput:
    def test_sample_doubling_shape(self, rng):
        audio = rng.uniform(-0.5, 0.5, size=1234)
        out = finalize_output(audio)
        assert out.dtype == np.int16
        assert len(out) == 2 * len(audio)

    def test_doubling_order_before_filter(self):
        # np.repeat is the contract: [a, b] -> [a, a, b, b] pre-filter
        assert np.repeat(np.array([1.0, 2.0]), 2).tolist() == [1.0, 1.0, 2.0, 2.0]

    def test_dc_gain_unity(self):
        out = finalize_output(np.full(24000, 0.5))
        settled = out[1000:]
        assert np.all(np.abs(settled.astype(float) - 0.5 * 32767) <= 1.0)

    def test_6khz_attenuation_matches_first_order_form(self):
        # analog first-order closed form at f/fc = 6/12
        expected_db = 20 * np.log10(1.0 / np.sqrt(1.0 + (6.0 / 12.0) ** 2))
        t = np.arange(48000) / 48000
        tone = 0.5 * np.sin(2 * np.pi * 6000 * t)
        filtered = anti_imaging_filter(tone)
        # steady-state RMS over whole periods
        measured_db = 20 * np.log10(
            np.sqrt(np.mean(filtered[8000:40000] ** 2))
            / np.sqrt(np.mean(tone[8000:40000] ** 2)))
        assert measured_db == pytest.approx(expected_db, abs=0.1)

    def test_int16_range_never_exceeded(self, rng):
        loud = rng.uniform(-1.5, 1.5, size=24000)
        out = finalize_output(loud)
        assert out.min() >= -32768 and out.max() <= 32767

    def test_round_half_away_from_zero(self):
        values = np.array([1.5, -1.5, 0.4, -0.4, 2.5]) / 32767.0
        assert quantize_int16(values).tolist() == [2, -2, 0, 0, 3]


class TestManifestRoundTrip:
    def test_round_trip(self, tmp_path):
        records = [
            record("u1", 2.0, phonemes="a b", durations=[3, 4],
                   loudness_lufs=-30.1),
            record("u0", 1.0),
        ]
        path = tmp_path / "m.jsonl"
        write_manifest(path, records)
        loaded = read_manifest(path)
        assert [r.utt_id for r in loaded] == ["u1", "u0"]
        assert loaded[0].durations == [3, 4]
        assert loaded[1].phonemes is None
