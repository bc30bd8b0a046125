import numpy as np
import pytest

from toucan_prep.dsp import FrameTrack
from toucan_prep.errors import LengthMismatch
from toucan_prep.phonemes import PhonemeToken
from toucan_prep.prosody import (
    average_per_phone,
    normalize_per_utterance,
    phone_prosody,
    zero_silences,
)


def pitch_track(values):
    return FrameTrack(np.asarray(values, dtype=float), "pitch_hz")


def energy_track(values):
    return FrameTrack(np.asarray(values, dtype=float), "energy")


class TestAveragePerPhone:
    def test_plain_mean(self):
        out = average_per_phone(energy_track([100, 110, 120]), [3])
        assert out.tolist() == [110.0]

    def test_pitch_mean_ignores_unvoiced_frames(self):
        out = average_per_phone(pitch_track([0, 200, 0]), [3])
        assert out.tolist() == [200.0]

    def test_all_unvoiced_span_is_zero(self):
        out = average_per_phone(pitch_track([0, 0]), [2])
        assert out.tolist() == [0.0]

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            average_per_phone(energy_track([1, 2, 3]), [2, 2])

    def test_concatenation_consistency(self, rng):
        # averaging two utterances separately equals averaging their
        # concatenation with concatenated duration lists
        for _ in range(50):
            d1 = rng.integers(1, 5, size=rng.integers(1, 5)).tolist()
            d2 = rng.integers(1, 5, size=rng.integers(1, 5)).tolist()
            v1 = rng.random(sum(d1))
            v2 = rng.random(sum(d2))
            separate = np.concatenate([
                average_per_phone(energy_track(v1), d1),
                average_per_phone(energy_track(v2), d2),
            ])
            joined = average_per_phone(
                energy_track(np.concatenate([v1, v2])), d1 + d2)
            assert np.allclose(separate, joined)


class TestZeroSilences:
    def test_unvoiced_phone_loses_pitch_keeps_energy(self):
        tokens = [PhonemeToken("s")]
        assert zero_silences(np.array([180.0]), tokens, "pitch_hz").tolist() == [0.0]
        assert zero_silences(np.array([0.4]), tokens, "energy").tolist() == [0.4]

    def test_silence_token_loses_both(self):
        tokens = [PhonemeToken.silence()]
        assert zero_silences(np.array([150.0]), tokens, "pitch_hz").tolist() == [0.0]
        assert zero_silences(np.array([0.2]), tokens, "energy").tolist() == [0.0]

    def test_voiced_phone_unchanged(self):
        tokens = [PhonemeToken("a")]
        assert zero_silences(np.array([210.0]), tokens, "pitch_hz").tolist() == [210.0]
        assert zero_silences(np.array([0.5]), tokens, "energy").tolist() == [0.5]


class TestNormalize:
    def test_divides_by_nonzero_mean(self):
        out = normalize_per_utterance(np.array([2.0, 4.0, 0.0]))
        assert out == pytest.approx([2 / 3, 4 / 3, 0.0])

    def test_all_zero_unchanged(self):
        assert normalize_per_utterance(np.zeros(2)).tolist() == [0.0, 0.0]

    def test_constant_becomes_ones(self):
        out = normalize_per_utterance(np.full(3, 7.5))
        assert out.tolist() == [1.0, 1.0, 1.0]

    def test_idempotent(self, rng):
        for _ in range(200):
            v = rng.random(rng.integers(1, 20))
            v[rng.random(v.shape) < 0.3] = 0.0
            once = normalize_per_utterance(v)
            twice = normalize_per_utterance(once)
            assert np.allclose(once, twice)

    def test_scale_invariant(self, rng):
        for _ in range(200):
            v = rng.random(rng.integers(1, 20))
            k = float(rng.uniform(0.01, 100.0))
            assert np.allclose(normalize_per_utterance(v),
                               normalize_per_utterance(k * v))

    def test_zero_positions_preserved(self, rng):
        for _ in range(200):
            v = rng.random(rng.integers(1, 20))
            v[rng.random(v.shape) < 0.5] = 0.0
            out = normalize_per_utterance(v)
            assert np.array_equal(out == 0.0, v == 0.0)

    def test_subtract_mode(self):
        out = normalize_per_utterance(np.array([2.0, 4.0, 0.0]), mode="subtract")
        assert out == pytest.approx([-1.0, 1.0, 0.0])

    def test_subtract_mode_keeps_zero_positions(self, rng):
        v = rng.random(10) + 0.5
        v[[2, 7]] = 0.0
        out = normalize_per_utterance(v, mode="subtract")
        assert out[2] == 0.0 and out[7] == 0.0

    def test_unknown_mode_rejected(self):
        from toucan_prep.errors import ValidationError
        with pytest.raises(ValidationError):
            normalize_per_utterance(np.ones(3), mode="median")


class TestPhoneProsody:
    def test_full_chain(self):
        tokens = [PhonemeToken("a"), PhonemeToken("s"), PhonemeToken.silence()]
        durations = [2, 2, 1]
        pitch = pitch_track([200.0, 210.0, 180.0, 0.0, 0.0])
        energy = energy_track([0.5, 0.5, 0.3, 0.3, 0.01])
        phones = phone_prosody(tokens, durations, pitch, energy)
        assert len(phones) == 3
        # "a" is the only phone keeping pitch, so it normalizes to 1
        assert phones[0].pitch == pytest.approx(1.0)
        assert phones[1].pitch == 0.0
        assert phones[2].pitch == 0.0
        assert phones[2].energy == 0.0
        # nonzero energies have mean 1 after normalization
        nonzero = [p.energy for p in phones if p.energy != 0.0]
        assert np.mean(nonzero) == pytest.approx(1.0)

    def test_token_duration_mismatch(self):
        with pytest.raises(LengthMismatch):
            phone_prosody([PhonemeToken("a")], [1, 1],
                          pitch_track([1.0, 2.0]), energy_track([1.0, 2.0]))
