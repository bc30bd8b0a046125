import numpy as np
import pytest

from toucan_prep.errors import TooShort
from toucan_prep.loudness import measure_loudness, normalize_loudness

SR = 16000


def sine(freq=997.0, seconds=2.0, amplitude=1.0, sr=SR):
    t = np.arange(int(seconds * sr)) / sr
    return amplitude * np.sin(2 * np.pi * freq * t)


class TestMeasure:
    def test_full_scale_calibration_tone(self):
        assert measure_loudness(sine(), SR) == pytest.approx(-3.01, abs=0.1)

    def test_calibration_tone_at_48k(self):
        assert measure_loudness(sine(sr=48000), 48000) == pytest.approx(-3.01, abs=0.05)

    def test_half_amplitude_is_6dB_lower(self):
        full = measure_loudness(sine(), SR)
        half = measure_loudness(sine(amplitude=0.5), SR)
        assert full - half == pytest.approx(20 * np.log10(2.0), abs=1e-6)

    def test_too_short(self):
        with pytest.raises(TooShort):
            measure_loudness(sine(seconds=0.2), SR)

    def test_silence_is_minus_infinity(self):
        assert measure_loudness(np.zeros(SR), SR) == float("-inf")


class TestNormalize:
    def test_gain_arithmetic(self):
        out = normalize_loudness(sine(), -30.0, SR)
        expected_gain = 10 ** ((-30.0 - measure_loudness(sine(), SR)) / 20.0)
        assert np.max(np.abs(out)) == pytest.approx(expected_gain, rel=1e-6)

    def test_already_at_target_keeps_unity_gain(self):
        audio = sine(amplitude=0.3)
        level = measure_loudness(audio, SR)
        out = normalize_loudness(audio, level, SR)
        assert np.allclose(out, audio, atol=1e-9)

    def test_speaker_targets_differ_by_4dB(self, rng):
        audio = 0.3 * rng.standard_normal(SR)
        neb = normalize_loudness(audio, -29.0, SR)
        ad = normalize_loudness(audio, -33.0, SR)
        ratio_db = 20 * np.log10(np.max(np.abs(neb)) / np.max(np.abs(ad)))
        assert ratio_db == pytest.approx(4.0, abs=1e-9)

    def test_round_trip_sample(self, rng):
        for _ in range(100):
            n = int(rng.integers(SR // 2, 2 * SR))
            audio = rng.uniform(0.05, 0.8) * rng.standard_normal(n)
            out = normalize_loudness(audio, -30.0, SR)
            assert measure_loudness(out, SR) == pytest.approx(-30.0, abs=0.1)

    def test_peak_warning(self, rng):
        quiet = 0.01 * rng.standard_normal(SR)
        with pytest.warns(UserWarning):
            normalize_loudness(quiet, -3.0, SR)

    def test_peak_safe_rescales(self, rng):
        quiet = 0.01 * rng.standard_normal(SR)
        out = normalize_loudness(quiet, -3.0, SR, peak_safe=True)
        assert np.max(np.abs(out)) <= 0.999 + 1e-12


class TestRmsDbfsMode:
    def test_full_scale_sine_is_minus_3(self):
        from toucan_prep.loudness import measure_rms_dbfs
        assert measure_rms_dbfs(sine()) == pytest.approx(-3.0103, abs=0.01)

    def test_normalize_hits_rms_target(self, rng):
        from toucan_prep.loudness import measure_rms_dbfs, normalize_rms_dbfs
        audio = 0.2 * rng.standard_normal(SR)
        out = normalize_rms_dbfs(audio, -30.0)
        assert measure_rms_dbfs(out) == pytest.approx(-30.0, abs=1e-9)
