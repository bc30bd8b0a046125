import numpy as np
import pytest

from toucan_prep.dsp import (
    MelConfig,
    extract_energy,
    extract_pitch,
    mel_spectrogram,
)
from toucan_prep.errors import EmptyAudio, SampleRateMismatch, ValidationError

SR = 16000


def tone(freq, seconds=1.0, amplitude=1.0, sr=SR):
    t = np.arange(int(seconds * sr)) / sr
    return amplitude * np.sin(2 * np.pi * freq * t)


def oracle_mel(audio, cfg):
    """Brute-force reference: explicit DFT matrix + interp-built filterbank."""
    pad = cfg.win_length // 2
    padded = np.pad(audio, pad, mode="reflect")
    n = cfg.win_length
    n_frames = 1 + len(audio) // cfg.hop_length
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    bins = np.arange(n // 2 + 1)
    dft = np.exp(-2j * np.pi * np.outer(bins, np.arange(n)) / n)

    def to_mel(f):
        return 2595.0 * np.log10(1.0 + f / 700.0)

    def to_hz(m):
        return 700.0 * (10.0 ** (m / 2595.0) - 1.0)

    points = to_hz(np.linspace(to_mel(cfg.fmin), to_mel(cfg.fmax), cfg.n_mels + 2))
    freqs = bins * cfg.sample_rate / n
    fbank = np.stack([
        np.interp(freqs, [points[m], points[m + 1], points[m + 2]],
                  [0.0, 1.0, 0.0], left=0.0, right=0.0)
        for m in range(cfg.n_mels)
    ])
    out = np.zeros((n_frames, cfg.n_mels))
    for t in range(n_frames):
        frame = padded[t * cfg.hop_length:t * cfg.hop_length + n] * window
        spectrum = np.abs(dft @ frame)
        out[t] = np.log10(np.maximum(fbank @ spectrum, cfg.log_floor))
    return out


class TestMelSpectrogram:
    def test_silence_hits_log_floor(self):
        mel = mel_spectrogram(np.zeros(SR), SR)
        assert mel.shape == (63, 80)
        assert np.all(mel == -10.0)

    def test_frame_count_convention(self):
        cfg = MelConfig()
        for n in (4000, 16000, 16384, 12345):
            mel = mel_spectrogram(np.random.default_rng(0).standard_normal(n), SR)
            assert mel.shape[0] == 1 + n // cfg.hop_length

    def test_pure_tone_column_argmax(self):
        mel = mel_spectrogram(tone(1000), SR)
        peaks = mel.argmax(axis=1)
        interior = peaks[2:-2]
        assert np.ptp(interior) <= 1  # constant up to one bin

    def test_deterministic(self, rng):
        audio = rng.standard_normal(SR)
        a = mel_spectrogram(audio, SR)
        b = mel_spectrogram(audio, SR)
        assert np.array_equal(a, b)

    def test_matches_brute_force_oracle(self, rng):
        cfg = MelConfig()
        for _ in range(3):
            audio = rng.uniform(0.1, 0.8) * rng.standard_normal(SR)
            ours = mel_spectrogram(audio, SR, cfg)
            reference = oracle_mel(audio, cfg)
            assert np.max(np.abs(ours - reference)) <= 1e-4

    def test_sample_rate_mismatch(self):
        with pytest.raises(SampleRateMismatch):
            mel_spectrogram(np.zeros(SR), 22050)

    def test_empty_audio(self):
        with pytest.raises(EmptyAudio):
            mel_spectrogram(np.array([]), SR)

    def test_bad_config_rejected(self):
        with pytest.raises(ValidationError):
            MelConfig(fmax=9000.0)
        with pytest.raises(ValidationError):
            MelConfig(hop_length=2048)


class TestPitch:
    def test_pure_tone(self):
        track = extract_pitch(tone(220, amplitude=0.5), SR)
        interior = track.values[4:-4]
        assert np.all(interior > 0)
        assert np.all(np.abs(interior - 220.0) <= 2.0)

    def test_low_noise_mostly_unvoiced(self, rng):
        noise = 0.02 * rng.standard_normal(SR)
        track = extract_pitch(noise, SR)
        assert np.mean(track.values == 0.0) >= 0.9

    def test_silence_all_zero(self):
        track = extract_pitch(np.zeros(SR), SR)
        assert np.all(track.values == 0.0)

    def test_search_range_respected(self):
        track = extract_pitch(tone(150, amplitude=0.4), SR,
                              fmin=60.0, fmax=400.0)
        voiced = track.values[track.values > 0]
        assert np.all((voiced >= 60.0) & (voiced <= 400.0))


class TestEnergy:
    def test_constant_input_matches_hann_integral(self):
        # RMS of a Hann-windowed constant: sqrt(mean(hann^2)) = sqrt(3/8)
        track = extract_energy(np.ones(SR), SR)
        assert np.allclose(track.values, np.sqrt(3.0 / 8.0), atol=1e-12)

    def test_silence_zero(self):
        track = extract_energy(np.zeros(SR), SR)
        assert np.all(track.values == 0.0)

    def test_linear_in_amplitude(self, rng):
        audio = rng.standard_normal(SR)
        single = extract_energy(audio, SR).values
        double = extract_energy(2.0 * audio, SR).values
        assert np.allclose(double, 2.0 * single)


class TestFrameBookkeeping:
    def test_all_tracks_share_the_grid(self, rng):
        for _ in range(5):
            n = int(rng.integers(2000, 40000))
            audio = 0.3 * rng.standard_normal(n)
            mel = mel_spectrogram(audio, SR)
            pitch = extract_pitch(audio, SR)
            energy = extract_energy(audio, SR)
            assert mel.shape[0] == len(pitch) == len(energy)
