import numpy as np
import pytest

from toucan_prep.dsp import MelConfig
from toucan_prep.errors import ParseError
from toucan_prep.vad import energy_vad, read_vad_labels, write_vad_labels

SR = 16000
CFG = MelConfig()


class TestEnergyVad:
    def test_silence_all_nonspeech(self):
        labels = energy_vad(np.zeros(SR), SR)
        assert np.all(labels == 0)

    def test_full_scale_tone_all_speech(self):
        t = np.arange(SR) / SR
        labels = energy_vad(np.sin(2 * np.pi * 220 * t), SR)
        assert np.all(labels == 1)

    def test_tone_silence_tone_boundaries(self):
        # flip positions verified against a frame RMS oracle: a frame is
        # "tone" once its window overlaps the tone by any audible amount,
        # which bounds the flip to win/(2*hop) = 2 frames of the boundary
        t = np.arange(SR // 2) / SR
        tone = 0.8 * np.sin(2 * np.pi * 300 * t)
        audio = np.concatenate([tone, np.zeros(SR // 2), tone])
        labels = energy_vad(audio, SR)

        hop, win = CFG.hop_length, CFG.win_length
        slack = win // (2 * hop)  # frames whose window straddles a boundary
        b1 = (SR // 2) // hop          # tone -> silence
        b2 = (SR) // hop               # silence -> tone
        b3 = len(labels)
        assert np.all(labels[:b1 - slack] == 1)
        assert np.all(labels[b1 + slack:b2 - slack] == 0)
        assert np.all(labels[b2 + slack:b3 - slack] == 1)

    def test_deterministic(self, rng):
        audio = 0.5 * rng.standard_normal(SR)
        assert np.array_equal(energy_vad(audio, SR), energy_vad(audio, SR))


class TestLabelFiles:
    def test_round_trip(self, tmp_path):
        labels = {"utt_b": np.array([0, 1, 1, 0], dtype=np.uint8),
                  "utt_a": np.array([1, 1], dtype=np.uint8)}
        path = tmp_path / "vad.tsv"
        write_vad_labels(path, labels)
        loaded = read_vad_labels(path)
        assert set(loaded) == {"utt_a", "utt_b"}
        assert np.array_equal(loaded["utt_b"], labels["utt_b"])

    def test_rejects_non_binary(self, tmp_path):
        path = tmp_path / "vad.tsv"
        path.write_text("utt\t01012\n", encoding="utf-8")
        with pytest.raises(ParseError):
            read_vad_labels(path)
