"""
Frame tracks to phone-level prosody
===================================

Pitch and energy are extracted on the same frame grid as the log-mel
spectrogram, averaged per phone using alignment durations, zeroed where
pitch is meaningless, and normalized per utterance so the curves become
speaker independent.
"""
import numpy as np

from toucan_prep import (
    MelConfig,
    extract_energy,
    extract_pitch,
    mel_spectrogram,
)
from toucan_prep.phonemes import PhonemeToken
from toucan_prep.prosody import phone_prosody

SR = 16000
cfg = MelConfig()
rng = np.random.default_rng(0)

# Synthesize "a s a ~": vowel, voiceless fricative, vowel, pause.
tokens = [PhonemeToken("a"), PhonemeToken("s"),
          PhonemeToken("a"), PhonemeToken.silence()]
durations = [20, 12, 20, 11]


def tone(freq, frames):
    t = np.arange(frames * cfg.hop_length) / SR
    return 0.3 * np.sin(2 * np.pi * freq * t)


pieces = [tone(180, 20), 0.1 * rng.standard_normal(12 * cfg.hop_length),
          tone(240, 20), np.zeros(11 * cfg.hop_length)]
audio = np.concatenate(pieces)[:-cfg.hop_length]

mel = mel_spectrogram(audio, SR, cfg)
pitch = extract_pitch(audio, SR, cfg)
energy = extract_energy(audio, SR, cfg)
print(f"audio {len(audio)/SR:.2f}s -> mel {mel.shape}, "
      f"pitch/energy tracks of {len(pitch)} frames")
print("voiced frames:", int(np.sum(pitch.values > 0)), "of", len(pitch))

phones = phone_prosody(tokens, durations, pitch, energy)
print(f"\n{'phone':>6} {'frames':>6} {'pitch':>7} {'energy':>7}")
for token, p in zip(tokens, phones):
    print(f"{token.symbol:>6} {p.duration_frames:>6} "
          f"{p.pitch:>7.3f} {p.energy:>7.3f}")

print("\nthe fricative keeps energy but loses pitch; the pause loses both;")
print("nonzero values average to 1 after per-utterance normalization:")
nz = [p.pitch for p in phones if p.pitch]
print("  mean of nonzero pitch:", round(float(np.mean(nz)), 6))
