"""
Corpus preparation rules
========================

Loudness measurement and normalization, joint-utterance construction under
the 15-second cap, loss-ranked cleaning, and the final 24 kHz -> 48 kHz
int16 output chain.
"""
import numpy as np

from toucan_prep import (
    UtteranceRecord,
    clean_by_loss,
    finalize_output,
    make_joint_utterances,
    measure_loudness,
    normalize_loudness,
)

SR = 16000

# --- loudness ---------------------------------------------------------
t = np.arange(2 * SR) / SR
tone = np.sin(2 * np.pi * 997.0 * t)
print(f"full-scale 997 Hz sine: {measure_loudness(tone, SR):.2f} LUFS")
for target in (-30.0, -29.0, -33.0):
    out = normalize_loudness(tone, target, SR)
    print(f"  normalized to {target:>6.1f} -> re-measured "
          f"{measure_loudness(out, SR):.2f}")

# --- joining ----------------------------------------------------------
records = [UtteranceRecord(f"u{i}", "chapter.wav", 0.0, d, f"sentence {i}")
           for i, d in enumerate([6.0, 5.0, 4.0, 2.0])]
print("\nutterance durations:", [r.duration for r in records])
for joint in make_joint_utterances(records):
    print(f"  {joint.utt_id}: {joint.source_ids} -> {joint.duration:.2f}s "
          "(0.22s pauses included)")

# --- cleaning ---------------------------------------------------------
losses = {f"u{i:02d}": 1.0 + 0.01 * i for i in range(20)}
losses["u99"] = 3.5  # one broken sample towers over the rest
report = clean_by_loss(losses)
print(f"\ncleaning removed {list(report.removed_ids)}; "
      f"kept {report.kept_count} samples")
print("stop trace (top loss vs mean of next 10):",
      [(round(a, 3), round(b, 3)) for a, b in report.threshold_trace])

# --- output chain -----------------------------------------------------
synth = 0.4 * np.sin(2 * np.pi * 440.0 * np.arange(24000) / 24000)
pcm = finalize_output(synth)
print(f"\n24 kHz synth of {len(synth)} samples -> {len(pcm)} int16 samples "
      f"@48 kHz, peak {pcm.max()}")
