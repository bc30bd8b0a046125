"""
The whole pipeline over a manifest
==================================

Builds the bundled 20-utterance synthetic corpus in a scratch directory
and drives the four CLI stages over it: phonemize, align, prosody, prep.
Everything is deterministic; run it twice and the manifests are
byte-identical.
"""
import json
import tempfile
from pathlib import Path

from toucan_prep import cli
from toucan_prep.synthetic import build_corpus

work = Path(tempfile.mkdtemp(prefix="toucan_prep_demo_"))
paths = build_corpus(work, seed=0)
print("corpus in", work)

cfg = ["--config", str(paths["config"])]
stages = [
    ("phonemize", ["phonemize", "--manifest", str(paths["manifest"]),
                   "--output", str(work / "m1.jsonl")]),
    ("align", ["align", "--posteriograms", str(paths["posteriograms"]),
               "--manifest", str(work / "m1.jsonl"),
               "--output", str(work / "durations.jsonl"),
               "--report", str(work / "skiprate.json"),
               "--update-manifest", str(work / "m2.jsonl")]),
    ("prosody", ["prosody", "--manifest", str(work / "m2.jsonl"),
                 "--output", str(work / "m3.jsonl"),
                 "--features-dir", str(work / "features")]),
    ("prep", ["prep", "--manifest", str(work / "m3.jsonl"),
              "--output", str(work / "final.jsonl"),
              "--validate-pauses", "--loudness",
              "--audio-out", str(work / "normalized"), "--join",
              "--report", str(work / "prep_report.json")]),
]
for name, argv in stages:
    code = cli.main(cfg + argv)
    print(f"  {name:<10} exit {code}")
    assert code == 0

rows = [json.loads(line) for line in (work / "final.jsonl").open()]
print(f"\nfinal manifest: {len(rows)} rows "
      f"({sum(r.get('is_joint', False) for r in rows)} joints)")
sample = next(r for r in rows if not r.get("is_joint"))
print("sample row keys:", sorted(sample))
print("  ", sample["utt_id"], "->", sample["phonemes"][:40], "...")
print("  durations:", sample["durations"][:8], "...")
print("  loudness:", sample["loudness_lufs"], "LUFS")
print("\nskip-rate report:", (work / "skiprate.json").read_text().strip())
