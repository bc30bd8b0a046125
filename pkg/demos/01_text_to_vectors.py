"""
From raw text to articulatory vectors
=====================================

The front-end turns messy text into a clean phoneme-token stream and a
binary feature matrix. Every step is deterministic: same text in, same
bytes out.
"""
import numpy as np

from toucan_prep import LexiconProvider, clean_text, text_to_vectors
from toucan_prep.phonemes import FEATURE_INDEX, FEATURE_ORDER

# Typographic clutter disappears before phonemization.
raw = "« Bonjour »  le monde — d’accord !"
print("raw:    ", repr(raw))
print("cleaned:", repr(clean_text(raw)))

# A tiny lexicon stands in for a full phonemizer; the external-command
# adapter accepts any IPA-emitting binary with the same call contract.
g2p = LexiconProvider({
    "bonjour": "bɔ̃ʒuʁ",
    "le": "lə",
    "monde": "mɔ̃ːd",
    "d'accord": "dakɔʁ",
    "d'": "d",
    "accord": "akɔʁ",
})

result = text_to_vectors("Bonjour le monde, d'accord !", g2p)
print("\nIPA:", result.ipa)
print(f"{len(result.tokens)} tokens -> vectors of width {result.vectors.shape[1]}")

for token, vector in zip(result.tokens, result.vectors):
    features = [name for name in FEATURE_ORDER if vector[FEATURE_INDEX[name]]]
    flag = "silence" if token.is_silence else ("long" if token.lengthened else "")
    print(f"  {token.symbol:>3} w{token.word_index} {flag:<8}", ", ".join(features))

# Nonsegmental marks change exactly one dimension of one token.
plain = text_to_vectors("monde", g2p).vectors
g2p_stressed = LexiconProvider({"monde": "ˈmɔ̃d"})
stressed = text_to_vectors("monde", g2p_stressed).vectors
delta = np.argwhere(plain != stressed)
print("\nstress mark flips exactly:", delta.tolist(),
      "->", FEATURE_ORDER[delta[0][1]])
