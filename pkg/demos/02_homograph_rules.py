"""
French homograph resolution
===========================

Words spelled alike but pronounced differently are resolved from POS tags
(coarse first, then morphology-bearing extended tags, then a default), and
the word "plus" gets its own grammar-rule cascade: negation context, then
liaison with the following adjective or adverb.
"""
from toucan_prep import annotate_text, evaluate_accuracy, load_gold_set
from toucan_prep.homographs import default_dictionary
from toucan_prep.phonemes import _data_path
from toucan_prep.tagging import FilePosProvider, default_unigram_tagger

dictionary = default_dictionary()
tagger = default_unigram_tagger()
print(f"starter dictionary: {len(dictionary)} homographs\n")

sentences = [
    "Les fils du roi sont partis .",        # fils resolved from morphology
    "Nous adoptions un chien .",            # verb reading of adoptions
    "Je ne veux plus partir .",             # plus under negation
    "Il est plus grand que moi .",          # plus + consonant-initial ADJ
    "C'est plus important .",               # plus + vowel-initial ADJ (liaison)
    "Deux plus deux font quatre .",         # plus with no exception
]
for text in sentences:
    records = annotate_text(text, tagger, dictionary)
    spliced = ", ".join(
        f"{r.surface}->{r.resolution.pronunciation} ({r.resolution.method.value})"
        for r in records)
    print(f"{text:<38} {spliced}")

# The packaged gold suite scores the whole resolver. Oracle tags give the
# rule system's ceiling; the hermetic unigram tagger shows what a crude
# tagger costs.
gold = load_gold_set(_data_path("gold_homographs.tsv"))
oracle = FilePosProvider.from_file(_data_path("gold_homographs_tags.tsv"))
for name, provider in [("oracle tags", oracle), ("unigram tagger", tagger)]:
    result = evaluate_accuracy(gold, provider, dictionary)
    print(f"\n{name}: accuracy {result['accuracy']:.3f} "
          f"on {result['total']} items")
    for method, counts in sorted(result["by_method"].items()):
        print(f"   {method:<17} correct {counts['correct']:>3} "
              f"wrong {counts['wrong']:>3}")
