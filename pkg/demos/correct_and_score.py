"""Miniature end-to-end run: train, corrupt, correct, score.

Builds every moving part in memory on a toy agreement grammar, then
reports span-level precision, recall, and F0.5 against gold edits.
"""

import sys
from pathlib import Path

# keep the demo runnable from a source checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import random

from fstgec import (
    CascadeResources,
    ConfusionCatalog,
    M2Record,
    PenaltyVector,
    apply_bpe_sentence,
    correct_sentence,
    extract_edits,
    learn_bpe,
    score_corpus,
    train_ngram_lm,
)

SUBJECTS_SG = ["the cat", "the dog", "she", "he"]
SUBJECTS_PL = ["the cats", "the dogs", "they"]
VERBS_SG = ["likes", "sees", "wants", "chases"]
VERBS_PL = ["like", "see", "want", "chase"]
OBJECTS = ["tea", "milk", "the ball", "the mat", "a bone"]

FLIP = dict(zip(VERBS_SG, VERBS_PL)) | dict(zip(VERBS_PL, VERBS_SG))


def sample_sentence(rng: random.Random) -> list[str]:
    if rng.random() < 0.5:
        subj, verb = rng.choice(SUBJECTS_SG), rng.choice(VERBS_SG)
    else:
        subj, verb = rng.choice(SUBJECTS_PL), rng.choice(VERBS_PL)
    return f"{subj} {verb} {rng.choice(OBJECTS)}".split()


def corrupt(tokens: list[str], rng: random.Random) -> list[str]:
    """Flip verb agreement or drop in a stray article."""
    noisy = list(tokens)
    if rng.random() < 0.6:
        spots = [i for i, t in enumerate(noisy) if t in FLIP]
        i = rng.choice(spots)
        noisy[i] = FLIP[noisy[i]]
    else:
        noisy.insert(rng.randrange(len(noisy) + 1), "the")
    return noisy


def main() -> None:
    rng = random.Random(31)
    train = [sample_sentence(rng) for _ in range(800)]

    freqs: dict[str, int] = {}
    for sent in train:
        for word in sent:
            freqs[word] = freqs.get(word, 0) + 1
    bpe = learn_bpe(freqs, num_merges=60)
    lm = train_ngram_lm([apply_bpe_sentence(s, bpe) for s in train], order=3)

    catalog = ConfusionCatalog()
    for wrong, right in FLIP.items():
        catalog.add(wrong, right, "agreement")
    res = CascadeResources(
        deletions=("the", "a"),
        insertions=(),
        confusions=catalog,
        bpe=bpe,
        penalties=PenaltyVector(1.5, 1.0, 2.0),
    )

    gold: list[M2Record] = []
    hyps: list[str] = []
    print("corrections (noisy -> decoded):")
    for _ in range(20):
        target = sample_sentence(rng)
        noisy = corrupt(target, rng)
        fixed = correct_sentence(noisy, res, lm, beam=8)
        gold.append(M2Record(tuple(noisy), {0: extract_edits(noisy, target)}))
        hyps.append(" ".join(fixed))
        mark = "=" if fixed == target else "!"
        print(f"  {mark} {' '.join(noisy):30s} -> {' '.join(fixed)}")

    report = score_corpus(hyps, gold)
    print("\ntp fp fn P R F0.5:", report.line())


if __name__ == "__main__":
    main()
