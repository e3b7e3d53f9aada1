"""Corpus assembly arithmetic: filter identities, oversample, mix.

Training pairs carry a tag naming their sub-corpus. The helpers below
drop unchanged pairs, boost a scarce in-domain set by duplication, and
report mixing proportions as rounded "1:n" strings.
"""

import sys
from pathlib import Path

# keep the demo runnable from a source checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import random

from fstgec import (
    CorpusPair,
    assemble_training_set,
    count_by_tag,
    oversample,
    real_synth_ratio,
    remove_identities,
    tag_ratio,
)


def fake_corpus(tag: str, total: int, changed: int, rng: random.Random) -> list[CorpusPair]:
    pairs = []
    for i in range(total):
        src = f"sentence {i} of {tag}"
        tgt = src if i >= changed else src + " fixed"
        pairs.append(CorpusPair(src, tgt, tag))
    rng.shuffle(pairs)
    return pairs


def main() -> None:
    rng = random.Random(5)
    real = (fake_corpus("essays", 300, 180, rng)
            + fake_corpus("forum", 900, 420, rng)
            + fake_corpus("notes", 80, 60, rng))
    synth = fake_corpus("generated", 4000, 4000, rng)

    print("tag counts:", count_by_tag(real))
    print("notes share of real data:", tag_ratio(real, "notes"))

    filtered = remove_identities(real)
    print(f"\nidentity filter: {len(real)} -> {len(filtered)} pairs")

    boosted = oversample(filtered, "notes", rate=4)
    print(f"notes x4 oversample: {len(filtered)} -> {len(boosted)} pairs,",
          "share now", tag_ratio(boosted, "notes"))

    for real_rate in (1, 2, 4):
        mix = assemble_training_set(
            real=boosted, synth=synth,
            oversample_tag=None, real_rate=real_rate,
            shuffle=True, seed=13)
        n_real = sum(1 for p in mix if p.tag != "generated")
        n_synth = len(mix) - n_real
        print(f"\nreal x{real_rate}: {len(mix)} pairs total,",
              f"real:synth = {real_synth_ratio(n_real, n_synth)}"
              f" ({n_real} real, {n_synth} synthetic)")


if __name__ == "__main__":
    main()
