"""Inspect the correction candidates built for one noisy sentence.

The hypothesis space is a weighted acceptor over subword tokens. Every
path is one candidate rewrite of the input: keeping a token is free,
deleting a listed filler, swapping in a confusable word, or inserting
one extra token each pays its own penalty.
"""

import sys
from pathlib import Path

# keep the demo runnable from a source checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fstgec import (
    BpeModel,
    CascadeResources,
    ConfusionCatalog,
    PenaltyVector,
    accept_cost,
    apply_bpe_sentence,
    build_hypothesis_space,
    decode_bpe,
    shortest_path,
)


def main() -> None:
    catalog = ConfusionCatalog()
    catalog.add("like", "likes", "agreement")
    catalog.add("likes", "like", "agreement")

    res = CascadeResources(
        deletions=("the", "a"),
        insertions=("the",),
        confusions=catalog,
        bpe=BpeModel(()),          # no merges learned: words split to characters
        penalties=PenaltyVector(lambda_del=1.0, lambda_sub=0.75, lambda_ins=1.5),
    )

    sentence = ["she", "like", "the", "tea"]
    space = build_hypothesis_space(sentence, res)
    print("input:", " ".join(sentence))
    print("space:", space)

    identity = apply_bpe_sentence(sentence, res.bpe)
    print("\nidentity candidate costs", accept_cost(space, identity))

    print("\ncheapest candidates (subword paths, decoded back to words):")
    for text, cost in shortest_path(space, 8):
        words = " ".join(decode_bpe(text.split()))
        print(f"  {cost:5.2f}  {words:28s} {text}")


if __name__ == "__main__":
    main()
