"""Train a backoff n-gram model, inspect costs, round-trip through ARPA.

Costs are negative natural-log probabilities, so smaller is better and
they compose additively with the edit penalties during decoding.
"""

import sys
from pathlib import Path

# keep the demo runnable from a source checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import random
import tempfile

from fstgec import load_arpa, save_arpa, train_ngram_lm


def main() -> None:
    rng = random.Random(7)
    subjects = ["she", "he", "the cat", "the dog"]
    verbs = ["likes", "sees", "wants"]
    objects = ["tea", "milk", "the ball", "the mat"]

    corpus = []
    for _ in range(400):
        sent = f"{rng.choice(subjects)} {rng.choice(verbs)} {rng.choice(objects)}"
        corpus.append(sent.split())

    lm = train_ngram_lm(corpus, order=3)
    print(f"trained order-{lm.order} model over {len(lm.vocab)} word types")

    probes = [
        "she likes tea",
        "the cat sees the ball",
        "tea likes she",          # grammatical word salad
        "she likes coffee",       # unseen word
    ]
    print("\nsentence costs (lower is more fluent):")
    for text in probes:
        cost = lm.sentence_cost(text.split())
        print(f"  {cost:8.3f}  {text}")

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "model.arpa"
        save_arpa(lm, path)
        reloaded = load_arpa(path)
        size = path.stat().st_size
    for text in probes:
        a = lm.sentence_cost(text.split())
        b = reloaded.sentence_cost(text.split())
        assert abs(a - b) < 1e-9, (text, a, b)
    print(f"\nARPA file ({size} bytes) reloads to identical costs")


if __name__ == "__main__":
    main()
