"""Learn a byte-pair merge table from word counts and segment with it.

In-vocabulary words collapse back to a single piece; unseen words fall
apart into whatever merges still apply. Segmentation always round-trips
through decode_bpe, so no information is lost.
"""

import sys
from pathlib import Path

# keep the demo runnable from a source checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import tempfile

from fstgec import apply_bpe, decode_bpe, learn_bpe, load_merges, save_merges


def main() -> None:
    counts = {
        "low": 5, "lower": 2, "lowest": 6,
        "new": 3, "newer": 6, "newest": 4,
        "wide": 2, "wider": 3, "widest": 5,
    }
    model = learn_bpe(counts, num_merges=12)
    print(f"learned {len(model.merges)} merges:")
    for left, right in model.merges:
        print(f"  {left} + {right}")

    print("\nsegmentations:")
    for word in ("lowest", "newer", "widest", "mildest", "renewing"):
        pieces = apply_bpe(word, model)
        assert decode_bpe(pieces) == [word]
        print(f"  {word:10s} -> {' '.join(pieces)}")

    # merge tables serialize as one merge pair per line
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "merges.txt"
        save_merges(model, path)
        reloaded = load_merges(path)
    assert reloaded.merges == model.merges
    print("\nmerge table round-tripped through disk")


if __name__ == "__main__":
    main()
