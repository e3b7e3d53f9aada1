"""Byte-pair encoding at desk scale.

Words are learned as character sequences followed by a standalone
end-of-word symbol; merges may involve that symbol. Non-final pieces of
an encoded word carry the continuation marker "@@", and decoding strips
it back off. Applying a model replays its merges in learned order, which
reproduces learn-time segmentations exactly and makes piece counts
non-increasing in the number of merges.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ParseError

END_OF_WORD = "</w>"
CONTINUATION = "@@"

DEFAULT_NUM_MERGES = 500


@dataclass(frozen=True)
class BpeModel:
    merges: tuple[tuple[str, str], ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def num_merges(self) -> int:
        return len(self.merges)


def _word_symbols(word: str) -> tuple[str, ...]:
    return tuple(word) + (END_OF_WORD,)


def _merge_once(symbols: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    """Replace non-overlapping occurrences of pair, scanning left to right."""
    left, right = pair
    out = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def learn_bpe(word_freqs: Mapping[str, int], num_merges: int) -> BpeModel:
    """Learn merges from a word -> frequency table.

    Each round merges the most frequent adjacent pair, breaking ties
    lexicographically, and stops early once no pair occurs at least twice.
    """
    if num_merges < 0:
        raise ValueError("num_merges must be >= 0")
    vocab: dict[tuple[str, ...], int] = {}
    for word, freq in word_freqs.items():
        if not word:
            raise ValueError("empty word in frequency table")
        if freq > 0:
            vocab[_word_symbols(word)] = vocab.get(_word_symbols(word), 0) + freq
    merges: list[tuple[str, str]] = []
    for _ in range(num_merges):
        pairs: Counter[tuple[str, str]] = Counter()
        for symbols, freq in vocab.items():
            for i in range(len(symbols) - 1):
                pairs[(symbols[i], symbols[i + 1])] += freq
        if not pairs:
            break
        best = min(pairs.items(), key=lambda kv: (-kv[1], kv[0]))
        if best[1] < 2:
            break
        merges.append(best[0])
        vocab = {_merge_once(symbols, best[0]): freq
                 for symbols, freq in vocab.items()}
    return BpeModel(tuple(merges))


def apply_bpe(word: str, model: BpeModel) -> list[str]:
    """Segment one word into pieces, marking non-final pieces with "@@"."""
    if not word:
        raise ValueError("cannot segment an empty word")
    cached = model._cache.get(word)
    if cached is not None:
        return list(cached)
    symbols = _word_symbols(word)
    for pair in model.merges:
        if len(symbols) == 1:
            break
        symbols = _merge_once(symbols, pair)
    pieces = list(symbols)
    if pieces[-1] == END_OF_WORD:
        pieces.pop()
    elif pieces[-1].endswith(END_OF_WORD):
        pieces[-1] = pieces[-1][: -len(END_OF_WORD)]
    pieces = [p + CONTINUATION for p in pieces[:-1]] + [pieces[-1]]
    model._cache[word] = tuple(pieces)
    return pieces


def apply_bpe_sentence(tokens: Iterable[str], model: BpeModel) -> list[str]:
    out: list[str] = []
    for tok in tokens:
        out.extend(apply_bpe(tok, model))
    return out


def decode_bpe(tokens: Iterable[str]) -> list[str]:
    """Invert apply_bpe over a sentence: glue marked pieces back into words."""
    words: list[str] = []
    buffer = ""
    for tok in tokens:
        if tok.endswith(CONTINUATION):
            buffer += tok[: -len(CONTINUATION)]
        else:
            words.append(buffer + tok)
            buffer = ""
    if buffer:
        raise ParseError(f"dangling continuation marker before end of sentence: "
                         f"{buffer!r}")
    return words


def save_merges(model: BpeModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for left, right in model.merges:
            fh.write(f"{left} {right}\n")


def load_merges(path) -> BpeModel:
    merges: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split(" ")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ParseError("expected two space-separated merge symbols", lineno)
            merges.append((parts[0], parts[1]))
    return BpeModel(tuple(merges))


def count_word_freqs(sentences: Iterable[Iterable[str]]) -> dict[str, int]:
    """Token frequency table over a tokenized corpus."""
    freqs: Counter[str] = Counter()
    for sent in sentences:
        freqs.update(sent)
    return dict(freqs)
