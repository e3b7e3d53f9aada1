"""Parallel-corpus assembly: filtering, oversampling, and mixing arithmetic.

A training corpus is a flat list of source/target sentence pairs, each
carrying a free-form tag that records which sub-corpus the pair came
from. The helpers here keep corpus order deterministic unless a shuffle
is asked for explicitly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .errors import ParseError

DEFAULT_REAL_TAG = "real"
DEFAULT_SYNTH_TAG = "synth"


@dataclass(frozen=True)
class CorpusPair:
    source: str
    target: str
    tag: str = DEFAULT_REAL_TAG


ParallelCorpus = list[CorpusPair]


def _squeeze(text: str) -> str:
    return " ".join(text.split())


def remove_identities(corpus: Sequence[CorpusPair],
                      tags: Iterable[str] | None = None) -> ParallelCorpus:
    """Drop pairs whose source and target match after whitespace collapse.

    Only pairs carrying one of the given tags are eligible for removal;
    tags=None makes every pair eligible. Non-identity pairs always pass
    through untouched.
    """
    eligible = None if tags is None else set(tags)
    kept: ParallelCorpus = []
    for pair in corpus:
        if eligible is None or pair.tag in eligible:
            if _squeeze(pair.source) == _squeeze(pair.target):
                continue
        kept.append(pair)
    return kept


def oversample(corpus: Sequence[CorpusPair], tag: str, rate: int) -> ParallelCorpus:
    """Duplicate pairs with the tag so they appear rate times in total.

    The original corpus comes first in its own order, followed by whole
    duplicate blocks of the tagged pairs. Pairs with other tags are
    never duplicated.
    """
    if not isinstance(rate, int) or isinstance(rate, bool):
        raise ValueError("oversampling rate must be an integer")
    if rate < 1:
        raise ValueError("oversampling rate must be >= 1")
    out = list(corpus)
    tagged = [pair for pair in corpus if pair.tag == tag]
    for _ in range(rate - 1):
        out.extend(tagged)
    return out


def real_synth_ratio(n_real: int, n_synth: int) -> str:
    """Real-to-synthetic mixing ratio as "1:x" with x to one decimal."""
    if n_real <= 0:
        raise ValueError("ratio needs a positive real-pair count")
    if n_synth < 0:
        raise ValueError("synthetic-pair count cannot be negative")
    return f"1:{round(n_synth / n_real, 1):.1f}"


def tag_ratio(corpus: Sequence[CorpusPair], tag: str) -> str:
    """Tagged-to-rest balance as "1:n", n the nearest whole number."""
    tagged = sum(1 for pair in corpus if pair.tag == tag)
    if tagged == 0:
        raise ValueError(f"no pairs tagged {tag!r}")
    rest = len(corpus) - tagged
    return f"1:{round(rest / tagged)}"


def count_by_tag(corpus: Sequence[CorpusPair]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for pair in corpus:
        counts[pair.tag] = counts.get(pair.tag, 0) + 1
    return counts


def assemble_training_set(real: Sequence[CorpusPair],
                          synth: Sequence[CorpusPair],
                          identity_tags: Iterable[str] = (),
                          oversample_tag: str | None = None,
                          oversample_rate: int = 1,
                          real_rate: int = 1,
                          shuffle: bool = False,
                          seed: int | None = None) -> ParallelCorpus:
    """Filter and reweight the real pairs, then append the synthetic ones.

    Stages, in order: identity removal restricted to identity_tags, then
    in-domain oversampling of oversample_tag, then real_rate whole copies
    of the real part, then the synthetic pairs unchanged (identities in
    synth are kept). Output size is len(real_part) * real_rate +
    len(synth). Shuffling, when requested, is seeded so runs repeat.
    """
    if real_rate < 1:
        raise ValueError("real_rate must be >= 1")
    real_part = remove_identities(real, identity_tags)
    if oversample_tag is not None:
        real_part = oversample(real_part, oversample_tag, oversample_rate)
    mixed: ParallelCorpus = []
    for _ in range(real_rate):
        mixed.extend(real_part)
    mixed.extend(synth)
    if shuffle:
        random.Random(seed).shuffle(mixed)
    return mixed


def write_corpus_tsv(corpus: Sequence[CorpusPair], path_or_file) -> None:
    """One pair per line: source, target, tag, TAB-separated."""
    if hasattr(path_or_file, "write"):
        _write_tsv(corpus, path_or_file)
        return
    with open(path_or_file, "w", encoding="utf-8") as fh:
        _write_tsv(corpus, fh)


def _write_tsv(corpus: Sequence[CorpusPair], fh: IO[str]) -> None:
    for pair in corpus:
        for field, name in ((pair.source, "source"), (pair.target, "target"),
                            (pair.tag, "tag")):
            if "\t" in field or "\n" in field:
                raise ValueError(f"{name} field contains a TAB or newline")
        fh.write(f"{pair.source}\t{pair.target}\t{pair.tag}\n")


def read_corpus_tsv(path_or_file) -> ParallelCorpus:
    if hasattr(path_or_file, "read"):
        return parse_corpus_tsv(path_or_file.read())
    with open(path_or_file, "r", encoding="utf-8") as fh:
        return parse_corpus_tsv(fh.read())


def parse_corpus_tsv(text: str) -> ParallelCorpus:
    corpus: ParallelCorpus = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(
                f"expected 3 TAB-separated fields, got {len(fields)}",
                line=lineno)
        corpus.append(CorpusPair(fields[0], fields[1], fields[2]))
    return corpus
