"""Substitution candidate inventories and where they come from.

A catalog maps an observed word to the ordered candidate words it may be
rewritten to, with a source tag per (word, candidate) pair so merged
catalogs remember which inventory proposed what.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ParseError
from .scoring import EditKind, M2Record

DEFAULT_MIN_COUNT = 6


@dataclass
class ConfusionCatalog:
    # word -> candidate -> set of source tags; dicts keep insertion order
    entries: dict[str, dict[str, set[str]]] = field(default_factory=dict)

    def add(self, word: str, candidate: str, tag: str) -> None:
        if candidate == word:
            return
        self.entries.setdefault(word, {}).setdefault(candidate, set()).add(tag)

    def candidates(self, word: str) -> list[str]:
        return list(self.entries.get(word, ()))

    def tags(self, word: str, candidate: str) -> frozenset[str]:
        return frozenset(self.entries.get(word, {}).get(candidate, ()))

    def words(self) -> list[str]:
        return list(self.entries)

    def __len__(self) -> int:
        return sum(len(c) for c in self.entries.values())

    def __contains__(self, word: str) -> bool:
        return word in self.entries


def merge_catalogs(catalogs: Iterable[ConfusionCatalog]) -> ConfusionCatalog:
    """Union of catalogs; candidate order follows first appearance."""
    out = ConfusionCatalog()
    for cat in catalogs:
        for word, cands in cat.entries.items():
            for cand, tags in cands.items():
                for tag in sorted(tags):
                    out.add(word, cand, tag)
    return out


def load_confusion_tsv(path, tag: str = "manual") -> ConfusionCatalog:
    """Read `word<TAB>cand1<TAB>cand2...` lines into a catalog.

    Lines without a tab are malformed; repeated words merge; a candidate
    equal to its word is dropped.
    """
    cat = ConfusionCatalog()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise ParseError("expected word<TAB>candidates", lineno)
            parts = [p for p in line.split("\t") if p]
            word = parts[0]
            for cand in parts[1:]:
                cat.add(word, cand, tag)
    return cat


def load_lexicon(path) -> frozenset[str]:
    """One known word per line."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            word = raw.strip()
            if word:
                words.add(word)
    return frozenset(words)


def damerau_levenshtein(a: str, b: str) -> int:
    """Edit distance with adjacent transposition (optimal string alignment)."""
    n, m = len(a), len(b)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
            if (i > 1 and j > 1 and a[i - 1] == b[j - 2]
                    and a[i - 2] == b[j - 1]):
                best = min(best, d[i - 2][j - 2] + 1)
            d[i][j] = best
    return d[n][m]


def generate_spell_candidates(word: str, lexicon: frozenset[str] | set[str],
                              max_distance: int = 1) -> list[str]:
    """Lexicon words within edit distance max_distance of word.

    The word itself is excluded; candidates are ordered by distance, then
    lexicographically.
    """
    if max_distance not in (1, 2):
        raise ValueError("max_distance must be 1 or 2")
    scored = []
    for cand in lexicon:
        if cand == word or abs(len(cand) - len(word)) > max_distance:
            continue
        dist = damerau_levenshtein(word, cand)
        if dist <= max_distance:
            scored.append((dist, cand))
    return [cand for _, cand in sorted(scored)]


def spell_candidates_catalog(words: Iterable[str],
                             lexicon: frozenset[str] | set[str],
                             max_distance: int = 1,
                             tag: str = "spell") -> ConfusionCatalog:
    """Spell candidates for the out-of-lexicon words among `words`."""
    cat = ConfusionCatalog()
    for word in words:
        if word in lexicon:
            continue
        for cand in generate_spell_candidates(word, lexicon, max_distance):
            cat.add(word, cand, tag)
    return cat


# -- inventories mined from annotated dev data ---------------------------


def extract_dev_substitutions(records: Sequence[M2Record],
                              min_count: int = DEFAULT_MIN_COUNT,
                              tag: str = "dev") -> ConfusionCatalog:
    """Single-token replacements seen at least min_count times.

    Counts (source token, replacement token) pairs over each record's
    first annotator and keeps the frequent ones.
    """
    pairs: Counter[tuple[str, str]] = Counter()
    for rec in records:
        for e in rec.first_annotator_edits():
            if (e.kind is EditKind.REPLACEMENT and e.end - e.start == 1
                    and len(e.replacement) == 1):
                pairs[(rec.source[e.start], e.replacement[0])] += 1
    cat = ConfusionCatalog()
    for (src, dst), count in sorted(pairs.items(),
                                    key=lambda kv: (-kv[1], kv[0])):
        if count >= min_count:
            cat.add(src, dst, tag)
    return cat


def extract_dev_deletions(records: Sequence[M2Record],
                          min_count: int = DEFAULT_MIN_COUNT) -> list[str]:
    """Tokens deleted as single-token edits at least min_count times.

    Ordered by descending count, ties lexicographic, so the result has the
    shape of a frequency-ranked deletion inventory.
    """
    counts: Counter[str] = Counter()
    for rec in records:
        for e in rec.first_annotator_edits():
            if e.kind is EditKind.UNNECESSARY and e.end - e.start == 1:
                counts[rec.source[e.start]] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [tok for tok, count in ranked if count >= min_count]
