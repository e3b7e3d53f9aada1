"""Span edits, M2 ingestion, and F-beta corpus scoring.

An edit span rewrites source tokens [start, end) to a replacement token
sequence. The kind of an edit is fully determined by its shape: an empty
source span with a non-empty replacement inserts (Missing), a non-empty
span with an empty replacement deletes (Unnecessary), and a non-empty
span with a non-empty replacement substitutes (Replacement).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ParseError


class EditKind(enum.Enum):
    MISSING = "Missing"
    REPLACEMENT = "Replacement"
    UNNECESSARY = "Unnecessary"


@dataclass(frozen=True)
class EditSpan:
    start: int
    end: int
    replacement: tuple[str, ...]

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad span [{self.start}, {self.end})")
        if self.start == self.end and not self.replacement:
            raise ValueError("an edit must change something")

    @property
    def kind(self) -> EditKind:
        if self.start == self.end:
            return EditKind.MISSING
        return EditKind.REPLACEMENT if self.replacement else EditKind.UNNECESSARY

    def key(self) -> tuple[int, int, tuple[str, ...]]:
        return (self.start, self.end, self.replacement)


@dataclass
class M2Record:
    source: tuple[str, ...]
    annotators: dict[int, list[EditSpan]] = field(default_factory=dict)

    def first_annotator_edits(self) -> list[EditSpan]:
        if not self.annotators:
            return []
        return self.annotators[min(self.annotators)]


def parse_m2(text: str) -> list[M2Record]:
    """Parse M2 blocks: an S line of source tokens, then A edit lines.

    A lines look like `A start end|||type|||correction|||...|||annotator`.
    `noop` types and `-NONE-` corrections register the annotator without
    an edit. Offsets must lie within the source.
    """
    records: list[M2Record] = []
    current: M2Record | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line:
            current = None
            continue
        if line.startswith("S ") or line == "S":
            current = M2Record(tuple(line[2:].split()))
            records.append(current)
        elif line.startswith("A "):
            if current is None:
                raise ParseError("edit line before any source line", lineno)
            fields = line[2:].split("|||")
            if len(fields) < 3:
                raise ParseError("expected at least 3 |||-separated fields", lineno)
            span = fields[0].split()
            if len(span) != 2:
                raise ParseError("expected 'start end' offsets", lineno)
            try:
                start, end = int(span[0]), int(span[1])
            except ValueError:
                raise ParseError(f"non-integer offsets {fields[0]!r}", lineno)
            try:
                annotator = int(fields[-1])
            except ValueError:
                raise ParseError(f"non-integer annotator id {fields[-1]!r}", lineno)
            edits = current.annotators.setdefault(annotator, [])
            etype, correction = fields[1], fields[2]
            if etype == "noop" or correction == "-NONE-":
                continue
            replacement = tuple(correction.split())
            if start == end and not replacement:
                continue
            if not (0 <= start <= end <= len(current.source)):
                raise ParseError(
                    f"span [{start}, {end}) outside source of "
                    f"{len(current.source)} tokens", lineno)
            edits.append(EditSpan(start, end, replacement))
        else:
            raise ParseError(f"unrecognized line {line[:40]!r}", lineno)
    return records


def format_m2(records: list[M2Record]) -> str:
    """Serialize records back to M2 text (one annotator convention on noop)."""
    blocks = []
    for rec in records:
        lines = ["S " + " ".join(rec.source)]
        annotators = rec.annotators or {0: []}
        for ann in sorted(annotators):
            edits = annotators[ann]
            if not edits:
                lines.append(f"A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||{ann}")
            for e in edits:
                corr = " ".join(e.replacement)
                lines.append(f"A {e.start} {e.end}|||{e.kind.value}|||{corr}"
                             f"|||REQUIRED|||-NONE-|||{ann}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


# -- edit extraction -----------------------------------------------------

_MATCH, _SUB, _DEL, _INS = 0, 1, 2, 3


def extract_edits(source: list[str] | tuple[str, ...],
                  hypothesis: list[str] | tuple[str, ...]) -> list[EditSpan]:
    """Minimal edit spans turning source into hypothesis.

    Token-level Levenshtein with unit costs; ties prefer substitution over
    deletion over insertion. Adjacent non-match alignment columns merge
    into single spans, so output spans are sorted and non-adjacent.
    """
    n, m = len(source), len(hypothesis)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        src_tok = source[i - 1]
        row, prev = dist[i], dist[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1] + (0 if src_tok == hypothesis[j - 1] else 1)
            row[j] = min(diag, prev[j] + 1, row[j - 1] + 1)

    # backtrace, preferring diagonal, then deletion, then insertion
    ops: list[int] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            cost = 0 if source[i - 1] == hypothesis[j - 1] else 1
            if dist[i][j] == dist[i - 1][j - 1] + cost:
                ops.append(_MATCH if cost == 0 else _SUB)
                i, j = i - 1, j - 1
                continue
        if i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            ops.append(_DEL)
            i -= 1
            continue
        ops.append(_INS)
        j -= 1
    ops.reverse()

    edits: list[EditSpan] = []
    si = hj = 0
    run_start = run_end = None
    run_repl: list[str] = []

    def flush():
        nonlocal run_start, run_end, run_repl
        if run_start is not None:
            edits.append(EditSpan(run_start, run_end, tuple(run_repl)))
            run_start = run_end = None
            run_repl = []

    for op in ops:
        if op == _MATCH:
            flush()
            si += 1
            hj += 1
            continue
        if run_start is None:
            run_start = run_end = si
        if op == _SUB:
            run_repl.append(hypothesis[hj])
            si += 1
            hj += 1
            run_end = si
        elif op == _DEL:
            si += 1
            run_end = si
        else:
            run_repl.append(hypothesis[hj])
            hj += 1
    flush()
    return edits


def apply_edits(source: list[str] | tuple[str, ...],
                edits: list[EditSpan]) -> list[str]:
    """Apply non-overlapping, sorted edit spans to the source tokens."""
    out: list[str] = []
    pos = 0
    for e in sorted(edits, key=lambda e: (e.start, e.end)):
        if e.start < pos or e.end > len(source):
            raise ValueError(f"edit [{e.start}, {e.end}) overlaps or overflows")
        out.extend(source[pos:e.start])
        out.extend(e.replacement)
        pos = e.end
    out.extend(source[pos:])
    return out


# -- metrics -------------------------------------------------------------


def f_beta(precision: float, recall: float, beta: float) -> float:
    num = (1.0 + beta * beta) * precision * recall
    den = beta * beta * precision + recall
    return num / den if den > 0.0 else 0.0


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 1.0

    @property
    def f_half(self) -> float:
        return f_beta(self.precision, self.recall, 0.5)

    def line(self) -> str:
        return (f"{self.tp} {self.fp} {self.fn} "
                f"{self.precision:.4f} {self.recall:.4f} {self.f_half:.4f}")


def score_corpus(hypotheses: list[str], gold: list[M2Record]) -> ScoreReport:
    """Corpus tp/fp/fn of hypothesis sentences against gold edit sets.

    System edits are extracted per sentence against the record's source.
    With several annotators, each sentence counts the annotator whose edit
    set maximizes that sentence's own F0.5 (ties: more tp, then fewer
    fp+fn, then the lowest annotator id), which keeps scoring independent
    of sentence order.
    """
    if len(hypotheses) != len(gold):
        raise ValueError(f"{len(hypotheses)} hypotheses vs {len(gold)} records")
    tp = fp = fn = 0
    for hyp, rec in zip(hypotheses, gold):
        hyp_edits = {e.key() for e in extract_edits(rec.source, tuple(hyp.split()))}
        annotators = rec.annotators or {0: []}
        best = None
        for ann in sorted(annotators):
            gold_edits = {e.key() for e in annotators[ann]}
            tp_a = len(hyp_edits & gold_edits)
            fp_a = len(hyp_edits) - tp_a
            fn_a = len(gold_edits) - tp_a
            rep = ScoreReport(tp_a, fp_a, fn_a)
            cand = (rep.f_half, tp_a, -(fp_a + fn_a), -ann)
            if best is None or cand > best[0]:
                best = (cand, tp_a, fp_a, fn_a)
        tp += best[1]
        fp += best[2]
        fn += best[3]
    return ScoreReport(tp, fp, fn)


# -- edit-type profile ---------------------------------------------------


@dataclass(frozen=True)
class EditTypeProfile:
    sentences: int
    words: int
    counts: dict[EditKind, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def per_sentence(self, kind: EditKind | None = None) -> float:
        n = self.total if kind is None else self.counts[kind]
        return n / self.sentences if self.sentences else 0.0

    def per_word(self, kind: EditKind | None = None) -> float:
        n = self.total if kind is None else self.counts[kind]
        return n / self.words if self.words else 0.0

    def rows(self) -> list[tuple[str, int, float, float]]:
        out = [(k.value, self.counts[k], self.per_sentence(k), self.per_word(k))
               for k in (EditKind.MISSING, EditKind.REPLACEMENT,
                         EditKind.UNNECESSARY)]
        out.append(("Total", self.total, self.per_sentence(), self.per_word()))
        return out


def count_edit_types(records: list[M2Record]) -> EditTypeProfile:
    """Edit counts by kind over each record's first annotator."""
    counts = {k: 0 for k in EditKind}
    words = 0
    for rec in records:
        words += len(rec.source)
        for e in rec.first_annotator_edits():
            counts[e.kind] += 1
    return EditTypeProfile(len(records), words, counts)
