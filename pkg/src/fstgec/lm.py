"""N-gram language models with Kneser-Ney smoothing, ARPA files, ensembles.

Models are stored ARPA-shaped: log10 probabilities for observed n-grams
and log10 backoff weights for observed contexts. For interpolated
Kneser-Ney the stored probability of a seen n-gram already includes the
interpolation mass, and backing off multiplies by the context's escape
weight, so the ARPA representation is exact, not an approximation.

Scorers expose three methods used by the decoder: start_state(),
score_step(state, token) -> (cost, next_state), final_cost(state).
Costs are negative natural-log probabilities, always >= 0. Tokens outside
the vocabulary are scored through the single unknown-token class.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

from .errors import ConfigError, ParseError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

_LN10 = math.log(10.0)


class LmScorer(Protocol):
    def start_state(self): ...

    def score_step(self, state, token: str) -> tuple[float, object]: ...

    def final_cost(self, state) -> float: ...


@dataclass(frozen=True)
class UniformLm:
    """Every continuation costs the same; handy as a neutral scorer."""

    step_cost: float = 0.0
    eos_cost: float = 0.0

    def start_state(self):
        return None

    def score_step(self, state, token: str) -> tuple[float, object]:
        return self.step_cost, None

    def final_cost(self, state) -> float:
        return self.eos_cost


class NgramLm:
    def __init__(self, order: int, probs: dict[tuple[str, ...], float],
                 backoffs: dict[tuple[str, ...], float],
                 vocab: frozenset[str]):
        self.order = order
        self.probs = probs
        self.backoffs = backoffs
        self.vocab = vocab  # predictable tokens: corpus words, EOS, UNK

    # -- scorer interface ------------------------------------------------

    def start_state(self) -> tuple[str, ...]:
        return (BOS,) * (self.order - 1)

    def score_step(self, state, token: str) -> tuple[float, tuple[str, ...]]:
        word = token if token in self.vocab else UNK
        cost = max(0.0, -_LN10 * self.logprob(state, word))
        next_state = (state + (word,))[-(self.order - 1):]
        return cost, next_state

    def final_cost(self, state) -> float:
        return max(0.0, -_LN10 * self.logprob(state, EOS))

    # -- queries ----------------------------------------------------------

    def logprob(self, context: Sequence[str], word: str) -> float:
        """log10 P(word | context) with standard backoff lookup."""
        if word == UNK and UNK not in self.vocab:
            raise ConfigError("model has no unknown-token class")
        h = tuple(context)[-(self.order - 1):]
        acc = 0.0
        while True:
            lp = self.probs.get(h + (word,))
            if lp is not None and lp > -98.0:
                return acc + lp
            if not h:
                raise ConfigError(f"no unigram entry for {word!r}")
            acc += self.backoffs.get(h, 0.0)
            h = h[1:]

    def sentence_cost(self, tokens: Iterable[str]) -> float:
        """Total cost of a sentence including the end marker."""
        state = self.start_state()
        total = 0.0
        for tok in tokens:
            cost, state = self.score_step(state, tok)
            total += cost
        return total + self.final_cost(state)


def lm_score(lm: LmScorer, state, token: str) -> tuple[float, object]:
    return lm.score_step(state, token)


@dataclass(frozen=True)
class LmEnsemble:
    """Arithmetic mean of member costs; states are the tuple of member states."""

    members: tuple

    def __post_init__(self):
        if not self.members:
            raise ConfigError("an ensemble needs at least one member")

    def start_state(self) -> tuple:
        return tuple(m.start_state() for m in self.members)

    def score_step(self, state, token: str) -> tuple[float, tuple]:
        costs = []
        nexts = []
        for m, s in zip(self.members, state):
            c, ns = m.score_step(s, token)
            costs.append(c)
            nexts.append(ns)
        return sum(costs) / len(costs), tuple(nexts)

    def final_cost(self, state) -> float:
        return sum(m.final_cost(s) for m, s in zip(self.members, state)) \
            / len(self.members)


def ensemble_score(ensemble: LmEnsemble, state, token: str) -> tuple[float, tuple]:
    return ensemble.score_step(state, token)


# -- training ------------------------------------------------------------


def _discounts(counts: Iterable[int]) -> tuple[float, float, float]:
    """Count-of-count discount estimates, clamped to keep every context leaky."""
    n = Counter()
    for a in counts:
        if 1 <= a <= 4:
            n[a] += 1
    n1, n2, n3, n4 = n[1], n[2], n[3], n[4]
    y = n1 / (n1 + 2 * n2) if n1 + 2 * n2 > 0 else 0.5
    d1 = 1.0 - 2.0 * y * n2 / n1 if n1 > 0 else 0.5
    d2 = 2.0 - 3.0 * y * n3 / n2 if n2 > 0 else 1.0
    d3 = 3.0 - 4.0 * y * n4 / n3 if n3 > 0 else 1.5

    def clamp(x, lo, hi):
        return lo if not math.isfinite(x) or x < lo else min(x, hi)

    return clamp(d1, 0.1, 1.0), clamp(d2, 0.1, 2.0), clamp(d3, 0.1, 3.0)


def _discount_for(count: int, d: tuple[float, float, float]) -> float:
    if count <= 0:
        return 0.0
    return d[0] if count == 1 else d[1] if count == 2 else d[2]


def train_ngram_lm(corpus: Sequence[Sequence[str]], order: int) -> NgramLm:
    """Interpolated modified Kneser-Ney over a tokenized corpus.

    Lower orders use continuation counts except for sentence-initial
    grams, which keep raw counts (nothing can precede the start marker).
    Escape mass is computed as exactly the discount taken, so every
    conditional distribution sums to one over the vocabulary.
    """
    if not isinstance(order, int) or not 2 <= order <= 5:
        raise ValueError(f"order must be an integer in [2, 5], got {order!r}")
    sentences = [list(s) for s in corpus]
    if not sentences:
        raise ValueError("training corpus is empty")
    total_tokens = sum(len(s) for s in sentences)
    if total_tokens < order:
        raise ValueError(f"corpus has {total_tokens} tokens, fewer than the "
                         f"order {order}")
    for s in sentences:
        for tok in s:
            if tok in (BOS, EOS, UNK):
                raise ValueError(f"corpus token collides with marker {tok!r}")

    raw: list[Counter] = [Counter() for _ in range(order + 1)]
    for sent in sentences:
        padded = [BOS] * (order - 1) + sent + [EOS]
        for pos in range(order - 1, len(padded)):
            for k in range(1, order + 1):
                raw[k][tuple(padded[pos - k + 1: pos + 1])] += 1

    # adjusted counts: continuation counts below the top order, raw counts
    # for sentence-initial grams and the top order itself
    adj: dict[int, Counter] = {order: raw[order]}
    for k in range(order - 1, 0, -1):
        cont: Counter = Counter()
        for gram in raw[k + 1]:
            cont[gram[1:]] += 1
        counts: Counter = Counter()
        for gram, c in raw[k].items():
            counts[gram] = c if gram[0] == BOS else cont[gram]
        adj[k] = counts

    vocab = frozenset(tok for s in sentences for tok in s) | {EOS, UNK}

    # unigram level: discounted continuation counts over a uniform base
    d1 = _discounts(adj[1].values())
    a_total = sum(adj[1].values())
    removed = sum(min(_discount_for(a, d1), a) for a in adj[1].values())
    gamma_uni = removed / a_total
    probs_lin: dict[tuple[str, ...], float] = {}
    for w in vocab:
        a = adj[1].get((w,), 0)
        probs_lin[(w,)] = (max(a - _discount_for(a, d1), 0.0) / a_total
                           + gamma_uni / len(vocab))
    gammas: dict[tuple[str, ...], float] = {(): gamma_uni}

    def interp(k: int, h: tuple[str, ...], w: str) -> float:
        """P_k(w | h) with escape through unseen contexts."""
        if k == 1:
            return probs_lin[(w,)]
        gram = h + (w,)
        if gram in probs_lin:
            return probs_lin[gram]
        g = gammas.get(h)
        lower = interp(k - 1, h[1:], w)
        return lower if g is None else g * lower

    for k in range(2, order + 1):
        dk = _discounts(adj[k].values())
        by_context: dict[tuple[str, ...], list[tuple[str, int]]] = {}
        for gram, a in adj[k].items():
            by_context.setdefault(gram[:-1], []).append((gram[-1], a))
        for h, items in by_context.items():
            total = sum(a for _, a in items)
            removed = sum(min(_discount_for(a, dk), a) for _, a in items)
            gamma = removed / total
            gammas[h] = gamma
            for w, a in items:
                probs_lin[h + (w,)] = (max(a - _discount_for(a, dk), 0.0) / total
                                       + gamma * interp(k - 1, h[1:], w))

    probs = {g: math.log10(p) for g, p in probs_lin.items()}
    probs.setdefault((BOS,), -99.0)
    backoffs = {}
    for h, g in gammas.items():
        if h:
            backoffs[h] = math.log10(g)
            probs.setdefault(h, -99.0)
    return NgramLm(order, probs, backoffs, vocab)


# -- ARPA text format ----------------------------------------------------


def save_arpa(lm: NgramLm, path) -> None:
    """Write the standard ARPA listing; floats keep full precision."""
    by_order: dict[int, list[tuple[str, ...]]] = {k: [] for k in range(1, lm.order + 1)}
    for gram in set(lm.probs) | set(lm.backoffs):
        by_order[len(gram)].append(gram)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\\data\\\n")
        for k in range(1, lm.order + 1):
            fh.write(f"ngram {k}={len(by_order[k])}\n")
        for k in range(1, lm.order + 1):
            fh.write(f"\n\\{k}-grams:\n")
            for gram in sorted(by_order[k]):
                lp = lm.probs.get(gram, -99.0)
                line = f"{lp!r}\t{' '.join(gram)}"
                if k < lm.order:
                    line += f"\t{lm.backoffs.get(gram, 0.0)!r}"
                fh.write(line + "\n")
        fh.write("\n\\end\\\n")


def load_arpa(path) -> NgramLm:
    probs: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}
    declared: dict[int, int] = {}
    current_k = 0
    seen_data = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line == "\\data\\":
                seen_data = True
                continue
            if line == "\\end\\":
                break
            if line.startswith("ngram "):
                try:
                    k, n = line[6:].split("=")
                    declared[int(k)] = int(n)
                except ValueError:
                    raise ParseError(f"bad count declaration {line!r}", lineno)
                continue
            if line.endswith("-grams:") and line.startswith("\\"):
                try:
                    current_k = int(line[1:-7])
                except ValueError:
                    raise ParseError(f"bad section header {line!r}", lineno)
                continue
            if not seen_data or current_k == 0:
                raise ParseError(f"entry outside any section: {line!r}", lineno)
            parts = raw.rstrip("\n").split("\t")
            if len(parts) not in (2, 3):
                raise ParseError("expected logprob<TAB>ngram[<TAB>backoff]", lineno)
            try:
                lp = float(parts[0])
            except ValueError:
                raise ParseError(f"bad log-probability {parts[0]!r}", lineno)
            gram = tuple(parts[1].split())
            if len(gram) != current_k:
                raise ParseError(f"{len(gram)}-gram in the {current_k}-gram "
                                 "section", lineno)
            probs[gram] = lp
            if len(parts) == 3:
                try:
                    backoffs[gram] = float(parts[2])
                except ValueError:
                    raise ParseError(f"bad backoff weight {parts[2]!r}", lineno)
    if not declared:
        raise ParseError("missing \\data\\ header")
    order = max(declared)
    for k, n in declared.items():
        have = sum(1 for g in probs if len(g) == k)
        if have != n:
            raise ParseError(f"declared {n} {k}-grams, found {have}")
    backoffs = {g: b for g, b in backoffs.items() if b != 0.0}
    vocab = frozenset(g[0] for g in probs if len(g) == 1) - {BOS}
    if order < 2:
        raise ParseError("model order must be at least 2")
    return NgramLm(order, probs, backoffs, vocab)
