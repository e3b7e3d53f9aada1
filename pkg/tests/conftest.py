"""Shared generators and brute-force oracles.

The oracles re-derive expected answers by exhaustive enumeration so the
library code under test never checks itself: weighted-language maps come
from path listing, composition from string joins, the correction space
from explicit edit combinations, and decoding from scoring every
accepted string.
"""

import itertools
import random

from fstgec.bpe import BpeModel, apply_bpe, learn_bpe
from fstgec.cascade import CascadeResources, PenaltyVector
from fstgec.confusion import ConfusionCatalog
from fstgec.fst import EPS, SymbolTable, WeightedFst, enumerate_paths

ALPHA = ("a", "b", "c", "d")

CASCADE_VOCAB = ("the", "a", "cat", "dog", "sat", "mat", "on", "ran")


def weight_map(f, limit: int = 200_000) -> dict:
    """Min-aggregated (input string, output string) -> weight, via paths."""
    out: dict = {}
    for istr, ostr, w in enumerate_paths(f, limit):
        key = (istr, ostr)
        if key not in out or w < out[key]:
            out[key] = w
    return out


def acceptor_weight_map(f, limit: int = 200_000) -> dict:
    return {o: w for (_, o), w in weight_map(f, limit).items()}


def maps_close(a: dict, b: dict, tol: float = 1e-9) -> bool:
    if set(a) != set(b):
        return False
    return all(abs(a[k] - b[k]) <= tol for k in a)


def random_acyclic_fst(rng: random.Random, max_states: int = 6,
                       n_syms: int = 4, eps_prob: float = 0.2,
                       transduce: bool = False,
                       syms: SymbolTable | None = None) -> WeightedFst:
    """Random acyclic machine; arcs follow a fixed topological order.

    Weights are multiples of 1/8 so tropic sums stay float-exact. Some
    instances have unreachable finals and accept nothing.
    """
    table = syms if syms is not None else SymbolTable()
    labels = list(ALPHA[:n_syms])
    for s in labels:
        table.add(s)
    f = WeightedFst(table)
    n = rng.randint(2, max_states)
    f.add_states(n)
    for src in range(n - 1):
        for _ in range(rng.randint(0, 3)):
            dst = rng.randint(src + 1, n - 1)
            isym = EPS if rng.random() < eps_prob else rng.choice(labels)
            osym = None
            if transduce:
                osym = EPS if rng.random() < eps_prob else rng.choice(labels)
            f.add_arc(src, dst, isym, osym, rng.randint(0, 40) / 8.0)
    f.set_final(n - 1, rng.randint(0, 8) / 8.0)
    if n > 2 and rng.random() < 0.5:
        f.set_final(rng.randint(1, n - 2), rng.randint(0, 8) / 8.0)
    return f


def compose_oracle(a, b, limit: int = 100_000) -> dict:
    """Join path listings of a and b on the shared middle string."""
    by_input: dict = {}
    for ib, ob, wb in enumerate_paths(b, limit):
        by_input.setdefault(ib, []).append((ob, wb))
    out: dict = {}
    for ia, oa, wa in enumerate_paths(a, limit):
        for ob, wb in by_input.get(oa, ()):
            key = (ia, ob)
            w = wa + wb
            if key not in out or w < out[key]:
                out[key] = w
    return out


def cascade_oracle(tokens, res: CascadeResources) -> dict:
    """Enumerate every edit combination with its penalty arithmetic.

    Per token: keep, delete (if deletable), or substitute a catalog
    candidate; then at most one insertion into any gap of the edited
    sequence; then word-to-piece mapping. Min-aggregated by piece string.
    """
    deletable = set(res.deletions)
    pv = res.penalties
    per_token = []
    for t in tokens:
        opts = [((t,), 0.0)]
        if t in deletable:
            opts.append(((), pv.lambda_del))
        for cand in res.confusions.candidates(t):
            opts.append(((cand,), pv.lambda_sub))
        per_token.append(opts)
    piece_cache: dict = {}

    def pieces_of(word):
        hit = piece_cache.get(word)
        if hit is None:
            hit = piece_cache[word] = apply_bpe(word, res.bpe)
        return hit

    out: dict = {}
    for combo in itertools.product(*per_token):
        words = tuple(w for piece, _ in combo for w in piece)
        base = sum(c for _, c in combo)
        variants = [(words, base)]
        for gap in range(len(words) + 1):
            for t in res.insertions:
                variants.append(
                    (words[:gap] + (t,) + words[gap:], base + pv.lambda_ins))
        for seq, cost in variants:
            pieces = []
            for w in seq:
                pieces.extend(pieces_of(w))
            key = " ".join(pieces)
            if key not in out or cost < out[key]:
                out[key] = cost
    return out


def random_cascade_instance(rng: random.Random, max_tokens: int = 8
                            ) -> tuple[list[str], CascadeResources]:
    """Sentence plus small random resources within the oracle bounds."""
    vocab = list(CASCADE_VOCAB)
    tokens = [rng.choice(vocab) for _ in range(rng.randint(1, max_tokens))]
    deletable = tuple(rng.sample(vocab, rng.randint(0, 3)))
    insertable = (rng.choice(vocab),)
    catalog = ConfusionCatalog()
    for w in rng.sample(vocab, rng.randint(0, 4)):
        others = [v for v in vocab if v != w]
        for cand in rng.sample(others, rng.randint(1, 2)):
            catalog.add(w, cand, "test")
    if rng.random() < 0.5:
        bpe = BpeModel(())
    else:
        freqs = {w: rng.randint(1, 6) for w in vocab}
        bpe = learn_bpe(freqs, rng.randint(0, 10))
    penalties = PenaltyVector(rng.randint(1, 12) / 4.0,
                              rng.randint(1, 12) / 4.0,
                              rng.randint(1, 12) / 4.0)
    res = CascadeResources(deletable, insertable, catalog, bpe, penalties)
    return tokens, res


def score_string(scorer, tokens) -> float:
    """Total model cost of a token sequence, end marker included."""
    cost = 0.0
    state = scorer.start_state()
    for t in tokens:
        step, state = scorer.score_step(state, t)
        cost += step
    return cost + scorer.final_cost(state)


def decode_oracle(space, scorer) -> tuple[list[str], float]:
    """Cheapest accepted string by scoring the full weighted language."""
    best = None
    for ostr, w in acceptor_weight_map(space).items():
        tokens = ostr.split() if ostr else []
        cost = w + score_string(scorer, tokens)
        if best is None or (cost, tokens) < best:
            best = (cost, tokens)
    assert best is not None, "oracle needs a non-empty language"
    return best[1], best[0]


def random_corpus(rng: random.Random, vocab=("a", "b", "c", "d", "e"),
                  n_sentences: int = 30, max_len: int = 6) -> list[list[str]]:
    return [[rng.choice(vocab) for _ in range(rng.randint(1, max_len))]
            for _ in range(n_sentences)]
