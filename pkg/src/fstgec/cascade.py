"""Per-sentence hypothesis spaces as composed weighted FSTs.

A sentence becomes a linear input automaton that is composed with three
single-purpose edit machines (token deletion, word substitution, at most
one token insertion) and finally with a word-to-BPE mapper. Projecting
onto the output tape and optimizing yields a deterministic, epsilon-free,
acyclic, weight-pushed acceptor over BPE pieces in which every path costs
the sum of its edit penalties and the unedited sentence costs exactly 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bpe import BpeModel, apply_bpe, apply_bpe_sentence
from .confusion import ConfusionCatalog
from .errors import ParseError
from .fst import (EPS, SIGMA, SymbolTable, WeightedFst, compose, connect,
                  determinize, minimize, project_output, push_weights,
                  rm_epsilon)

# Frequent function words priced for deletion when no inventory is supplied,
# ranked by how often deleting them fixed a sentence in annotated dev data.
DEFAULT_DELETABLE_TOKENS = (
    "the", ",", "a", "to", "it", "of", "in", "that", "will", "have",
    "for", "an", "is", "-", "they", "'s", "and", "had",
)

# Tokens the insertion machine may add, at most one per sentence.
DEFAULT_INSERTABLE_TOKENS = (",", "-", "'s")


@dataclass(frozen=True)
class PenaltyVector:
    """Non-negative costs for the three edit machines."""

    lambda_del: float
    lambda_sub: float
    lambda_ins: float

    def __post_init__(self):
        for name, value in (("lambda_del", self.lambda_del),
                            ("lambda_sub", self.lambda_sub),
                            ("lambda_ins", self.lambda_ins)):
            if not value >= 0.0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lambda_del, self.lambda_sub, self.lambda_ins)


@dataclass(frozen=True)
class CascadeResources:
    """Everything needed to build hypothesis spaces, shared across sentences."""

    deletions: tuple[str, ...]
    insertions: tuple[str, ...]
    confusions: ConfusionCatalog
    bpe: BpeModel
    penalties: PenaltyVector

    def with_penalties(self, penalties: PenaltyVector) -> "CascadeResources":
        return CascadeResources(self.deletions, self.insertions,
                                self.confusions, self.bpe, penalties)


def _dedup(tokens) -> tuple[str, ...]:
    return tuple(dict.fromkeys(tokens))


def load_token_list(path) -> list[str]:
    """One token per line; an optional tab-separated count is ignored."""
    out: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            token = line.split("\t")[0]
            if not token:
                raise ParseError("empty token field", lineno)
            out.append(token)
    return list(_dedup(out))


def _validate_tokens(tokens) -> None:
    if not tokens:
        raise ValueError("sentence must contain at least one token")
    for tok in tokens:
        if tok in (EPS, SIGMA):
            raise ValueError(f"{tok!r} is a reserved label, not a sentence token")


def build_input_fst(tokens: list[str] | tuple[str, ...],
                    symbols: SymbolTable | None = None) -> WeightedFst:
    """Linear automaton accepting exactly the sentence at weight 0."""
    _validate_tokens(tokens)
    f = WeightedFst(symbols)
    f.add_states(len(tokens) + 1)
    for i, tok in enumerate(tokens):
        f.add_arc(i, i + 1, tok)
    f.set_final(len(tokens))
    return f


def build_deletion_fst(deletable: tuple[str, ...] | list[str], lambda_del: float,
                       symbols: SymbolTable | None = None) -> WeightedFst:
    """Single-state transducer: copy anything free, drop listed tokens at a price.

    Deletions are unlimited; each one costs lambda_del.
    """
    f = WeightedFst(symbols)
    s = f.add_state()
    f.set_final(s)
    f.add_arc(s, s, SIGMA)
    for tok in _dedup(deletable):
        f.add_arc(s, s, tok, EPS, lambda_del)
    return f


def build_edit_fst(confusions: ConfusionCatalog, lambda_sub: float,
                   sentence_words, symbols: SymbolTable | None = None
                   ) -> WeightedFst:
    """Single-state transducer: copy free, rewrite sentence words to candidates.

    Only words actually present in the sentence get substitution arcs, so
    the machine stays linear in the sentence's confusion footprint.
    """
    f = WeightedFst(symbols)
    s = f.add_state()
    f.set_final(s)
    f.add_arc(s, s, SIGMA)
    for word in _dedup(sentence_words):
        for cand in confusions.candidates(word):
            f.add_arc(s, s, word, cand, lambda_sub)
    return f


def build_insertion_fst(insertable: tuple[str, ...] | list[str],
                        lambda_ins: float,
                        symbols: SymbolTable | None = None) -> WeightedFst:
    """Two-state transducer inserting at most one listed token anywhere."""
    f = WeightedFst(symbols)
    before = f.add_state()
    after = f.add_state()
    f.set_final(before)
    f.set_final(after)
    f.add_arc(before, before, SIGMA)
    f.add_arc(after, after, SIGMA)
    for tok in _dedup(insertable):
        f.add_arc(before, after, EPS, tok, lambda_ins)
    return f


def build_bpe_map_fst(word_alphabet, bpe: BpeModel,
                      symbols: SymbolTable | None = None,
                      piece_symbols: SymbolTable | None = None) -> WeightedFst:
    """Transducer rewriting each word to its BPE pieces, closed under
    concatenation by looping back to the start after every word."""
    words = _dedup(word_alphabet)
    if not words:
        raise ValueError("word alphabet must not be empty")
    isyms = symbols if symbols is not None else SymbolTable()
    osyms = piece_symbols if piece_symbols is not None else SymbolTable()
    f = WeightedFst(isyms, osyms)
    home = f.add_state()
    f.set_final(home)
    for word in words:
        pieces = apply_bpe(word, bpe)
        state = home
        for i, piece in enumerate(pieces):
            nxt = home if i == len(pieces) - 1 else f.add_state()
            f.add_arc(state, nxt, word if i == 0 else EPS, piece)
            state = nxt
    return f


def optimize_acceptor(f: WeightedFst) -> WeightedFst:
    """connect, remove epsilons, determinize, minimize, push weights."""
    return push_weights(minimize(determinize(rm_epsilon(connect(f)))))


def build_hypothesis_space(tokens: list[str] | tuple[str, ...],
                           res: CascadeResources) -> WeightedFst:
    """The optimized BPE-level hypothesis acceptor for one sentence.

    Path weights are n_del * lambda_del + n_sub * lambda_sub +
    n_ins * lambda_ins, min-merged per output string; the identity
    rewrite is always present at weight 0.
    """
    _validate_tokens(tokens)
    lam = res.penalties
    words = SymbolTable()
    inp = build_input_fst(tokens, words)
    dele = build_deletion_fst(res.deletions, lam.lambda_del, words)
    edit = build_edit_fst(res.confusions, lam.lambda_sub, tokens, words)
    ins = build_insertion_fst(res.insertions, lam.lambda_ins, words)

    alphabet = list(tokens)
    for word in _dedup(tokens):
        alphabet.extend(res.confusions.candidates(word))
    alphabet.extend(res.insertions)
    mapper = build_bpe_map_fst(alphabet, res.bpe, words)

    lattice = compose(compose(compose(compose(inp, dele), edit), ins), mapper)
    space = optimize_acceptor(project_output(lattice))

    identity = apply_bpe_sentence(tokens, res.bpe)
    cost = accept_cost(space, identity)
    assert abs(cost) < 1e-9, f"identity path costs {cost}, expected 0"
    return space


def accept_cost(f: WeightedFst, tokens) -> float:
    """Weight a deterministic epsilon-free acceptor assigns to a token
    sequence, inf if rejected."""
    state = f.start
    total = 0.0
    for tok in tokens:
        if tok not in f.isyms:
            return float("inf")
        want = f.isyms.id(tok)
        for a in f.arcs(state):
            if a.ilabel == want:
                total += a.weight
                state = a.nextstate
                break
        else:
            return float("inf")
    return total + f.final_weight(state)
