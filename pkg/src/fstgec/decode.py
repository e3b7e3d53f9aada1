"""LM-constrained decoding over hypothesis-space acceptors.

Both decoders walk a deterministic, epsilon-free, acyclic acceptor while
threading language-model state alongside, summing FST penalties and LM
costs. beam_decode is a synchronous beam over output positions with
hypothesis recombination on (fst state, lm states); with a beam at least
as wide as the joint state space nothing is ever pruned, so it matches
exact_decode, a Dijkstra search kept deliberately separate as an oracle.
Ties are broken lexicographically on the output string everywhere.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import ResourceLimitError, StructuralError
from .fst import EPS_ID, WeightedFst
from .lm import LmScorer

DEFAULT_MAX_JOINT_STATES = 1_000_000


@dataclass(frozen=True)
class DecoderHypothesis:
    fst_state: int
    lm_states: object
    accumulated_cost: float
    output: tuple[str, ...]

    def rank(self) -> tuple[float, tuple[str, ...]]:
        return (self.accumulated_cost, self.output)


def _check_space(space: WeightedFst) -> None:
    space._check_start()
    for s in space.states():
        for a in space.arcs(s):
            if a.ilabel == EPS_ID or a.olabel == EPS_ID:
                raise StructuralError("decoder requires an epsilon-free acceptor")
            if a.ilabel != a.olabel:
                raise StructuralError("decoder requires an acceptor")


def beam_decode(space: WeightedFst, scorer: LmScorer,
                beam: int) -> tuple[list[str], float]:
    """Best (output tokens, total cost) under FST penalties plus LM costs.

    Hypotheses advance one output token per step; at each step those
    sharing (fst state, lm states) are recombined keeping the cheapest,
    and only the `beam` cheapest survive. A hypothesis sitting on an FST
    final state is scored as complete the moment it is formed, paying the
    final weight and the LM end-of-sentence cost, even if it is then
    pruned before expanding further.
    """
    if beam < 1:
        raise ValueError(f"beam width must be >= 1, got {beam}")
    _check_space(space)

    best: tuple[float, tuple[str, ...]] | None = None

    def settle(hyp: DecoderHypothesis) -> None:
        nonlocal best
        if space.is_final(hyp.fst_state):
            total = (hyp.accumulated_cost + space.final_weight(hyp.fst_state)
                     + scorer.final_cost(hyp.lm_states))
            cand = (total, hyp.output)
            if best is None or cand < best:
                best = cand

    start = DecoderHypothesis(space.start, scorer.start_state(), 0.0, ())
    settle(start)
    active: dict[tuple, DecoderHypothesis] = {
        (start.fst_state, start.lm_states): start}

    while active:
        expanded: dict[tuple, DecoderHypothesis] = {}
        for hyp in active.values():
            for arc in space.arcs(hyp.fst_state):
                token = space.osyms.symbol(arc.olabel)
                lm_cost, nls = scorer.score_step(hyp.lm_states, token)
                succ = DecoderHypothesis(
                    arc.nextstate, nls,
                    hyp.accumulated_cost + arc.weight + lm_cost,
                    hyp.output + (token,))
                key = (arc.nextstate, nls)
                old = expanded.get(key)
                if old is None or succ.rank() < old.rank():
                    expanded[key] = succ
        for hyp in expanded.values():
            settle(hyp)
        if len(expanded) > beam:
            keep = sorted(expanded.items(), key=lambda kv: kv[1].rank())[:beam]
            expanded = dict(keep)
        active = expanded

    if best is None:
        raise StructuralError("hypothesis space accepts nothing")
    return list(best[1]), best[0]


def exact_decode(space: WeightedFst, scorer: LmScorer,
                 max_joint_states: int = DEFAULT_MAX_JOINT_STATES
                 ) -> tuple[list[str], float]:
    """Optimal decode by Dijkstra over joint (fst state, lm states).

    Serves as the oracle for beam_decode; raises ResourceLimitError if
    the explored joint space exceeds max_joint_states.
    """
    _check_space(space)
    counter = 0
    start = (space.start, scorer.start_state())
    heap: list[tuple[float, tuple[str, ...], int, tuple | None]] = [
        (0.0, (), counter, start)]
    settled: set = set()

    while heap:
        cost, out, _, key = heapq.heappop(heap)
        if key is None:
            return list(out), cost
        if key in settled:
            continue
        settled.add(key)
        if len(settled) > max_joint_states:
            raise ResourceLimitError(
                f"joint state space exceeds {max_joint_states}")
        fs, ls = key
        if space.is_final(fs):
            total = cost + space.final_weight(fs) + scorer.final_cost(ls)
            counter += 1
            heapq.heappush(heap, (total, out, counter, None))
        for arc in space.arcs(fs):
            token = space.osyms.symbol(arc.olabel)
            lm_cost, nls = scorer.score_step(ls, token)
            nkey = (arc.nextstate, nls)
            if nkey in settled:
                continue
            counter += 1
            heapq.heappush(heap, (cost + arc.weight + lm_cost,
                                  out + (token,), counter, nkey))
    raise StructuralError("hypothesis space accepts nothing")
