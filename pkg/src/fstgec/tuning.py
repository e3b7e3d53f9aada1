"""Penalty tuning by coordinate descent with golden-section line searches.

The objective decodes every dev sentence at a candidate penalty vector
and scores corpus F0.5 against the gold edits. It is piecewise constant
in the penalties, so the line search is used as a sampler rather than
trusted for unimodality: every evaluation is cached and the best vector
ever seen is what gets returned, which makes the reported best score
non-decreasing by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .cascade import CascadeResources, PenaltyVector
from .lm import LmScorer
from .pipeline import correct_corpus
from .scoring import M2Record, score_corpus

DEFAULT_LAMBDA_MAX = 20.0
DEFAULT_MAX_CYCLES = 10
DEFAULT_TOL = 1e-4
DEFAULT_GOLDEN_ITERS = 8

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TuneResult:
    penalties: PenaltyVector
    f_half: float
    cycle_history: tuple[float, ...]
    evaluations: int


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float,
                       iterations: int) -> tuple[float, float]:
    """Best (x, fn(x)) seen while shrinking [lo, hi] golden-style.

    Endpoints are probed too; with a cached objective the bookkeeping is
    cheap and the best-seen guarantee does not depend on unimodality.
    """
    evaluated = [(fn(lo), lo), (fn(hi), hi)]
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    evaluated += [(fc, c), (fd, d)]
    for _ in range(iterations):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
            evaluated.append((fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
            evaluated.append((fd, d))
    best_f, best_x = max(evaluated, key=lambda p: (p[0], -p[1]))
    return best_x, best_f


def dev_objective(dev: Sequence[M2Record], res: CascadeResources,
                  scorer: LmScorer, beam: int,
                  jobs: int = 1) -> Callable[[tuple[float, float, float]], float]:
    """Memoized penalties -> corpus F0.5 objective over the dev records."""
    sentences = [rec.source for rec in dev]
    cache: dict[tuple[float, float, float], float] = {}

    def objective(vec: tuple[float, float, float]) -> float:
        key = tuple(round(v, 9) for v in vec)
        hit = cache.get(key)
        if hit is not None:
            return hit
        pens = PenaltyVector(*key)
        corrected = correct_corpus(sentences, res.with_penalties(pens), scorer,
                                   beam, jobs=jobs)
        f = score_corpus([" ".join(toks) for toks in corrected], list(dev)).f_half
        cache[key] = f
        return f

    objective.cache = cache  # type: ignore[attr-defined]
    return objective


def powell_tune(dev: Sequence[M2Record], res: CascadeResources,
                scorer: LmScorer, beam: int, init: PenaltyVector,
                lambda_max: float = DEFAULT_LAMBDA_MAX,
                max_cycles: int = DEFAULT_MAX_CYCLES,
                tol: float = DEFAULT_TOL,
                golden_iters: int = DEFAULT_GOLDEN_ITERS,
                jobs: int = 1,
                on_cycle: Callable[[int, float, PenaltyVector], None] | None = None
                ) -> TuneResult:
    """Cyclic coordinate descent over the three penalties on [0, lambda_max].

    Each coordinate gets a golden-section line search; a cycle that
    improves best F0.5 by less than tol ends the run early. Returns the
    best vector seen anywhere, never worse than the initial one.
    """
    if not dev:
        raise ValueError("dev set is empty")
    if lambda_max <= 0.0:
        raise ValueError("lambda_max must be positive")
    if max_cycles < 1:
        raise ValueError("max_cycles must be >= 1")
    for v in init.as_tuple():
        if not 0.0 <= v <= lambda_max:
            raise ValueError(f"initial penalty {v} outside [0, {lambda_max}]")

    objective = dev_objective(dev, res, scorer, beam, jobs=jobs)
    best_vec = init.as_tuple()
    best_f = objective(best_vec)
    history: list[float] = []

    for cycle in range(max_cycles):
        cycle_start = best_f
        for coord in range(3):
            def line(x: float) -> float:
                vec = list(best_vec)
                vec[coord] = x
                return objective(tuple(vec))

            x, fx = golden_section_max(line, 0.0, lambda_max, golden_iters)
            if fx > best_f:
                vec = list(best_vec)
                vec[coord] = round(x, 9)
                best_vec, best_f = tuple(vec), fx
        history.append(best_f)
        if on_cycle is not None:
            on_cycle(cycle, best_f, PenaltyVector(*best_vec))
        if best_f - cycle_start < tol:
            break

    return TuneResult(PenaltyVector(*best_vec), best_f, tuple(history),
                      len(objective.cache))  # type: ignore[attr-defined]
