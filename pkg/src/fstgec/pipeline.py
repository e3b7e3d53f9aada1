"""Sentence correction: hypothesis space, beam decode, BPE undo.

correct_corpus fans sentences out over processes when jobs > 1 (fork
start method; resources are shared by inheritance, results come back in
input order). Per-sentence work is pure, so parallel and sequential runs
produce identical output.
"""

from __future__ import annotations

import multiprocessing as mp
from typing import Sequence

from .bpe import decode_bpe
from .cascade import CascadeResources, build_hypothesis_space
from .decode import beam_decode
from .lm import LmScorer


def correct_sentence(tokens: Sequence[str], res: CascadeResources,
                     scorer: LmScorer, beam: int) -> list[str]:
    """Corrected word sequence for one tokenized sentence."""
    if not tokens:
        return []
    space = build_hypothesis_space(tokens, res)
    pieces, _ = beam_decode(space, scorer, beam)
    return decode_bpe(pieces)


_WORK: tuple | None = None


def _pool_init(work: tuple) -> None:
    global _WORK
    _WORK = work


def _pool_run(item: tuple[int, Sequence[str]]) -> tuple[int, list[str] | None, str | None]:
    idx, tokens = item
    res, scorer, beam, skip = _WORK
    try:
        return idx, correct_sentence(tokens, res, scorer, beam), None
    except Exception as e:  # noqa: BLE001 - reported or re-raised by caller
        if skip:
            return idx, None, f"{type(e).__name__}: {e}"
        raise


def correct_corpus(sentences: Sequence[Sequence[str]], res: CascadeResources,
                   scorer: LmScorer, beam: int, jobs: int = 1,
                   skip_errors: bool = False,
                   warnings: list[str] | None = None) -> list[list[str]]:
    """Correct every sentence, preserving order.

    With skip_errors, a failing sentence passes through unchanged and a
    diagnostic is appended to `warnings`; otherwise the error propagates
    with the 1-based sentence number attached.
    """
    results: list[list[str] | None] = [None] * len(sentences)

    def note(idx: int, msg: str) -> None:
        if warnings is not None:
            warnings.append(f"sentence {idx + 1}: {msg}")

    if jobs > 1 and hasattr(mp, "get_context"):
        try:
            ctx = mp.get_context("fork")
        except ValueError:
            ctx = None
        if ctx is not None:
            work = (res, scorer, beam, skip_errors)
            with ctx.Pool(jobs, initializer=_pool_init, initargs=(work,)) as pool:
                for idx, out, err in pool.map(_pool_run, list(enumerate(sentences))):
                    if err is not None:
                        note(idx, err)
                        results[idx] = list(sentences[idx])
                    else:
                        results[idx] = out
            return results  # type: ignore[return-value]

    for idx, tokens in enumerate(sentences):
        try:
            results[idx] = correct_sentence(tokens, res, scorer, beam)
        except Exception as e:
            if not skip_errors:
                e.args = (f"sentence {idx + 1}: {e}",)
                raise
            note(idx, f"{type(e).__name__}: {e}")
            results[idx] = list(tokens)
    return results  # type: ignore[return-value]
