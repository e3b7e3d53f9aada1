"""Weighted finite-state transducers over the tropical semiring.

Weights are plain floats with min as addition and + as multiplication;
ZERO is +inf and ONE is 0.0. All user-constructed weights must be >= 0,
which keeps every shortest-distance computation well defined.

Two label ids are reserved in every symbol table: 0 is the empty label
EPS and 1 is the wildcard SIGMA. A sigma arc matches any concrete symbol
inclusively (explicit arcs on the same symbol still fire) and maps the
matched symbol to itself, so sigma arcs are only ever written sigma:sigma.
Sigma is resolved during composition against the concrete arcs of the
other operand and survives only while both operands carry it.
"""

from __future__ import annotations

import heapq
import io
from typing import Iterable, NamedTuple

from .errors import ConfigError, ParseError, ResourceLimitError, StructuralError

ZERO = float("inf")
ONE = 0.0

EPS_ID = 0
SIGMA_ID = 1
EPS = "<eps>"
SIGMA = "<sigma>"

# Filter states for epsilon-synchronised composition. OPEN allows any move,
# LEFT_ONLY admits further left-alone epsilon moves, RIGHT_ONLY the mirror.
_OPEN, _RIGHT_ONLY, _LEFT_ONLY = 0, 1, 2


class SymbolTable:
    """Bijection between symbol strings and dense integer ids."""

    def __init__(self):
        self._sym_to_id = {EPS: EPS_ID, SIGMA: SIGMA_ID}
        self._id_to_sym = [EPS, SIGMA]

    def add(self, symbol: str) -> int:
        """Register a symbol, returning its id. Idempotent."""
        sid = self._sym_to_id.get(symbol)
        if sid is not None:
            if sid in (EPS_ID, SIGMA_ID):
                raise ValueError(f"{symbol!r} is reserved and cannot be user-registered")
            return sid
        sid = len(self._id_to_sym)
        self._sym_to_id[symbol] = sid
        self._id_to_sym.append(symbol)
        return sid

    def id(self, symbol: str) -> int:
        return self._sym_to_id[symbol]

    def symbol(self, sid: int) -> str:
        return self._id_to_sym[sid]

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._sym_to_id

    def __len__(self) -> int:
        return len(self._id_to_sym)

    def __iter__(self):
        return iter(self._id_to_sym)


class Arc(NamedTuple):
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


class WeightedFst:
    """Mutable while being built, treated as immutable by every operation.

    States are dense ints; `start` defaults to the first added state.
    Finality is a partial map state -> final weight.
    """

    def __init__(self, isyms: SymbolTable | None = None, osyms: SymbolTable | None = None):
        self.isyms = isyms if isyms is not None else SymbolTable()
        self.osyms = osyms if osyms is not None else self.isyms
        self._arcs: list[list[Arc]] = []
        self.finals: dict[int, float] = {}
        self.start = -1

    # -- construction ----------------------------------------------------

    def add_state(self) -> int:
        self._arcs.append([])
        if self.start < 0:
            self.start = len(self._arcs) - 1
        return len(self._arcs) - 1

    def add_states(self, n: int) -> None:
        for _ in range(n):
            self.add_state()

    def set_start(self, state: int) -> None:
        self._check_state(state)
        self.start = state

    def set_final(self, state: int, weight: float = ONE) -> None:
        self._check_state(state)
        _check_weight(weight)
        self.finals[state] = weight

    def add_arc(self, src: int, dst: int, isym: str, osym: str | None = None,
                weight: float = ONE) -> None:
        """Add an arc with string labels; osym defaults to isym (acceptor arc)."""
        self._check_state(src)
        self._check_state(dst)
        _check_weight(weight)
        if osym is None:
            osym = isym
        self._arcs[src].append(Arc(self._label_id(self.isyms, isym),
                                   self._label_id(self.osyms, osym), weight, dst))

    def add_arc_ids(self, src: int, dst: int, ilabel: int, olabel: int,
                    weight: float) -> None:
        self._arcs[src].append(Arc(ilabel, olabel, weight, dst))

    @staticmethod
    def _label_id(table: SymbolTable, sym: str) -> int:
        if sym == EPS:
            return EPS_ID
        if sym == SIGMA:
            return SIGMA_ID
        return table.add(sym)

    # -- inspection ------------------------------------------------------

    @property
    def num_states(self) -> int:
        return len(self._arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self._arcs)

    def arcs(self, state: int) -> list[Arc]:
        return self._arcs[state]

    def final_weight(self, state: int) -> float:
        return self.finals.get(state, ZERO)

    def is_final(self, state: int) -> bool:
        return state in self.finals

    def states(self) -> range:
        return range(len(self._arcs))

    def is_acceptor(self) -> bool:
        return all(a.ilabel == a.olabel for arcs in self._arcs for a in arcs)

    def has_epsilon(self) -> bool:
        return any(a.ilabel == EPS_ID and a.olabel == EPS_ID
                   for arcs in self._arcs for a in arcs)

    def is_deterministic(self) -> bool:
        """No state has two arcs sharing an input label and no input epsilons."""
        for arcs in self._arcs:
            seen = set()
            for a in arcs:
                if a.ilabel == EPS_ID or a.ilabel in seen:
                    return False
                seen.add(a.ilabel)
        return True

    def _check_state(self, state: int) -> None:
        if not 0 <= state < len(self._arcs):
            raise StructuralError(f"state {state} does not exist")

    def _check_start(self) -> None:
        if self.start < 0:
            raise StructuralError("FST has no start state")

    def __repr__(self):
        return (f"<WeightedFst states={self.num_states} arcs={self.num_arcs} "
                f"finals={len(self.finals)}>")


def _check_weight(weight: float) -> None:
    if not weight >= 0.0:
        raise ValueError(f"weights must be >= 0, got {weight!r}")


# -- structure helpers ---------------------------------------------------


def topological_order(f: WeightedFst) -> list[int]:
    """States in topological order; raises StructuralError on a cycle.

    Iterative DFS; cascade outputs can be thousands of states deep, which
    would blow the recursion limit.
    """
    f._check_start()
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * f.num_states
    order: list[int] = []
    for root in f.states():
        if color[root] != WHITE:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        color[root] = GREY
        while stack:
            s, i = stack[-1]
            if i < len(f.arcs(s)):
                stack[-1] = (s, i + 1)
                t = f.arcs(s)[i].nextstate
                if color[t] == GREY:
                    raise StructuralError("FST is cyclic")
                if color[t] == WHITE:
                    color[t] = GREY
                    stack.append((t, 0))
            else:
                color[s] = BLACK
                order.append(s)
                stack.pop()
    order.reverse()
    return order


def is_acyclic(f: WeightedFst) -> bool:
    try:
        topological_order(f)
        return True
    except StructuralError as e:
        if "cyclic" in str(e):
            return False
        raise


def _accessible(f: WeightedFst) -> set[int]:
    seen = {f.start}
    stack = [f.start]
    while stack:
        s = stack.pop()
        for a in f.arcs(s):
            if a.nextstate not in seen:
                seen.add(a.nextstate)
                stack.append(a.nextstate)
    return seen


def _coaccessible(f: WeightedFst) -> set[int]:
    rev: list[list[int]] = [[] for _ in f.states()]
    for s in f.states():
        for a in f.arcs(s):
            rev[a.nextstate].append(s)
    seen = set(f.finals)
    stack = list(f.finals)
    while stack:
        s = stack.pop()
        for p in rev[s]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def connect(f: WeightedFst) -> WeightedFst:
    """Drop states not on an accepting path. The start state always survives."""
    f._check_start()
    keep = _accessible(f) & _coaccessible(f)
    keep.add(f.start)
    old_ids = sorted(keep, key=lambda s: (s != f.start, s))
    remap = {old: new for new, old in enumerate(old_ids)}
    g = WeightedFst(f.isyms, f.osyms)
    g.add_states(len(old_ids))
    g.set_start(0)
    for old in old_ids:
        for a in f.arcs(old):
            if a.nextstate in keep:
                g.add_arc_ids(remap[old], remap[a.nextstate], a.ilabel, a.olabel, a.weight)
        if old in f.finals:
            g.set_final(remap[old], f.finals[old])
    return g


# -- composition ---------------------------------------------------------


def compose(a: WeightedFst, b: WeightedFst) -> WeightedFst:
    """Compose two transducers, matching a's output tape against b's input tape.

    Epsilon moves are synchronised with the standard three-state filter so
    that every pair of compatible paths yields exactly one composite path
    (no epsilon double-counting). Sigma arcs resolve against the concrete
    labels on the other side; sigma composed with sigma stays sigma.
    """
    a._check_start()
    b._check_start()
    if a.osyms is not b.isyms:
        raise ConfigError("a.osyms and b.isyms must be the same symbol table")

    # b's arcs per state, grouped by input label for fast matching.
    b_index: list[dict[int, list[Arc]]] = []
    for s in b.states():
        d: dict[int, list[Arc]] = {}
        for arc in b.arcs(s):
            d.setdefault(arc.ilabel, []).append(arc)
        b_index.append(d)

    g = WeightedFst(a.isyms, b.osyms)
    state_map: dict[tuple[int, int, int], int] = {}

    def state_id(key: tuple[int, int, int]) -> int:
        sid = state_map.get(key)
        if sid is None:
            sid = g.add_state()
            state_map[key] = sid
            fa = a.final_weight(key[0])
            fb = b.final_weight(key[1])
            if fa < ZERO and fb < ZERO:
                g.set_final(sid, fa + fb)
            stack.append(key)
        return sid

    stack: list[tuple[int, int, int]] = []
    start_key = (a.start, b.start, _OPEN)
    state_id(start_key)
    g.set_start(0)

    while stack:
        key = stack.pop()
        q1, q2, flt = key
        src = state_map[key]
        groups = b_index[q2]

        for arc1 in a.arcs(q1):
            if arc1.olabel == EPS_ID:
                # left-alone epsilon move
                if flt != _RIGHT_ONLY:
                    dst = state_id((arc1.nextstate, q2, _LEFT_ONLY))
                    g.add_arc_ids(src, dst, arc1.ilabel, EPS_ID, arc1.weight)
                continue
            if arc1.olabel == SIGMA_ID:
                matches: Iterable[tuple[int, Arc]] = (
                    (lbl if lbl != SIGMA_ID else SIGMA_ID, arc2)
                    for lbl, arcs2 in groups.items() if lbl != EPS_ID
                    for arc2 in arcs2)
            else:
                matches = [(arc1.olabel, arc2)
                           for arc2 in groups.get(arc1.olabel, ())]
                if SIGMA_ID in groups:
                    matches += [(arc1.olabel, arc2) for arc2 in groups[SIGMA_ID]]
            for matched, arc2 in matches:
                ilab = matched if arc1.ilabel == SIGMA_ID else arc1.ilabel
                olab = matched if arc2.olabel == SIGMA_ID else arc2.olabel
                dst = state_id((arc1.nextstate, arc2.nextstate, _OPEN))
                g.add_arc_ids(src, dst, ilab, olab, arc1.weight + arc2.weight)

        if flt != _LEFT_ONLY:
            for arc2 in groups.get(EPS_ID, ()):
                # right-alone epsilon move
                dst = state_id((q1, arc2.nextstate, _RIGHT_ONLY))
                g.add_arc_ids(src, dst, EPS_ID, arc2.olabel, arc2.weight)

        if flt == _OPEN:
            for arc1 in a.arcs(q1):
                if arc1.olabel != EPS_ID:
                    continue
                for arc2 in groups.get(EPS_ID, ()):
                    # simultaneous epsilon move, only from the open filter state
                    dst = state_id((arc1.nextstate, arc2.nextstate, _OPEN))
                    g.add_arc_ids(src, dst, arc1.ilabel, arc2.olabel,
                                  arc1.weight + arc2.weight)
    return g


# -- rational operations -------------------------------------------------


def project_output(f: WeightedFst) -> WeightedFst:
    """Acceptor over f's output symbols; every arc becomes olabel:olabel."""
    f._check_start()
    g = WeightedFst(f.osyms, f.osyms)
    g.add_states(f.num_states)
    g.set_start(f.start)
    for s in f.states():
        for a in f.arcs(s):
            g.add_arc_ids(s, a.nextstate, a.olabel, a.olabel, a.weight)
    for s, w in f.finals.items():
        g.set_final(s, w)
    return g


def _eps_closure(f: WeightedFst, source: int) -> dict[int, float]:
    """Shortest epsilon distances from source, Dijkstra over eps:eps arcs."""
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, s = heapq.heappop(heap)
        if d > dist.get(s, ZERO):
            continue
        for a in f.arcs(s):
            if a.ilabel == EPS_ID and a.olabel == EPS_ID:
                nd = d + a.weight
                if nd < dist.get(a.nextstate, ZERO):
                    dist[a.nextstate] = nd
                    heapq.heappush(heap, (nd, a.nextstate))
    return dist


def rm_epsilon(f: WeightedFst) -> WeightedFst:
    """Remove arcs that are epsilon on both tapes, preserving the weighted language."""
    f._check_start()
    g = WeightedFst(f.isyms, f.osyms)
    g.add_states(f.num_states)
    g.set_start(f.start)
    for s in f.states():
        best_final = ZERO
        for t, d in sorted(_eps_closure(f, s).items()):
            for a in f.arcs(t):
                if a.ilabel == EPS_ID and a.olabel == EPS_ID:
                    continue
                g.add_arc_ids(s, a.nextstate, a.ilabel, a.olabel, d + a.weight)
            if t in f.finals:
                best_final = min(best_final, d + f.finals[t])
        if best_final < ZERO:
            g.set_final(s, best_final)
    return g


def determinize(f: WeightedFst) -> WeightedFst:
    """Weighted subset construction for epsilon-free acyclic acceptors.

    Subset elements carry residual weights: the cheapest continuation is
    paid as early as possible and the leftover debt rides along with each
    member state, which is what makes tropical determinization exact.
    """
    f._check_start()
    if not f.is_acceptor():
        raise StructuralError("determinize requires an acceptor")
    if f.has_epsilon():
        raise StructuralError("determinize requires an epsilon-free input")
    if not is_acyclic(f):
        raise StructuralError("determinize requires an acyclic input")

    g = WeightedFst(f.isyms, f.osyms)
    Subset = tuple[tuple[int, float], ...]

    def subset_id(sub: Subset) -> int:
        sid = subset_map.get(sub)
        if sid is None:
            sid = g.add_state()
            subset_map[sub] = sid
            fw = min((res + f.final_weight(s) for s, res in sub), default=ZERO)
            if fw < ZERO:
                g.set_final(sid, fw)
            queue.append(sub)
        return sid

    subset_map: dict[Subset, int] = {}
    queue: list[Subset] = []
    subset_id(((f.start, 0.0),))
    g.set_start(0)

    while queue:
        sub = queue.pop()
        src = subset_map[sub]
        by_label: dict[int, dict[int, float]] = {}
        for s, res in sub:
            for a in f.arcs(s):
                tgt = by_label.setdefault(a.ilabel, {})
                w = res + a.weight
                if w < tgt.get(a.nextstate, ZERO):
                    tgt[a.nextstate] = w
        for label in sorted(by_label):
            tgt = by_label[label]
            wprime = min(tgt.values())
            nsub = tuple(sorted((t, w - wprime) for t, w in tgt.items()))
            g.add_arc_ids(src, subset_id(nsub), label, label, wprime)
    return g


def push_weights(f: WeightedFst) -> WeightedFst:
    """Push weights toward the start of an acyclic machine.

    Every co-accessible state other than the start ends up at shortest
    distance 0 from a final state; the machine's total weight is carried
    by the start state's out-arcs (and its final weight, if final), so
    each accepted string keeps its exact path weight. States off every
    accepting path are dropped.
    """
    if not is_acyclic(f):
        raise StructuralError("push_weights requires an acyclic input")
    g = connect(f)
    if not g.finals:
        raise StructuralError("push_weights: no final state is reachable")
    dist = [ZERO] * g.num_states
    for s in reversed(topological_order(g)):
        d = g.final_weight(s)
        for a in g.arcs(s):
            d = min(d, a.weight + dist[a.nextstate])
        dist[s] = d

    total = dist[g.start]
    out = WeightedFst(g.isyms, g.osyms)
    out.add_states(g.num_states)
    out.set_start(g.start)
    for s in g.states():
        shift = total if s == g.start else 0.0
        for a in g.arcs(s):
            w = a.weight + dist[a.nextstate] - dist[s] + shift
            out.add_arc_ids(s, a.nextstate, a.ilabel, a.olabel, _clamp(w))
        if s in g.finals:
            out.set_final(s, _clamp(g.finals[s] - dist[s] + shift))
    return out


def _clamp(w: float) -> float:
    # float cancellation can leave a hair below zero; anything larger is a bug
    if w < 0.0:
        if w < -1e-9:
            raise StructuralError(f"negative weight {w} produced by reweighting")
        return 0.0
    return w


def minimize(f: WeightedFst) -> WeightedFst:
    """Merge states with identical weighted suffix behavior.

    Requires a deterministic epsilon-free acceptor. Acyclic inputs are
    weight-pushed first so suffix-equivalent states acquire identical arc
    weights; partition refinement then runs on exact signatures.
    """
    f._check_start()
    if not f.is_acceptor():
        raise StructuralError("minimize requires an acceptor")
    if not f.is_deterministic():
        raise StructuralError("minimize requires a deterministic input")
    g = connect(f)
    if is_acyclic(g) and g.finals:
        g = push_weights(g)

    cls = [0] * g.num_states
    by_final: dict[float | None, int] = {}
    for s in g.states():
        key = g.finals.get(s)
        cls[s] = by_final.setdefault(key, len(by_final))
    n_classes = len(by_final)

    while True:
        sigs: dict[tuple, int] = {}
        new_cls = [0] * g.num_states
        for s in g.states():
            sig = (cls[s],
                   tuple(sorted((a.ilabel, a.weight, cls[a.nextstate])
                                for a in g.arcs(s))))
            new_cls[s] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == n_classes:
            break
        cls, n_classes = new_cls, len(sigs)

    out = WeightedFst(g.isyms, g.osyms)
    # keep the start state's class at id 0 for readability
    order = sorted(range(n_classes), key=lambda c: (c != cls[g.start], c))
    remap = {c: i for i, c in enumerate(order)}
    out.add_states(n_classes)
    out.set_start(remap[cls[g.start]])
    done = set()
    for s in g.states():
        c = cls[s]
        if c in done:
            continue
        done.add(c)
        for a in g.arcs(s):
            out.add_arc_ids(remap[c], remap[cls[a.nextstate]], a.ilabel, a.olabel,
                            a.weight)
        if s in g.finals:
            out.set_final(remap[c], g.finals[s])
    return out


# -- path queries --------------------------------------------------------


def enumerate_paths(f: WeightedFst, limit: int = 1_000_000
                    ) -> list[tuple[str, str, float]]:
    """All accepting paths as (input string, output string, weight) triples.

    Strings are space-joined symbols with epsilons dropped. Paths are not
    merged: two distinct paths with identical strings appear twice. The
    weight includes the final weight. Raises ResourceLimitError beyond
    `limit` paths; requires an acyclic input.
    """
    f._check_start()
    if not is_acyclic(f):
        raise StructuralError("enumerate_paths requires an acyclic input")
    out: list[tuple[str, str, float]] = []
    stack: list[tuple[int, tuple[str, ...], tuple[str, ...], float]] = [
        (f.start, (), (), 0.0)]
    while stack:
        s, isyms, osyms, w = stack.pop()
        if s in f.finals:
            if len(out) >= limit:
                raise ResourceLimitError(f"more than {limit} paths")
            out.append((" ".join(isyms), " ".join(osyms), w + f.finals[s]))
        for a in reversed(f.arcs(s)):
            ni = isyms if a.ilabel == EPS_ID else isyms + (f.isyms.symbol(a.ilabel),)
            no = osyms if a.olabel == EPS_ID else osyms + (f.osyms.symbol(a.olabel),)
            stack.append((a.nextstate, ni, no, w + a.weight))
    return out


def shortest_path(f: WeightedFst, n: int = 1) -> list[tuple[str, float]]:
    """The n cheapest accepted (output string, weight) pairs.

    Distinct output strings only, with per-string weights min-aggregated
    over paths; equal weights are ordered lexicographically. Requires an
    acyclic input.
    """
    f._check_start()
    if n < 1:
        raise ValueError("n must be >= 1")
    if not is_acyclic(f):
        raise StructuralError("shortest_path requires an acyclic input")
    g = connect(f)
    if not g.finals:
        return []
    dist = [ZERO] * g.num_states
    for s in reversed(topological_order(g)):
        d = g.final_weight(s)
        for a in g.arcs(s):
            d = min(d, a.weight + dist[a.nextstate])
        dist[s] = d

    # A* over prefixes: the heuristic is the exact completion cost, so
    # entries pop in (total weight, output string) order.
    results: list[tuple[str, float]] = []
    seen: set[str] = set()
    counter = 0
    heap: list[tuple[float, tuple[str, ...], int, int | None, float]] = [
        (dist[g.start], (), counter, g.start, 0.0)]
    while heap and len(results) < n:
        prio, osyms, _, state, w = heapq.heappop(heap)
        if state is None:
            text = " ".join(osyms)
            if text not in seen:
                seen.add(text)
                results.append((text, w))
            continue
        if state in g.finals:
            counter += 1
            heapq.heappush(heap, (w + g.finals[state], osyms, counter, None,
                                  w + g.finals[state]))
        for a in g.arcs(state):
            no = osyms if a.olabel == EPS_ID else osyms + (g.osyms.symbol(a.olabel),)
            nw = w + a.weight
            counter += 1
            heapq.heappush(heap, (nw + dist[a.nextstate], no, counter, a.nextstate, nw))
    return results


# -- text interchange ----------------------------------------------------


def write_fst_text(f: WeightedFst, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_fst_text(f))


def format_fst_text(f: WeightedFst) -> str:
    """Tab-separated arc and final lines; state 0 is the start state."""
    f._check_start()
    remap = {f.start: 0}
    for s in f.states():
        if s not in remap:
            remap[s] = len(remap)
    lines = []
    for s in sorted(f.states(), key=lambda s: remap[s]):
        for a in f.arcs(s):
            lines.append(f"{remap[s]}\t{remap[a.nextstate]}\t"
                         f"{f.isyms.symbol(a.ilabel)}\t{f.osyms.symbol(a.olabel)}\t"
                         f"{a.weight:.12g}")
    for s, w in sorted(f.finals.items(), key=lambda kv: remap[kv[0]]):
        lines.append(f"{remap[s]}\t{w:.12g}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_fst_text(source, isyms: SymbolTable | None = None,
                  osyms: SymbolTable | None = None) -> WeightedFst:
    """Parse the text interchange format from a path or open file."""
    if hasattr(source, "read"):
        return parse_fst_text(source.read(), isyms, osyms)
    with io.open(source, encoding="utf-8") as fh:
        return parse_fst_text(fh.read(), isyms, osyms)


def parse_fst_text(text: str, isyms: SymbolTable | None = None,
                   osyms: SymbolTable | None = None) -> WeightedFst:
    g = WeightedFst(isyms, osyms)

    def need_state(s: int) -> None:
        while g.num_states <= s:
            g.add_state()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        parts = raw.split("\t")
        try:
            if len(parts) in (4, 5):
                src, dst = int(parts[0]), int(parts[1])
                w = float(parts[4]) if len(parts) == 5 else 0.0
                need_state(max(src, dst))
                g.add_arc(src, dst, parts[2], parts[3], w)
            elif len(parts) in (1, 2):
                s = int(parts[0])
                w = float(parts[1]) if len(parts) == 2 else 0.0
                need_state(s)
                g.set_final(s, w)
            else:
                raise ParseError(f"expected 1, 2, 4, or 5 fields, got {len(parts)}",
                                 lineno)
        except (ValueError, StructuralError) as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(str(e), lineno) from e
    if g.num_states == 0:
        g.add_state()
    g.set_start(0)
    return g
