"""Tour of the weighted FST core: build, compose, optimize, search.

Weights live in the tropical semiring: path costs add, alternatives
take the minimum, so "shortest path" means "cheapest analysis".
"""

import sys
from pathlib import Path

# keep the demo runnable from a source checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fstgec import (
    SymbolTable,
    WeightedFst,
    compose,
    connect,
    determinize,
    enumerate_paths,
    minimize,
    project_output,
    push_weights,
    rm_epsilon,
    shortest_path,
)


def rewriter(table: SymbolTable) -> WeightedFst:
    """One-state transducer that copies "a" for free or rewrites it."""
    f = WeightedFst(table)
    s = f.add_state()
    f.add_arc(s, s, "a", "a", 0.0)
    f.add_arc(s, s, "a", "b", 1.0)   # rewriting costs 1.0 per token
    f.add_arc(s, s, "b", "b", 0.0)
    f.set_final(s, 0.0)
    return f


def main() -> None:
    table = SymbolTable()

    chain = WeightedFst(table)
    chain.add_states(4)
    for src, sym in enumerate(("a", "a", "b")):
        chain.add_arc(src, src + 1, sym, weight=0.5)
    chain.set_final(3, 0.0)
    print("input chain accepts:", list(enumerate_paths(chain)))

    related = compose(chain, rewriter(table))
    print("\nafter composing with the rewriter:")
    for istr, ostr, w in sorted(enumerate_paths(related), key=lambda p: p[2]):
        print(f"  {istr!r} -> {ostr!r} at cost {w}")

    # optimization chain: same weighted language, canonical machine
    acceptor = project_output(related)
    optimized = push_weights(minimize(determinize(rm_epsilon(connect(acceptor)))))
    print("\noptimized acceptor:", optimized)
    print("cheapest three analyses:", shortest_path(optimized, 3))


if __name__ == "__main__":
    main()
