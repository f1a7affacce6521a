#!/usr/bin/env python3
"""Tour of the verification machinery behind the node-weighted guarantee.

Starting from a hand-built rate tree, this trims it against a marked vertex
set (drop unmarked leaves, lower unmarked levels to the strongest mark
below), then splits the result into vertex-disjoint rate spiders.  The
marked vertices across the spiders partition the marked set; that counting
identity is what bounds each greedy merge against the optimum.
"""

from priority_steiner.fileio import format_decomposition
from priority_steiner.spiders import (
    RateTree,
    decompose_rate_spiders,
    marked_optimize,
    verify_decomposition,
)


def main():
    edges = [
        (1, 2), (1, 3), (2, 4), (2, 5), (2, 6), (3, 7), (3, 8), (4, 9),
        (5, 10), (5, 11), (7, 12), (7, 13), (7, 14), (11, 15), (11, 16),
        (13, 17), (13, 18), (14, 19),
    ]
    rates = {
        1: 3, 2: 2, 3: 3, 4: 2, 5: 2, 6: 2, 7: 3, 8: 3, 9: 1, 10: 2,
        11: 2, 12: 2, 13: 3, 14: 1, 15: 1, 16: 2, 17: 1, 18: 1, 19: 1,
    }
    marked = {1, 2, 6, 9, 11, 12, 15, 16, 18, 19}
    tree = RateTree(1, rates, tuple(edges))

    print(f"input: {len(tree.vertices)} vertices, {len(marked)} marked")
    trimmed = marked_optimize(tree, marked)
    dropped = sorted(tree.vertices - trimmed.vertices)
    lowered = {
        v: (tree.rates[v], trimmed.rates[v])
        for v in sorted(trimmed.vertices)
        if trimmed.rates[v] != tree.rates[v]
    }
    print(f"trimmed: removed {dropped}, lowered levels {lowered}")

    decomp = decompose_rate_spiders(trimmed, marked)
    print(f"decomposed into {len(decomp.spiders)} spiders:")
    print(format_decomposition(decomp))

    problems = verify_decomposition(trimmed, marked, decomp)
    print("invariant check:", "all good" if not problems else problems)
    sizes = [
        1 + len((set(sp.vertices) & marked) - {sp.root})
        for sp in decomp.spiders
    ]
    print(f"marked vertices per spider {sizes}, total {sum(sizes)} "
          f"= |marked| = {len(marked)}")


if __name__ == "__main__":
    main()
