"""Independent brute-force oracles used to freeze expected test values.

Nothing here shares code paths with the library's search routines: path
costs come from exhaustive simple-path enumeration, rate assignments from
exhaustive level enumeration, and merge scores from exhaustive subset
enumeration.
"""

from __future__ import annotations

import itertools
import math

from priority_steiner import (
    EdgeRateSolution,
    PnwstInstance,
    PstInstance,
    VertexRateSolution,
    check_feasible,
    solution_weight,
)
from priority_steiner.generators import StableRng
from priority_steiner.pnwst import RateForest, root_priority
from priority_steiner.spiders import RateTree, marked_optimize


def enum_edge_path_cost(inst: PstInstance, start: int, goal: int, level: int) -> float:
    """Cheapest simple path cost with every edge priced at the level."""
    adj = inst.graph.adjacency
    best = math.inf

    def walk(v: int, seen: set[int], acc: float) -> None:
        nonlocal best
        if v == goal:
            best = min(best, acc)
            return
        for w, eid in adj[v]:
            if w not in seen:
                seen.add(w)
                walk(w, seen, acc + inst.weight(eid, level))
                seen.discard(w)

    walk(start, {start}, 0.0)
    return best


def enum_node_path_cost(
    inst: PnwstInstance, start: int, goal: int, level: int
) -> float:
    """Cheapest simple path cost over interior vertices at the level."""
    adj = inst.graph.adjacency
    best = math.inf

    def walk(v: int, seen: set[int], acc: float) -> None:
        nonlocal best
        if v == goal:
            best = min(best, acc)
            return
        for w, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                extra = 0.0 if w == goal else inst.weight(w, level)
                walk(w, seen, acc + extra)
                seen.discard(w)

    walk(start, {start}, 0.0)
    return best


def enum_best_assignment(inst, tree_edges) -> float:
    """Cheapest feasible rate assignment on a fixed tree, by enumeration."""
    k = inst.graph.k
    best = math.inf
    if isinstance(inst, PstInstance):
        edges = sorted(tree_edges)
        for levels in itertools.product(range(0, k + 1), repeat=len(edges)):
            sol = EdgeRateSolution(dict(zip(edges, levels)))
            if check_feasible(inst, sol) is None:
                best = min(best, solution_weight(inst, sol))
        return best
    verts = sorted({u for e in tree_edges for u in e} | {inst.source})
    edges = tuple(tree_edges)
    for levels in itertools.product(range(0, k + 1), repeat=len(verts)):
        rates = dict(zip(verts, levels))
        kept = [
            (u, v) for (u, v) in edges if rates.get(u, 0) and rates.get(v, 0)
        ]
        sol = VertexRateSolution(rates, tuple(kept))
        if check_feasible(inst, sol) is None:
            best = min(best, solution_weight(inst, sol))
    return best


def enum_min_merge_ratio(
    inst: PnwstInstance, forest: RateForest, charging: str = "residual"
) -> float:
    """Best merge score over every root tree, center, level, and subset."""
    from priority_steiner.paths import node_rate_search

    cur = forest.rates if charging == "residual" else None
    roots = sorted(forest.trees)
    lvl = {r: root_priority(inst, r) for r in roots}
    legs = {r: node_rate_search(inst, r, lvl[r], cur).dist for r in roots}
    best = math.inf
    for r in roots:
        for b in range(1, lvl[r] + 1):
            head_map = node_rate_search(inst, r, b, cur).dist
            pool = [r2 for r2 in roots if r2 != r and lvl[r2] <= b]
            for v in range(1, inst.graph.n + 1):
                w = inst.weight(v, b)
                if charging == "residual":
                    w = max(0.0, w - inst.weight(v, forest.rates.get(v, 0)))
                head = head_map[v] + w
                for size in range(1, len(pool) + 1):
                    for subset in itertools.combinations(pool, size):
                        cost = head + sum(legs[r2][v] for r2 in subset)
                        best = min(best, cost / (size + 1))
    return best


def random_rate_tree(n: int, k: int, seed: int) -> tuple[RateTree, set[int]]:
    """Random marked-optimized rate tree with at least two marked vertices."""
    rng = StableRng(seed)
    rates = {1: rng.randint(1, k)}
    edges = []
    for v in range(2, n + 1):
        p = rng.randint(1, v - 1)
        edges.append((p, v))
        rates[v] = rng.randint(1, rates[p])
    marked = {1}
    for v in range(2, n + 1):
        if rng.randint(0, 2) == 0:
            marked.add(v)
    while len(marked) < 2:
        marked.add(rng.randint(2, n))
    tree = RateTree(1, rates, tuple(edges))
    return marked_optimize(tree, marked), marked
