"""Node-weighted solver: greedy merging of rooted rate trees.

The solver keeps one rooted tree per unconnected terminal (plus the source)
and repeatedly merges a group of trees.  A merge step picks a root tree, a
center vertex, an upgrade level b not above the root's priority, and a
nonempty set of other trees whose root priorities are at most b; its score
is the connection cost divided by the number of trees joined, and the step
with the smallest score wins.  Joining happens along cheapest vertex-priced
paths: root to center at level b, center to each selected root at that
root's priority level.

Two charging modes exist for evaluating candidates.  ``residual`` (the
default) prices a vertex at the increase over its already-paid level, so
re-using upgraded vertices is free; ``full`` always charges the whole table
entry.  Residual candidate costs are never larger, so every per-iteration
weight bound that holds for full charging holds here too.

Path searches inside one iteration all use the rates from the start of the
iteration, so candidate scores do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .instances import (
    PnwstInstance,
    VertexRateSolution,
    canonical_edge,
    forced_rates,
)
from .paths import PathResult, node_rate_search


@dataclass
class TreePiece:
    """One rooted tree of the working set."""

    root: int
    vertices: set[int]
    edges: set[tuple[int, int]]
    merged_terminals: set[int]


@dataclass
class RateForest:
    """Working state: trees keyed by root vertex plus current vertex levels."""

    trees: dict[int, TreePiece]
    rates: dict[int, int]
    iteration: int = 0


@dataclass(frozen=True)
class MergeCandidate:
    """A scored merge choice, including the paths that realize it."""

    ratio: float
    cost: float
    group_size: int
    root: int
    center: int
    level: int
    selected: tuple[int, ...]
    path_root_to_center: tuple[int, ...]
    paths_center_to_roots: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class IterationRecord:
    """Per-merge trace: score, trees joined, trees before, weight added."""

    ratio: float
    merged: int
    forest_size: int
    added_weight: float


@dataclass
class PnwstRunReport:
    """Final canonicalized solution plus the merge trace.

    ``raw_weight`` is the weight of the tree as built (the sum of the
    per-iteration weight increments); canonicalization can only lower it.
    """

    solution: VertexRateSolution
    per_iteration: tuple[IterationRecord, ...]
    solver_tag: str
    raw_weight: float


def root_priority(inst: PnwstInstance, root: int) -> int:
    return inst.graph.k if root == inst.source else inst.terminals[root]


def init_rate_forest(inst: PnwstInstance) -> RateForest:
    """One singleton tree per terminal plus one for the source."""
    trees = {
        t: TreePiece(t, {t}, set(), {t}) for t in sorted(inst.terminals)
    }
    trees[inst.source] = TreePiece(inst.source, {inst.source}, set(), set())
    rates = {t: lvl for t, lvl in inst.terminals.items()}
    rates[inst.source] = inst.graph.k
    return RateForest(trees, rates)


def _center_charge(
    inst: PnwstInstance, v: int, level: int, rates: dict[int, int], residual: bool
) -> float:
    w = inst.weight(v, level)
    if residual:
        w = max(0.0, w - inst.weight(v, rates.get(v, 0)))
    return w


def minimize_merge_ratio(
    inst: PnwstInstance,
    forest: RateForest,
    charging: str = "residual",
    prefer_larger_groups: bool = False,
) -> MergeCandidate:
    """Scan all (root tree, center, level) triples for the best merge.

    For a fixed triple the best selection is a prefix of the other eligible
    trees sorted by their center-to-root path cost, so prefixes are scanned
    in order and the scan stops once the next path cost can no longer lower
    the score.  Ties resolve toward fewer trees joined (flipped by
    ``prefer_larger_groups``), then the smaller center id, then the smaller
    root id, then the smaller level.
    """
    if len(forest.trees) < 2:
        raise ValueError("merging needs at least two trees")
    if charging not in ("residual", "full"):
        raise ValueError(f"unknown charging mode {charging!r}")
    residual = charging == "residual"
    cur = forest.rates if residual else None
    n = inst.graph.n
    k = inst.graph.k
    roots = sorted(forest.trees)
    level_of = {r: root_priority(inst, r) for r in roots}

    # One search per (root, level up to the root's priority); the search at
    # the root's own priority also provides the center-to-root leg costs,
    # since interior-priced path costs are symmetric.
    searches: dict[tuple[int, int], PathResult] = {}
    for r in roots:
        for b in range(1, level_of[r] + 1):
            searches[(r, b)] = node_rate_search(inst, r, b, cur)

    # Eligible trees per level, and per (center, level) the ascending list
    # of (leg cost, root).
    elig = {b: [r for r in roots if level_of[r] <= b] for b in range(1, k + 1)}
    legs: dict[int, list[list[tuple[float, int]]]] = {}
    for b in range(1, k + 1):
        rows: list[list[tuple[float, int]]] = [[]]
        lists = [(searches[(r, level_of[r])].dist, r) for r in elig[b]]
        for v in range(1, n + 1):
            row = sorted((dist[v], r) for dist, r in lists)
            rows.append(row)
        legs[b] = rows

    best_key = None
    best = None
    for r in roots:
        for b in range(1, level_of[r] + 1):
            base = searches[(r, b)].dist
            rows = legs[b]
            for v in range(1, n + 1):
                head = base[v] + _center_charge(inst, v, b, forest.rates, residual)
                if math.isinf(head):
                    continue
                row = rows[v]
                total = head
                q = 0
                chosen: list[int] = []
                best_here = None
                for cost_leg, r2 in row:
                    if r2 == r:
                        continue
                    if best_here is not None:
                        # Sorted legs: once a leg cannot lower the score,
                        # no later leg can either.
                        if prefer_larger_groups:
                            if cost_leg > best_here[0]:
                                break
                        elif cost_leg >= best_here[0]:
                            break
                    total += cost_leg
                    q += 1
                    chosen.append(r2)
                    score = total / (q + 1)
                    if (
                        best_here is None
                        or score < best_here[0]
                        or (prefer_larger_groups and score == best_here[0])
                    ):
                        best_here = (score, q + 1, total, tuple(chosen))
                if best_here is None or math.isinf(best_here[0]):
                    continue
                score, h, total, sel = best_here
                hkey = -h if prefer_larger_groups else h
                key = (score, hkey, v, r, b)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (score, total, h, r, v, b, sel)

    assert best is not None, "connected graphs always admit a merge"
    score, total, h, r, v, b, sel = best
    path_rv = tuple(searches[(r, b)].path_to(v))
    paths = tuple(
        tuple(searches[(r2, level_of[r2])].path_to(v)) for r2 in sel
    )
    return MergeCandidate(score, total, h, r, v, b, sel, path_rv, paths)


def apply_merge(
    inst: PnwstInstance, forest: RateForest, cand: MergeCandidate
) -> float:
    """Upgrade levels along the candidate's paths and fuse its trees.

    Returns the weight actually added.  A vertex sitting on several paths is
    raised once, to the largest requested level, so the added weight never
    exceeds the candidate's cost.  The fused tree keeps, among the union of
    member edges and path edges, a maximum-bottleneck spanning tree (by the
    lower endpoint level, pre-existing edges winning ties), which preserves
    every member terminal's rate-feasible path to the new root.
    """
    rates = forest.rates
    added = 0.0

    def raise_to(u: int, lvl: int) -> None:
        nonlocal added
        old = rates.get(u, 0)
        if lvl > old:
            added += inst.weight(u, lvl) - inst.weight(u, old)
            rates[u] = lvl

    for u in cand.path_root_to_center:
        raise_to(u, cand.level)
    raise_to(cand.center, cand.level)
    for r2, path in zip(cand.selected, cand.paths_center_to_roots):
        lvl = root_priority(inst, r2)
        for u in path:
            raise_to(u, lvl)

    pieces = [forest.trees[cand.root]] + [forest.trees[r] for r in cand.selected]
    vertices = set()
    old_edges: set[tuple[int, int]] = set()
    for piece in pieces:
        vertices |= piece.vertices
        old_edges |= piece.edges
    new_edges: set[tuple[int, int]] = set()

    def add_path(path: tuple[int, ...]) -> None:
        vertices.update(path)
        for a, c in zip(path, path[1:]):
            e = canonical_edge(a, c)
            if e not in old_edges:
                new_edges.add(e)

    add_path(cand.path_root_to_center)
    for path in cand.paths_center_to_roots:
        add_path(path)

    ranked = sorted(
        (-min(rates.get(u, 0), rates.get(w, 0)), is_new, (u, w))
        for is_new, bucket in ((0, old_edges), (1, new_edges))
        for (u, w) in bucket
    )
    parent = {u: u for u in vertices}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept: set[tuple[int, int]] = set()
    for _, _, (u, w) in ranked:
        ru, rw = find(u), find(w)
        if ru != rw:
            parent[ru] = rw
            kept.add((u, w))

    merged_terms = set()
    for piece in pieces:
        merged_terms |= piece.merged_terminals
    fused = TreePiece(cand.root, vertices, kept, merged_terms)
    for r2 in cand.selected:
        del forest.trees[r2]
    if cand.root in forest.trees:
        del forest.trees[cand.root]
    forest.trees[cand.root] = fused
    forest.iteration += 1
    _assert_serves_terminals(inst, forest, fused)
    return added


def _assert_serves_terminals(
    inst: PnwstInstance, forest: RateForest, piece: TreePiece
) -> None:
    # Every merged-in terminal must reach the root through vertices at or
    # above its own priority, at the current levels.
    adj: dict[int, list[int]] = {v: [] for v in piece.vertices}
    for (u, w) in piece.edges:
        adj[u].append(w)
        adj[w].append(u)
    parent = {piece.root: 0}
    stack = [piece.root]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                stack.append(w)
    assert len(parent) == len(piece.vertices), "fused tree is disconnected"
    for t in piece.merged_terminals:
        need = inst.terminals[t]
        v = t
        while v != piece.root:
            assert forest.rates.get(v, 0) >= need, (
                f"vertex {v} below priority {need} on the path of terminal {t}"
            )
            v = parent[v]
        assert forest.rates.get(piece.root, 0) >= need


def greedy_merge(
    inst: PnwstInstance,
    charging: str = "residual",
    prefer_larger_groups: bool = False,
) -> PnwstRunReport:
    """Merge until one tree remains, then canonicalize its rates.

    Runs at most one iteration per terminal.  The reported solution is the
    minimal-rate assignment on the final tree; `per_iteration` records the
    score, group size, working-set size, and weight increment of each merge.
    """
    forest = init_rate_forest(inst)
    records: list[IterationRecord] = []
    while len(forest.trees) > 1:
        cand = minimize_merge_ratio(inst, forest, charging, prefer_larger_groups)
        size_before = len(forest.trees)
        added = apply_merge(inst, forest, cand)
        records.append(
            IterationRecord(cand.ratio, cand.group_size, size_before, added)
        )
        assert len(forest.trees) == size_before - cand.group_size + 1
    assert len(records) <= max(1, len(inst.terminals))

    (piece,) = forest.trees.values()
    solution = forced_rates(inst, piece.edges)
    raw = sum(inst.weight(v, lvl) for v, lvl in sorted(forest.rates.items()))
    return PnwstRunReport(solution, tuple(records), "pnwst", raw)
