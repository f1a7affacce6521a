"""Edge-weighted solvers.

Three approximation strategies plus a combinator:

* ``attach_by_priority`` grows a tree from the source, connecting terminals
  in decreasing priority order by cheapest rate-restricted paths.
* ``attach_to_higher_priority`` connects every terminal independently to the
  nearest vertex of strictly higher effective priority; the per-terminal
  searches are read-only and may run in parallel.
* ``per_level_union`` builds one metric-closure Steiner approximation per
  priority level and unions the trees.
* ``best_of`` returns the lightest of the three results.

All solvers finish with ``remove_cycles``: a maximum-rate spanning forest
sweep (equivalent to repeatedly deleting a minimum-rate edge from each
cycle), dead-branch pruning, and minimal-rate canonicalization.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .instances import (
    EdgeRateSolution,
    PriorityGraph,
    PstInstance,
    canonical_edge,
    forced_rates,
    solution_weight,
)
from .paths import edge_rate_search


@dataclass
class PstRunReport:
    """Solver output plus the per-terminal attachment data behind it.

    ``connection_costs`` maps each terminal to the weight of the path that
    attached it (only the two attachment solvers fill it).  ``order`` is the
    attachment sequence for the sequential solver and the (terminal, parent)
    choices for the parallel one.  Cycle removal only discards weight, so
    the costs always sum to at least the final solution weight.
    """

    solution: EdgeRateSolution
    connection_costs: dict[int, float] = field(default_factory=dict)
    order: tuple = ()
    solver_tag: str = ""


class _DisjointSets:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def remove_cycles(
    inst: PstInstance, rates: dict[tuple[int, int], int]
) -> EdgeRateSolution:
    """Break cycles, prune dead branches, and canonicalize rates.

    Keeps a maximum-rate spanning forest of the positive-rate edges: an edge
    survives over a cycle-mate when it has the higher rate, then the lower
    weight at its own rate, then the smaller edge id.  Edges left outside
    the source component are dropped, then rates are recomputed as the
    minimal feasible assignment on the remaining tree.
    """
    idx = inst.graph.edge_index
    entries = []
    for pair, lvl in rates.items():
        pair = canonical_edge(*pair)
        if lvl <= 0:
            continue
        eid = idx.get(pair)
        if eid is None:
            raise ValueError(f"unknown edge {pair}")
        entries.append((-lvl, inst.weight(eid, lvl), eid, pair))
    entries.sort()
    ds = _DisjointSets(inst.graph.n)
    kept = [pair for (_, _, _, pair) in entries if ds.union(*pair)]

    src_root = ds.find(inst.source)
    kept = [p for p in kept if ds.find(p[0]) == src_root]
    return forced_rates(inst, kept)


def attach_by_priority(inst: PstInstance) -> PstRunReport:
    """Grow a tree from the source, highest-priority terminals first.

    Each terminal is attached by the cheapest path at its own level to the
    vertices reached so far; path edges are raised to that level if needed.
    Equal priorities attach in ascending vertex id order.
    """
    reached = {inst.source}
    rates: dict[tuple[int, int], int] = {}
    costs: dict[int, float] = {}
    order = tuple(sorted(inst.terminals, key=lambda t: (-inst.terminals[t], t)))
    for t in order:
        lvl = inst.terminals[t]
        res = edge_rate_search(inst, [t], lvl, stop=reached.__contains__)
        assert res.stopped_at is not None, "connected graphs always attach"
        costs[t] = res.dist[res.stopped_at]
        path = res.path_to(res.stopped_at)
        for a, b in zip(path, path[1:]):
            e = canonical_edge(a, b)
            if rates.get(e, 0) < lvl:
                rates[e] = lvl
        reached.update(path)
    return PstRunReport(remove_cycles(inst, rates), costs, order, "alg1")


def _effective_priorities(inst: PstInstance) -> dict[int, tuple[int, int]]:
    # Lexicographic (level, vertex id); the source outranks everything.
    eff = {t: (lvl, t) for t, lvl in inst.terminals.items()}
    eff[inst.source] = (inst.graph.k + 1, 0)
    return eff


def _attach_one(
    inst: PstInstance, eff: dict[int, tuple[int, int]], t: int
) -> tuple[int, float, list[int]]:
    lvl = inst.terminals[t]
    mine = eff[t]
    res = edge_rate_search(
        inst, [t], lvl, stop=lambda u: u in eff and eff[u] > mine
    )
    assert res.stopped_at is not None, "the source always qualifies"
    return res.stopped_at, res.dist[res.stopped_at], res.path_to(res.stopped_at)


def attach_to_higher_priority(inst: PstInstance, workers: int = 1) -> PstRunReport:
    """Connect every terminal to its nearest strictly-higher-priority vertex.

    Priority ties are ordered by vertex id (the source ranks above all
    terminals), so parents are unique.  Searches are independent; with
    ``workers`` > 1 they run on a thread pool and the merged result is
    identical to the sequential one because edge levels combine by max.
    """
    terms = sorted(inst.terminals)
    eff = _effective_priorities(inst)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(lambda t: _attach_one(inst, eff, t), terms))
    else:
        found = [_attach_one(inst, eff, t) for t in terms]

    rates: dict[tuple[int, int], int] = {}
    costs: dict[int, float] = {}
    parents = []
    for t, (parent, cost, path) in zip(terms, found):
        lvl = inst.terminals[t]
        costs[t] = cost
        parents.append((t, parent))
        for a, b in zip(path, path[1:]):
            e = canonical_edge(a, b)
            if rates.get(e, 0) < lvl:
                rates[e] = lvl
    return PstRunReport(remove_cycles(inst, rates), costs, tuple(parents), "alg2")


def steiner_mst_approx(
    graph: PriorityGraph, terminals: set[int], weights: list[float]
) -> list[tuple[int, int]]:
    """Metric-closure MST Steiner approximation at a single rate.

    Builds the shortest-path closure over the terminals, takes its minimum
    spanning tree, expands closure edges back into graph paths, and cleans
    the union.  The result is within 2(1 - 1/|terminals|) of the optimal
    Steiner tree for the given weights.
    """
    if not terminals:
        raise ValueError("at least one terminal is required")
    terms = sorted(terminals)
    inst = PstInstance(
        PriorityGraph(graph.n, list(graph.edges), 1),
        terms[0],
        {t: 1 for t in terms[1:]},
        [(float(w),) for w in weights],
    )
    if len(terms) == 1:
        return []
    searches = {t: edge_rate_search(inst, [t], 1) for t in terms}
    closure = sorted(
        (searches[a].dist[b], a, b)
        for i, a in enumerate(terms)
        for b in terms[i + 1 :]
    )
    ds = _DisjointSets(graph.n)
    rates: dict[tuple[int, int], int] = {}
    for d, a, b in closure:
        if ds.union(a, b):
            path = searches[a].path_to(b)
            for x, y in zip(path, path[1:]):
                rates[canonical_edge(x, y)] = 1
    return remove_cycles(inst, rates).edges


def per_level_union(inst: PstInstance) -> PstRunReport:
    """Union of one single-rate Steiner approximation per priority level.

    Level i's tree spans the level-i terminals and the source under the
    level-i weights; shared edges take the highest contributing level.
    The result weighs at most 2k times the optimum.
    """
    rates: dict[tuple[int, int], int] = {}
    for lvl in range(1, inst.graph.k + 1):
        group = {t for t, l in inst.terminals.items() if l == lvl}
        if not group:
            continue
        row = [inst.edge_weights[eid][lvl - 1] for eid in range(inst.graph.m)]
        tree = steiner_mst_approx(inst.graph, group | {inst.source}, row)
        for pair in tree:
            if rates.get(pair, 0) < lvl:
                rates[pair] = lvl
    return PstRunReport(remove_cycles(inst, rates), {}, (), "krho")


def best_of(inst: PstInstance) -> PstRunReport:
    """Run all three solvers and return the lightest feasible result."""
    reports = [
        attach_by_priority(inst),
        attach_to_higher_priority(inst),
        per_level_union(inst),
    ]
    best = min(reports, key=lambda r: solution_weight(inst, r.solution))
    return PstRunReport(
        best.solution,
        best.connection_costs,
        best.order,
        f"best:{best.solver_tag}",
    )
