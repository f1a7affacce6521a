"""Exact optima by exhaustive tree enumeration, for desk-scale instances.

Candidate trees are grown edge by edge from the source; every subtree of
the graph containing the source is visited at most once via binary
include/exclude branching with permanent exclusion.  A grown tree is scored
by its minimal feasible rates, so junk branches cost nothing and the scan
can stop as soon as all terminals are reached.  Level-1 weights of the
chosen elements give a lower bound used to prune against the incumbent,
which starts from a verified heuristic solution.

These oracles refuse instances above the edge guard rather than
approximate: exactness is the whole point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .instances import (
    EdgeRateSolution,
    PnwstInstance,
    PriorityGraph,
    PstInstance,
    Solution,
    VertexRateSolution,
    check_feasible,
    forced_rates,
    solution_weight,
)

DEFAULT_MAX_EDGES = 24
_MAX_OPTIONAL = 20


class InstanceTooLargeError(ValueError):
    """Raised instead of silently approximating when the guard trips."""


@dataclass
class OracleResult:
    opt_weight: float
    witness: Solution
    enumerated: int


def _guard(m: int, max_edges: int) -> None:
    if m > max_edges:
        raise InstanceTooLargeError(
            f"instance has {m} edges, oracle guard allows {max_edges}"
        )


def _evaluate_pst(inst: PstInstance, parent_eid: dict[int, tuple[int, int]]) -> float:
    """Forced-rate weight of a grown tree given v -> (parent, edge id)."""
    high = {v: inst.terminals.get(v, 0) for v in parent_eid}
    high[inst.source] = inst.terminals.get(inst.source, 0)
    for v in reversed(list(parent_eid)):
        p = parent_eid[v][0]
        if high[v] > high.get(p, 0):
            high[p] = high[v]
    total = 0.0
    for v, (_, eid) in parent_eid.items():
        lvl = high[v]
        if lvl > 0:
            total += inst.edge_weights[eid][lvl - 1]
    return total


def exact_pst(
    inst: PstInstance,
    max_edges: int = DEFAULT_MAX_EDGES,
    warm_start: bool = True,
) -> OracleResult:
    """Exact optimum of an edge-weighted instance.

    Enumerates trees containing the source; each is scored with its forced
    rates, which are pointwise-minimal feasible, so no rate assignment can
    beat the best tree.
    """
    _guard(inst.graph.m, max_edges)
    g = inst.graph
    terms = set(inst.terminals)
    if not terms:
        return OracleResult(0.0, EdgeRateSolution({}), 0)

    best = math.inf
    best_tree: Optional[list[tuple[int, int]]] = None
    witness: Optional[Solution] = None
    if warm_start:
        from .pst import best_of

        report = best_of(inst)
        if check_feasible(inst, report.solution) is None:
            best = solution_weight(inst, report.solution)
            witness = report.solution

    base = [row[0] for row in inst.edge_weights]
    in_tree = [False] * (g.n + 1)
    in_tree[inst.source] = True
    banned = [False] * g.m
    parent_eid: dict[int, tuple[int, int]] = {}
    state = {"count": 0, "best": best, "tree": best_tree, "missing": len(terms)}

    def evaluate() -> None:
        state["count"] += 1
        w = _evaluate_pst(inst, parent_eid)
        if w < state["best"]:
            state["best"] = w
            state["tree"] = [g.edges[eid] for (_, eid) in parent_eid.values()]

    def rec(frontier: list[int], lb: float) -> None:
        if state["missing"] == 0:
            evaluate()
            return
        pos = 0
        while pos < len(frontier):
            eid = frontier[pos]
            u, v = g.edges[eid]
            if in_tree[u] and in_tree[v]:
                pos += 1
                continue
            break
        else:
            return
        rest = frontier[pos + 1 :]
        u, v = g.edges[eid]
        new = v if in_tree[u] else u
        old = u if in_tree[u] else v

        nlb = lb + base[eid]
        if nlb < state["best"]:
            in_tree[new] = True
            parent_eid[new] = (old, eid)
            if new in terms:
                state["missing"] -= 1
            grown = rest + [
                e for (_, e) in g.adjacency[new] if e != eid and not banned[e]
            ]
            rec(grown, nlb)
            if new in terms:
                state["missing"] += 1
            del parent_eid[new]
            in_tree[new] = False

        banned[eid] = True
        rec(rest, lb)
        banned[eid] = False

    start = [e for (_, e) in g.adjacency[inst.source]]
    rec(start, 0.0)

    if state["tree"] is not None:
        witness = forced_rates(inst, state["tree"])
    assert witness is not None, "connected instances always have a tree"
    opt = state["best"]
    assert abs(solution_weight(inst, witness) - opt) < 1e-9
    return OracleResult(opt, witness, state["count"])


def _evaluate_pnwst(
    inst: PnwstInstance, parent_of: dict[int, int]
) -> float:
    high = {v: inst.terminals.get(v, 0) for v in parent_of}
    high[inst.source] = 0
    for v in reversed(list(parent_of)):
        p = parent_of[v]
        if high[v] > high.get(p, 0):
            high[p] = high[v]
    total = 0.0
    for v in parent_of:
        lvl = high[v]
        if lvl > 0:
            total += inst.weight(v, lvl)
    # The source is charged at the top level, which is zero by assumption.
    total += inst.weight(inst.source, inst.graph.k)
    return total


def exact_pnwst(
    inst: PnwstInstance,
    max_edges: int = DEFAULT_MAX_EDGES,
    warm_start: bool = True,
) -> OracleResult:
    """Exact optimum of a node-weighted instance.

    With a single level the tree shape is irrelevant, so vertex subsets are
    enumerated instead of trees; otherwise the same tree scan as the
    edge-weighted oracle runs with vertex scoring.
    """
    _guard(inst.graph.m, max_edges)
    if inst.graph.k == 1:
        return _exact_pnwst_single_level(inst)
    g = inst.graph
    terms = set(inst.terminals)
    if not terms:
        sol = VertexRateSolution({inst.source: g.k}, ())
        return OracleResult(0.0, sol, 0)

    best = math.inf
    witness: Optional[Solution] = None
    if warm_start:
        from .pnwst import greedy_merge

        report = greedy_merge(inst)
        if check_feasible(inst, report.solution) is None:
            best = solution_weight(inst, report.solution)
            witness = report.solution

    base = [0.0] * (g.n + 1)
    for v in range(1, g.n + 1):
        if v not in terms and v != inst.source:
            base[v] = inst.weight(v, 1)
    in_tree = [False] * (g.n + 1)
    in_tree[inst.source] = True
    banned = [False] * g.m
    parent_of: dict[int, int] = {}
    parent_edge: dict[int, tuple[int, int]] = {}
    state = {"count": 0, "best": best, "tree": None, "missing": len(terms)}

    def evaluate() -> None:
        state["count"] += 1
        w = _evaluate_pnwst(inst, parent_of)
        if w < state["best"]:
            state["best"] = w
            state["tree"] = list(parent_edge.values())

    def rec(frontier: list[int], lb: float) -> None:
        if state["missing"] == 0:
            evaluate()
            return
        pos = 0
        while pos < len(frontier):
            eid = frontier[pos]
            u, v = g.edges[eid]
            if in_tree[u] and in_tree[v]:
                pos += 1
                continue
            break
        else:
            return
        rest = frontier[pos + 1 :]
        u, v = g.edges[eid]
        new = v if in_tree[u] else u
        old = u if in_tree[u] else v

        nlb = lb + base[new]
        if nlb < state["best"]:
            in_tree[new] = True
            parent_of[new] = old
            parent_edge[new] = g.edges[eid]
            if new in terms:
                state["missing"] -= 1
            grown = rest + [
                e for (_, e) in g.adjacency[new] if e != eid and not banned[e]
            ]
            rec(grown, nlb)
            if new in terms:
                state["missing"] += 1
            del parent_of[new]
            del parent_edge[new]
            in_tree[new] = False

        banned[eid] = True
        rec(rest, lb)
        banned[eid] = False

    rec([e for (_, e) in g.adjacency[inst.source]], 0.0)

    if state["tree"] is not None:
        witness = forced_rates(inst, state["tree"])
    assert witness is not None
    opt = state["best"]
    assert abs(solution_weight(inst, witness) - opt) < 1e-9
    return OracleResult(opt, witness, state["count"])


def _exact_pnwst_single_level(inst: PnwstInstance) -> OracleResult:
    g = inst.graph
    required = sorted(set(inst.terminals) | {inst.source})
    optional = [
        v for v in range(1, g.n + 1) if v not in inst.terminals and v != inst.source
    ]
    if len(optional) > _MAX_OPTIONAL:
        raise InstanceTooLargeError(
            f"{len(optional)} optional vertices exceed the single-level guard"
        )
    adj = g.adjacency
    costs = [inst.weight(v, 1) for v in range(g.n + 1)]

    best = math.inf
    best_used: Optional[set[int]] = None
    count = 0
    for mask in range(1 << len(optional)):
        used = set(required)
        total = 0.0
        for i, v in enumerate(optional):
            if mask >> i & 1:
                used.add(v)
                total += costs[v]
        if total >= best:
            continue
        count += 1
        seen = {inst.source}
        stack = [inst.source]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y in used and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if used <= seen:
            best = total
            best_used = used
    assert best_used is not None, "connected instances always have a solution"

    # Deterministic witness: breadth-first tree of the winning vertex set.
    parent = {inst.source: 0}
    queue = [inst.source]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for y, _ in adj[x]:
            if y in best_used and y not in parent:
                parent[y] = x
                queue.append(y)
    edges = [(parent[v], v) for v in queue if v != inst.source]
    witness = forced_rates(inst, edges)
    assert abs(solution_weight(inst, witness) - best) < 1e-9
    return OracleResult(best, witness, count)


def exact_steiner(
    graph: PriorityGraph,
    terminals: set[int],
    weights: list[float],
    max_edges: int = DEFAULT_MAX_EDGES,
) -> OracleResult:
    """Exact minimum-weight tree spanning the terminal set at one rate."""
    terms = sorted(terminals)
    if not terms:
        raise ValueError("at least one terminal is required")
    inst = PstInstance(
        PriorityGraph(graph.n, list(graph.edges), 1),
        terms[0],
        {t: 1 for t in terms[1:]},
        [(float(w),) for w in weights],
    )
    return exact_pst(inst, max_edges=max_edges)
