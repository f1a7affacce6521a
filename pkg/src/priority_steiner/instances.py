"""Problem instances and solutions for priority Steiner tree problems.

Two flavours are supported.  In the edge-weighted problem every edge has a
weight table indexed by rate level, and a solution assigns a level to each
selected edge; every terminal must reach the source through edges whose
level is at least the terminal's priority.  In the node-weighted problem the
weight tables and the level assignment live on vertices instead.

Levels are stored as indices 1..k (0 means "not selected"); the optional
``priorities`` tuple on :class:`PriorityGraph` records the level values, but
all algorithms compare indices only.  Weight at level 0 is always 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass
class PriorityGraph:
    """Undirected graph with ``n`` vertices (ids 1..n) and ``k`` rate levels.

    ``edges`` is an ordered list of vertex pairs; positions in this list are
    the edge ids used by weight tables.  ``priorities`` holds the increasing
    level values p_1 < ... < p_k (defaults to 1..k).
    """

    n: int
    edges: list[tuple[int, int]]
    k: int
    priorities: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("vertex count must be positive")
        if self.k < 1:
            raise ValueError("at least one priority level is required")
        self.edges = [canonical_edge(u, v) for (u, v) in self.edges]
        for (u, v) in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) references unknown vertex")
        if not self.priorities:
            self.priorities = tuple(float(i) for i in range(1, self.k + 1))
        elif len(self.priorities) != self.k:
            raise ValueError("one priority value per level is required")
        self._adj: Optional[list[list[tuple[int, int]]]] = None
        self._edge_index: Optional[dict[tuple[int, int], int]] = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """adjacency[v] = sorted list of (neighbour, edge id)."""
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n + 1)]
            for eid, (u, v) in enumerate(self.edges):
                if u != v:
                    adj[u].append((v, eid))
                    adj[v].append((u, eid))
            for lst in adj:
                lst.sort()
            self._adj = adj
        return self._adj

    @property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Canonical pair -> edge id (first occurrence wins)."""
        if self._edge_index is None:
            idx: dict[tuple[int, int], int] = {}
            for eid, pair in enumerate(self.edges):
                idx.setdefault(pair, eid)
            self._edge_index = idx
        return self._edge_index

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = [False] * (self.n + 1)
        stack = [1]
        seen[1] = True
        count = 1
        adj = self.adjacency
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == self.n


@dataclass
class PstInstance:
    """Edge-weighted instance: source, terminal priorities, per-edge tables.

    ``edge_weights[eid]`` is a length-k tuple; entry i-1 is the weight of the
    edge at level i.  Tables are expected to be nondecreasing in the level
    (checked by :func:`validate_instance`, not by the constructor).
    """

    graph: PriorityGraph
    source: int
    terminals: dict[int, int]
    edge_weights: list[tuple[float, ...]]

    kind = "PST"

    def __post_init__(self) -> None:
        if not (1 <= self.source <= self.graph.n):
            raise ValueError("source out of range")
        if len(self.edge_weights) != self.graph.m:
            raise ValueError("one weight row per edge is required")
        for row in self.edge_weights:
            if len(row) != self.graph.k:
                raise ValueError("weight rows must have one entry per level")

    def weight(self, eid: int, level: int) -> float:
        if level == 0:
            return 0.0
        return self.edge_weights[eid][level - 1]

    def weight_of_pair(self, pair: tuple[int, int], level: int) -> float:
        eid = self.graph.edge_index.get(canonical_edge(*pair))
        if eid is None:
            raise ValueError(f"unknown edge {pair}")
        return self.weight(eid, level)


@dataclass
class PnwstInstance:
    """Node-weighted instance: ``vertex_weights[v-1]`` is v's level table."""

    graph: PriorityGraph
    source: int
    terminals: dict[int, int]
    vertex_weights: list[tuple[float, ...]]

    kind = "PNWST"

    def __post_init__(self) -> None:
        if not (1 <= self.source <= self.graph.n):
            raise ValueError("source out of range")
        if len(self.vertex_weights) != self.graph.n:
            raise ValueError("one weight row per vertex is required")
        for row in self.vertex_weights:
            if len(row) != self.graph.k:
                raise ValueError("weight rows must have one entry per level")

    def weight(self, v: int, level: int) -> float:
        if level == 0:
            return 0.0
        return self.vertex_weights[v - 1][level - 1]


Instance = Union[PstInstance, PnwstInstance]


@dataclass(frozen=True)
class EdgeRateSolution:
    """Level assignment to edges; pairs with level 0 are dropped."""

    rates: dict[tuple[int, int], int]

    def __post_init__(self) -> None:
        clean = {canonical_edge(*e): r for e, r in self.rates.items() if r > 0}
        object.__setattr__(self, "rates", clean)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.rates)


@dataclass(frozen=True)
class VertexRateSolution:
    """Level assignment to vertices plus the tree edges connecting them."""

    rates: dict[int, int]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        clean = {v: r for v, r in self.rates.items() if r > 0}
        object.__setattr__(self, "rates", clean)
        object.__setattr__(
            self, "edges", tuple(sorted(canonical_edge(*e) for e in self.edges))
        )

    @property
    def vertices(self) -> list[int]:
        return sorted(self.rates)


Solution = Union[EdgeRateSolution, VertexRateSolution]


def validate_instance(inst: Instance) -> list[str]:
    """Return every violated instance assumption (empty list means ok).

    Violations are reported as human-readable strings naming the offending
    element; they are data, not exceptions.
    """
    g = inst.graph
    out: list[str] = []
    seen_pairs: set[tuple[int, int]] = set()
    for (u, v) in g.edges:
        if u == v:
            out.append(f"self-loop at vertex {u}")
        if (u, v) in seen_pairs:
            out.append(f"duplicate edge ({u},{v})")
        seen_pairs.add((u, v))
    if not g.is_connected():
        out.append("graph not connected")
    if any(b <= a for a, b in zip(g.priorities, g.priorities[1:])):
        out.append("priority levels not strictly increasing")
    if inst.source in inst.terminals:
        out.append(f"source {inst.source} listed as terminal")
    for t, lvl in sorted(inst.terminals.items()):
        if not (1 <= t <= g.n):
            out.append(f"terminal {t} not a vertex")
        if not (1 <= lvl <= g.k):
            out.append(f"terminal {t} priority {lvl} outside 1..{g.k}")

    if isinstance(inst, PstInstance):
        for eid, row in enumerate(inst.edge_weights):
            u, v = g.edges[eid]
            if any(w < 0 for w in row) or any(not math.isfinite(w) for w in row):
                out.append(f"negative or non-finite weight at edge ({u},{v})")
            if any(b < a for a, b in zip(row, row[1:])) or (row and row[0] < 0):
                out.append(f"monotonicity at edge ({u},{v})")
    else:
        for v in range(1, g.n + 1):
            row = inst.vertex_weights[v - 1]
            if any(w < 0 for w in row) or any(not math.isfinite(w) for w in row):
                out.append(f"negative or non-finite weight at vertex {v}")
            if any(b < a for a, b in zip(row, row[1:])):
                out.append(f"monotonicity at vertex {v}")
        for t, lvl in sorted(inst.terminals.items()):
            if 1 <= t <= g.n and 1 <= lvl <= g.k:
                if any(inst.vertex_weights[t - 1][i] != 0 for i in range(lvl)):
                    out.append(f"terminal nonzero weight at vertex {t}")
        if any(w != 0 for w in inst.vertex_weights[inst.source - 1]):
            out.append(f"source nonzero weight at vertex {inst.source}")
    return out


def solution_weight(inst: Instance, sol: Solution) -> float:
    """Sum of element weights at their assigned levels; empty solution is 0."""
    total = 0.0
    if isinstance(sol, EdgeRateSolution):
        if not isinstance(inst, PstInstance):
            raise ValueError("edge solution requires an edge-weighted instance")
        for pair, level in sorted(sol.rates.items()):
            total += inst.weight_of_pair(pair, level)
    else:
        if not isinstance(inst, PnwstInstance):
            raise ValueError("vertex solution requires a node-weighted instance")
        for v, level in sorted(sol.rates.items()):
            if not (1 <= v <= inst.graph.n):
                raise ValueError(f"unknown vertex {v}")
            total += inst.weight(v, level)
    return total


def _tree_parents(
    n: int, root: int, edges: Iterable[tuple[int, int]]
) -> Optional[tuple[dict[int, int], list[int]]]:
    """Parent map and top-down discovery order of the tree reached from root.

    Returns None if the reached edges hold a cycle.  Only the component
    containing the root is explored; the caller decides whether unreached
    edges are an error.
    """
    adj: dict[int, list[int]] = {}
    for (u, v) in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for lst in adj.values():
        lst.sort()
    parent = {root: 0}
    order = [root]
    stack = [root]
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):
            if v == parent[u]:
                continue
            if v in parent:
                return None
            parent[v] = u
            order.append(v)
            stack.append(v)
    return parent, order


def check_feasible(inst: Instance, sol: Solution) -> Optional[str]:
    """Return None if the solution is feasible, else the first violation.

    Checks, in order: the selected elements form one tree containing the
    source and all terminals, then for each terminal (ascending id) the rate
    constraint along its tree path to the source.
    """
    if isinstance(sol, EdgeRateSolution):
        return _check_pst(inst, sol)
    return _check_pnwst(inst, sol)


def _check_pst(inst: PstInstance, sol: EdgeRateSolution) -> Optional[str]:
    for pair in sol.rates:
        if pair not in inst.graph.edge_index:
            return f"unknown edge ({pair[0]},{pair[1]})"
    reached = _tree_parents(inst.graph.n, inst.source, sol.rates)
    if reached is None:
        return "selected edges contain a cycle"
    parent, _ = reached
    for t in sorted(inst.terminals):
        if t not in parent:
            return f"terminal {t} unreachable"
    touched = {u for e in sol.rates for u in e} | {inst.source}
    if len(parent) != len(touched):
        return "selected edges are disconnected from the source"
    for t, need in sorted(inst.terminals.items()):
        v = t
        while v != inst.source:
            p = parent[v]
            rate = sol.rates[canonical_edge(p, v)]
            if rate < need:
                return (
                    f"edge ({p},{v}) rate {rate} < required {need} "
                    f"for terminal {t}"
                )
            v = p
    return None


def _check_pnwst(inst: PnwstInstance, sol: VertexRateSolution) -> Optional[str]:
    for v in sol.rates:
        if not (1 <= v <= inst.graph.n):
            return f"unknown vertex {v}"
    selected = set(sol.rates)
    if inst.source not in selected:
        return "source not selected"
    for (u, v) in sol.edges:
        if canonical_edge(u, v) not in inst.graph.edge_index:
            return f"unknown edge ({u},{v})"
        if u not in selected or v not in selected:
            return f"edge ({u},{v}) touches an unselected vertex"
    reached = _tree_parents(inst.graph.n, inst.source, sol.edges)
    if reached is None:
        return "selected edges contain a cycle"
    parent, _ = reached
    for t in sorted(inst.terminals):
        if t not in parent:
            return f"terminal {t} unreachable"
    if set(parent) != selected:
        return "selected vertices are disconnected from the source"
    for t, need in sorted(inst.terminals.items()):
        if sol.rates[t] < need:
            return f"terminal {t} rate {sol.rates[t]} < required {need}"
        v = t
        while v != inst.source:
            v = parent[v]
            if sol.rates[v] < need:
                return (
                    f"vertex {v} rate {sol.rates[v]} < required {need} "
                    f"for terminal {t}"
                )
    return None


def forced_rates(inst: Instance, tree_edges: Iterable[tuple[int, int]]) -> Solution:
    """Minimal feasible levels on a tree spanning the source and terminals.

    Edge-weighted: an edge's level is the highest priority among terminals
    whose source path crosses it.  Node-weighted: a vertex's level is the
    highest priority among terminals in its subtree, the source getting the
    top level.  Elements needed by no terminal get level 0 and are dropped,
    so branches without terminals are pruned from the output.
    """
    edges = [canonical_edge(*e) for e in tree_edges]
    if len(set(edges)) != len(edges):
        raise ValueError("duplicate edges in tree")
    reached = _tree_parents(inst.graph.n, inst.source, edges)
    if reached is None:
        raise ValueError("input edges contain a cycle")
    parent, order = reached
    touched = {u for e in edges for u in e} | {inst.source}
    if len(parent) != len(touched):
        raise ValueError("input edges are not connected to the source")
    missing = [t for t in sorted(inst.terminals) if t not in parent]
    if missing:
        raise ValueError(f"terminal {missing[0]} not spanned by the tree")

    # Bottom-up max of terminal priorities (children precede parents when
    # the discovery order is reversed).
    high = {v: inst.terminals.get(v, 0) for v in parent}
    for v in reversed(order):
        if v != inst.source and high[v] > high[parent[v]]:
            high[parent[v]] = high[v]

    if isinstance(inst, PstInstance):
        rates = {}
        for v in parent:
            if v == inst.source:
                continue
            lvl = high[v]
            if lvl > 0:
                rates[canonical_edge(parent[v], v)] = lvl
        return EdgeRateSolution(rates)

    vrates = {inst.source: inst.graph.k}
    for v in parent:
        if v != inst.source and high[v] > 0:
            vrates[v] = high[v]
    kept = [
        canonical_edge(parent[v], v)
        for v in parent
        if v != inst.source and v in vrates
    ]
    return VertexRateSolution(vrates, tuple(kept))


def subdivide_to_node_weighted(
    inst: PstInstance,
    vertex_weights: Optional[Sequence[tuple[float, ...]]] = None,
) -> PnwstInstance:
    """Move edge weights onto fresh midpoint vertices.

    Every edge (u,v) becomes a path u-x-v through a new vertex x carrying the
    edge's weight table; original vertices keep the supplied vertex weights
    (all-zero when omitted).  Edge j's midpoint gets id n+j+1, so optimal
    values coincide with the edge-weighted input when the original vertices
    are free.
    """
    g = inst.graph
    zeros = tuple(0.0 for _ in range(g.k))
    if vertex_weights is None:
        vw: list[tuple[float, ...]] = [zeros] * g.n
    else:
        vw = [tuple(row) for row in vertex_weights]
        if len(vw) != g.n:
            raise ValueError("one vertex weight row per original vertex")
    new_edges: list[tuple[int, int]] = []
    for eid, (u, v) in enumerate(g.edges):
        x = g.n + eid + 1
        new_edges.append((u, x))
        new_edges.append((x, v))
    graph = PriorityGraph(g.n + g.m, new_edges, g.k, g.priorities)
    weights = vw + [tuple(inst.edge_weights[eid]) for eid in range(g.m)]
    return PnwstInstance(graph, inst.source, dict(inst.terminals), weights)
