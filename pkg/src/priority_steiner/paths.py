"""Rate-restricted shortest paths for both problem flavours.

``edge_rate_search`` prices every edge at a fixed level and runs Dijkstra
from a set of sources.  ``node_rate_search`` prices interior vertices at a
fixed level: the returned distance to x is the cheapest sum of interior
vertex weights over source-x paths, endpoints excluded, so adjacent vertices
are at distance 0.

A rate restriction never disconnects anything; it only changes prices.
Unreachable therefore means unreachable in the graph itself and is reported
as an infinite distance, never an error.  Heap ties break on the smaller
vertex id so parent trees are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Callable, Iterable, Optional

from .instances import PnwstInstance, PstInstance


@dataclass
class PathResult:
    """Distances and predecessor tree of one rate-restricted search.

    ``dist`` and ``parent`` are indexed by vertex id (entry 0 unused);
    parent is 0 at sources and at unreached vertices.  ``stopped_at`` is the
    vertex that satisfied an early-exit predicate, if one was given and hit.
    """

    dist: list[float]
    parent: list[int]
    restriction_rate: int
    sources: tuple[int, ...]
    stopped_at: Optional[int] = None

    def path_to(self, v: int) -> list[int]:
        """Vertex sequence from the reaching source to v."""
        if math.isinf(self.dist[v]):
            raise ValueError(f"vertex {v} unreachable")
        out = [v]
        src = set(self.sources)
        while out[-1] not in src:
            out.append(self.parent[out[-1]])
        out.reverse()
        return out


def edge_rate_search(
    inst: PstInstance,
    sources: Iterable[int],
    rate: int,
    stop: Optional[Callable[[int], bool]] = None,
) -> PathResult:
    """Multi-source Dijkstra with every edge priced at the given level.

    When ``stop`` is given the search halts right after settling the first
    vertex satisfying it (recorded as ``stopped_at``); remaining distances
    stay at their tentative values.
    """
    srcs = tuple(sorted(set(sources)))
    if not srcs:
        raise ValueError("at least one source is required")
    n = inst.graph.n
    adj = inst.graph.adjacency
    table = inst.edge_weights
    dist = [math.inf] * (n + 1)
    parent = [0] * (n + 1)
    done = [False] * (n + 1)
    heap: list[tuple[float, int]] = []
    for s in srcs:
        dist[s] = 0.0
        heappush(heap, (0.0, s))
    stopped = None
    while heap:
        d, u = heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        if stop is not None and stop(u):
            stopped = u
            break
        for v, eid in adj[u]:
            if done[v]:
                continue
            nd = d + (table[eid][rate - 1] if rate else 0.0)
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heappush(heap, (nd, v))
    return PathResult(dist, parent, rate, srcs, stopped)


def node_rate_search(
    inst: PnwstInstance,
    source: int,
    rate: int,
    current_rates: Optional[dict[int, int]] = None,
    stop: Optional[Callable[[int], bool]] = None,
) -> PathResult:
    """Single-source search under interior vertex prices at the given level.

    By default a vertex y costs its full table entry at the level.  With
    ``current_rates`` the cost drops to the residual
    max(0, w(y, level) - w(y, current)) so already-paid upgrades are free;
    candidate costs only shrink under this mode.
    """
    n = inst.graph.n
    adj = inst.graph.adjacency
    cost = [0.0] * (n + 1)
    for v in range(1, n + 1):
        w = inst.weight(v, rate)
        if current_rates is not None:
            w = max(0.0, w - inst.weight(v, current_rates.get(v, 0)))
        cost[v] = w
    # dist[y] counts interior vertices of the source-y path only: stepping
    # from x to y adds x's own price unless x is the source.
    dist = [math.inf] * (n + 1)
    parent = [0] * (n + 1)
    done = [False] * (n + 1)
    dist[source] = 0.0
    heap: list[tuple[float, int]] = [(0.0, source)]
    stopped = None
    while heap:
        d, u = heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        if stop is not None and stop(u):
            stopped = u
            break
        step = 0.0 if u == source else cost[u]
        for v, _eid in adj[u]:
            if done[v]:
                continue
            nd = d + step
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heappush(heap, (nd, v))
    return PathResult(dist, parent, rate, (source,), stopped)
