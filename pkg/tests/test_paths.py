import math

from hypothesis import given, settings
from hypothesis import strategies as st

from priority_steiner import (
    PnwstInstance,
    PriorityGraph,
    PstInstance,
    edge_rate_search,
    gen_random_pnwst,
    gen_random_pst,
    gen_tightness_pnwst,
    node_rate_search,
)

from helpers import enum_edge_path_cost, enum_node_path_cost


def triangle(scale=1.0):
    g = PriorityGraph(3, [(1, 2), (2, 3), (1, 3)], 2)
    rows = [(1.0, 2.0), (1.0, 2.0), (3.0, 6.0)]
    rows = [tuple(w * scale for w in r) for r in rows]
    return PstInstance(g, 1, {3: 1}, rows)


class TestEdgeSearch:
    def test_source_distance_zero(self):
        res = edge_rate_search(triangle(), [2], 1)
        assert res.dist[2] == 0.0

    def test_triangle_detour_beats_direct(self):
        inst = triangle()
        res = edge_rate_search(inst, [1], 1)
        # Enumeration oracle confirms the frozen value 2.
        assert enum_edge_path_cost(inst, 1, 3, 1) == 2.0
        assert res.dist[3] == 2.0
        assert res.path_to(3) == [1, 2, 3]

    def test_triangle_doubled_at_level_two(self):
        inst = triangle()
        res = edge_rate_search(inst, [1], 2)
        assert enum_edge_path_cost(inst, 1, 3, 2) == 4.0
        assert res.dist[3] == 4.0

    def test_multi_source_takes_nearest(self):
        inst = triangle()
        res = edge_rate_search(inst, [2, 3], 1)
        assert res.dist[1] == 1.0
        assert res.path_to(1)[0] in (2, 3)

    def test_early_exit_predicate(self):
        inst = triangle()
        res = edge_rate_search(inst, [1], 1, stop=lambda u: u == 2)
        assert res.stopped_at == 2
        assert res.dist[2] == 1.0


class TestNodeSearch:
    def test_adjacent_costs_nothing(self):
        inst = gen_tightness_pnwst(3)
        res = node_rate_search(inst, 1, 1)
        assert res.dist[5] == 0.0  # the hub is adjacent to the source

    def test_single_interior_vertex(self):
        g = PriorityGraph(3, [(1, 2), (2, 3)], 1)
        inst = PnwstInstance(g, 1, {3: 1}, [(0.0,), (5.0,), (0.0,)])
        res = node_rate_search(inst, 1, 1)
        assert res.dist[3] == 5.0
        assert res.dist[2] == 0.0

    def test_tightness_prefers_cheap_top_vertex(self):
        inst = gen_tightness_pnwst(3)
        res = node_rate_search(inst, 1, 1)
        # Two ways from the source to the first terminal: over the first
        # bridge (0.5) or through the hub (1).
        assert enum_node_path_cost(inst, 1, 2, 1) == 0.5
        assert res.dist[2] == 0.5
        assert res.path_to(2) == [1, 6, 2]

    def test_residual_discounts_paid_vertices(self):
        inst = gen_tightness_pnwst(3)
        paid = {6: 1}
        res = node_rate_search(inst, 1, 1, current_rates=paid)
        assert res.dist[2] == 0.0
        full = node_rate_search(inst, 1, 1)
        for v in range(1, inst.graph.n + 1):
            assert res.dist[v] <= full.dist[v]

    def test_residual_with_no_rates_matches_full(self):
        inst = gen_random_pnwst(8, 0.4, 2, 0.5, 3)
        a = node_rate_search(inst, 1, 2)
        b = node_rate_search(inst, 1, 2, current_rates={})
        assert a.dist == b.dist

    def test_early_exit_predicate(self):
        inst = gen_tightness_pnwst(3)
        res = node_rate_search(inst, 1, 1, stop=lambda u: u in inst.terminals)
        assert res.stopped_at in inst.terminals
        assert res.dist[res.stopped_at] == 0.5


class TestProperties:
    @given(st.integers(0, 400))
    @settings(max_examples=30, deadline=None)
    def test_edge_search_matches_enumeration(self, seed):
        inst = gen_random_pst(7, 0.4, 2, 0.5, seed)
        for level in (1, 2):
            res = edge_rate_search(inst, [1], level)
            for v in range(1, 8):
                assert res.dist[v] == enum_edge_path_cost(inst, 1, v, level)

    @given(st.integers(0, 400))
    @settings(max_examples=30, deadline=None)
    def test_node_search_matches_enumeration(self, seed):
        inst = gen_random_pnwst(7, 0.4, 2, 0.5, seed)
        for level in (1, 2):
            res = node_rate_search(inst, 2, level)
            for v in range(1, 8):
                assert res.dist[v] == enum_node_path_cost(inst, 2, v, level)

    @given(st.integers(0, 400), st.integers(1, 2))
    @settings(max_examples=30, deadline=None)
    def test_symmetry(self, seed, level):
        pst = gen_random_pst(9, 0.4, 2, 0.5, seed)
        pn = gen_random_pnwst(9, 0.4, 2, 0.5, seed)
        for u, v in [(1, 5), (2, 8), (3, 7)]:
            assert (
                edge_rate_search(pst, [u], level).dist[v]
                == edge_rate_search(pst, [v], level).dist[u]
            )
            assert (
                node_rate_search(pn, u, level).dist[v]
                == node_rate_search(pn, v, level).dist[u]
            )

    @given(st.integers(0, 400))
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_rate(self, seed):
        inst = gen_random_pst(8, 0.4, 3, 0.5, seed)
        by_level = [edge_rate_search(inst, [1], b).dist for b in (1, 2, 3)]
        for lo, hi in zip(by_level, by_level[1:]):
            for v in range(1, 9):
                assert lo[v] <= hi[v]

    @given(st.integers(0, 400))
    @settings(max_examples=25, deadline=None)
    def test_paths_realize_distances(self, seed):
        inst = gen_random_pst(8, 0.4, 2, 0.5, seed)
        res = edge_rate_search(inst, [1], 2)
        for v in range(2, 9):
            if math.isinf(res.dist[v]):
                continue
            path = res.path_to(v)
            cost = sum(
                inst.weight_of_pair((a, b), 2) for a, b in zip(path, path[1:])
            )
            assert cost == res.dist[v]
