import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from priority_steiner import (
    EdgeRateSolution,
    PnwstInstance,
    PriorityGraph,
    PstInstance,
    VertexRateSolution,
    check_feasible,
    forced_rates,
    gen_random_pst,
    gen_tightness_pnwst,
    solution_weight,
    subdivide_to_node_weighted,
    validate_instance,
)
from priority_steiner.oracle import exact_pnwst, exact_pst

from helpers import enum_best_assignment


def single_edge_pst(w1=1.0, w2=3.0, level=2):
    g = PriorityGraph(2, [(1, 2)], 2)
    return PstInstance(g, 1, {2: level}, [(w1, w2)])


class TestValidate:
    def test_monotone_single_edge_ok(self):
        assert validate_instance(single_edge_pst()) == []

    def test_monotonicity_breach_reported(self):
        bad = single_edge_pst(w1=1.0, w2=0.5)
        msgs = validate_instance(bad)
        assert any("monotonicity at edge (1,2)" in m for m in msgs)

    def test_terminal_nonzero_weight_reported(self):
        g = PriorityGraph(2, [(1, 2)], 2)
        inst = PnwstInstance(g, 1, {2: 2}, [(0.0, 0.0), (0.0, 4.0)])
        msgs = validate_instance(inst)
        assert any("terminal nonzero weight at vertex 2" in m for m in msgs)

    def test_source_weight_must_be_zero(self):
        g = PriorityGraph(2, [(1, 2)], 1)
        inst = PnwstInstance(g, 1, {2: 1}, [(2.0,), (0.0,)])
        msgs = validate_instance(inst)
        assert any("source nonzero weight" in m for m in msgs)

    def test_disconnected_reported(self):
        g = PriorityGraph(4, [(1, 2), (3, 4)], 1)
        inst = PstInstance(g, 1, {2: 1}, [(1.0,), (1.0,)])
        assert any("not connected" in m for m in validate_instance(inst))

    def test_duplicate_and_self_loop(self):
        g = PriorityGraph(3, [(1, 2), (2, 1), (3, 3)], 1)
        inst = PstInstance(g, 1, {2: 1}, [(1.0,)] * 3)
        msgs = " / ".join(validate_instance(inst))
        assert "duplicate edge (1,2)" in msgs
        assert "self-loop at vertex 3" in msgs

    @given(st.integers(0, 300))
    @settings(max_examples=40, deadline=None)
    def test_generated_instances_validate(self, seed):
        inst = gen_random_pst(7, 0.4, 3, 0.5, seed)
        assert validate_instance(inst) == []


class TestSolutionWeight:
    def test_empty_solution_is_zero(self):
        assert solution_weight(single_edge_pst(), EdgeRateSolution({})) == 0.0

    def test_single_edge_at_level_two(self):
        inst = single_edge_pst()
        assert solution_weight(inst, EdgeRateSolution({(1, 2): 2})) == 3.0

    def test_tightness_hub_star_weighs_one(self):
        inst = gen_tightness_pnwst(3)
        hub = 5
        rates = {1: 1, 2: 1, 3: 1, 4: 1, hub: 1}
        edges = tuple((b, hub) for b in (1, 2, 3, 4))
        sol = VertexRateSolution(rates, edges)
        assert check_feasible(inst, sol) is None
        assert solution_weight(inst, sol) == 1.0

    def test_unknown_edge_rejected(self):
        inst = single_edge_pst()
        with pytest.raises(ValueError):
            solution_weight(inst, EdgeRateSolution({(1, 9): 1}))


def path_instance():
    # 1 -- 2 -- 3 with terminal 3, plus priorities up to 2
    g = PriorityGraph(3, [(1, 2), (2, 3)], 2)
    return PstInstance(g, 1, {3: 1}, [(1.0, 2.0), (1.0, 2.0)])


class TestCheckFeasible:
    def test_path_ok(self):
        sol = EdgeRateSolution({(1, 2): 1, (2, 3): 1})
        assert check_feasible(path_instance(), sol) is None

    def test_unreachable_terminal(self):
        sol = EdgeRateSolution({(2, 3): 1})
        msg = check_feasible(path_instance(), sol)
        assert "terminal 3 unreachable" in msg

    def test_rate_too_low_on_path(self):
        g = PriorityGraph(3, [(1, 2), (2, 3)], 2)
        inst = PstInstance(g, 1, {3: 2}, [(1.0, 2.0), (1.0, 2.0)])
        sol = EdgeRateSolution({(1, 2): 1, (2, 3): 2})
        msg = check_feasible(inst, sol)
        assert "rate 1 < required 2" in msg
        assert "(1,2)" in msg

    def test_cycle_detected(self):
        g = PriorityGraph(3, [(1, 2), (2, 3), (1, 3)], 1)
        inst = PstInstance(g, 1, {3: 1}, [(1.0,)] * 3)
        sol = EdgeRateSolution({(1, 2): 1, (2, 3): 1, (1, 3): 1})
        assert "cycle" in check_feasible(inst, sol)

    def test_vertex_rate_violation(self):
        g = PriorityGraph(3, [(1, 2), (2, 3)], 2)
        inst = PnwstInstance(
            g, 1, {3: 2}, [(0.0, 0.0), (1.0, 2.0), (0.0, 0.0)]
        )
        sol = VertexRateSolution({1: 2, 2: 1, 3: 2}, ((1, 2), (2, 3)))
        msg = check_feasible(inst, sol)
        assert "vertex 2 rate 1 < required 2" in msg


class TestSubdivision:
    def test_single_edge_becomes_weighted_midpoint(self):
        inst = single_edge_pst()
        out = subdivide_to_node_weighted(inst)
        assert out.graph.n == 3
        assert out.graph.edges == [(1, 3), (2, 3)]
        assert out.vertex_weights[2] == (1.0, 3.0)
        assert out.vertex_weights[0] == (0.0, 0.0)
        assert validate_instance(out) == []

    def test_counts(self):
        inst = gen_random_pst(7, 0.5, 2, 0.5, 11)
        out = subdivide_to_node_weighted(inst)
        assert out.graph.n == inst.graph.n + inst.graph.m
        assert out.graph.m == 2 * inst.graph.m
        assert validate_instance(out) == []

    def test_single_edge_optimum_preserved(self):
        inst = single_edge_pst()
        assert exact_pst(inst).opt_weight == 3.0
        assert exact_pnwst(subdivide_to_node_weighted(inst)).opt_weight == 3.0


class TestForcedRates:
    def test_star(self):
        g = PriorityGraph(3, [(1, 2), (1, 3)], 2)
        inst = PstInstance(g, 1, {2: 2, 3: 1}, [(1.0, 2.0), (1.0, 2.0)])
        sol = forced_rates(inst, [(1, 2), (1, 3)])
        assert sol.rates == {(1, 2): 2, (1, 3): 1}

    def test_shared_prefix(self):
        # 1 -- 2 -- 3(level 2) and branch 2 -- 4(level 1)
        g = PriorityGraph(4, [(1, 2), (2, 3), (2, 4)], 2)
        inst = PstInstance(g, 1, {3: 2, 4: 1}, [(1.0, 2.0)] * 3)
        sol = forced_rates(inst, g.edges)
        assert sol.rates == {(1, 2): 2, (2, 3): 2, (2, 4): 1}

    def test_vertex_rates_and_pruning(self):
        # Branch without terminals is dropped; source gets the top level.
        g = PriorityGraph(4, [(1, 2), (2, 3), (2, 4)], 2)
        inst = PnwstInstance(g, 1, {3: 2}, [(0.0, 0.0)] * 2 + [(0.0, 0.0), (1.0, 2.0)])
        sol = forced_rates(inst, g.edges)
        assert sol.rates == {1: 2, 2: 2, 3: 2}
        assert sol.edges == ((1, 2), (2, 3))

    def test_rejects_cycles_and_missing_terminals(self):
        g = PriorityGraph(3, [(1, 2), (2, 3), (1, 3)], 1)
        inst = PstInstance(g, 1, {3: 1}, [(1.0,)] * 3)
        with pytest.raises(ValueError):
            forced_rates(inst, g.edges)
        with pytest.raises(ValueError):
            forced_rates(inst, [(1, 2)])

    @given(st.integers(0, 500))
    @settings(max_examples=30, deadline=None)
    def test_minimal_among_feasible_assignments(self, seed):
        inst = gen_random_pst(6, 0.0, 2, 0.6, seed)  # density 0 -> a tree
        tree = list(inst.graph.edges)
        sol = forced_rates(inst, tree)
        assert check_feasible(inst, sol) is None
        best = enum_best_assignment(inst, tree)
        assert solution_weight(inst, sol) == best

    @given(st.integers(0, 500))
    @settings(max_examples=20, deadline=None)
    def test_idempotent_on_its_own_tree(self, seed):
        inst = gen_random_pst(7, 0.0, 3, 0.5, seed)
        sol = forced_rates(inst, inst.graph.edges)
        again = forced_rates(inst, sol.edges)
        assert again.rates == sol.rates
