import json
from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest

from permlogic.catalan import catalan
from permlogic.classchain import (
    aperiodicity_check,
    build_graph,
    class_frequencies,
    config_moment,
    estimate_component_mass,
    estimate_probability,
    replacement_time,
    scc_analysis,
    state_census,
    survival_curve,
    well_definedness_check,
    wilson_interval,
)
from permlogic.fo import builtin, parse
from permlogic.perm import Permutation, enumerate_avoiders, insertion_slots
from permlogic.rng import stream

GOLDEN = Path(__file__).parent / "golden"
P = Permutation.parse


@pytest.fixture(scope="module")
def graphs():
    return {d: build_graph(2, d) for d in (6, 7, 8)}


def class_rep_strings(g, comp):
    out = set()
    for s in range(g.n_states):
        if g.class_of_state[s] in comp:
            out.add(str(g.states[s].class_id))
    return sorted(out)


class TestBuild:
    def test_depth_one(self):
        g = build_graph(2, 1)
        assert g.n_states == 1 and g.edges == {}

    def test_root_split(self):
        g = build_graph(3, 2)
        assert g.perm_state[P("12")] != g.perm_state[P("21")]

    def test_bounds(self):
        with pytest.raises(ValueError):
            build_graph(4, 3)
        with pytest.raises(ValueError):
            build_graph(2, 10)

    def test_realizer_edge_count(self, graphs):
        g = graphs[7]
        for n in range(1, 7):
            realized = sum(len(insertion_slots(p)) for p in g.perm_state if p.n == n)
            assert realized == catalan(n + 1)

    def test_representatives_are_shortlex_least(self, graphs):
        g = graphs[6]
        for s in range(g.n_states):
            rep = g.states[s].class_id
            same = [p for p, t in g.perm_state.items() if g.class_of_state[t] == g.class_of_state[s]]
            assert rep == min(same, key=lambda p: (p.n, p.values))

    def test_jsonl_export(self, graphs):
        lines = graphs[6].to_jsonl().splitlines()
        assert len(lines) == graphs[6].n_states
        first = json.loads(lines[0])
        assert set(first) == {"state_id", "representative", "config", "edges"}
        assert first["representative"] == "1"

    def test_reverse_representatives_give_the_same_graph(self):
        a, b = build_graph(2, 6), build_graph(2, 6, order="reverse")
        assert a.n_states == b.n_states
        # perm -> state induces a bijection that carries labelled edges across
        mapping = {}
        for p, s in a.perm_state.items():
            assert mapping.setdefault(s, b.perm_state[p]) == b.perm_state[p]
        assert len(set(mapping.values())) == a.n_states
        moved = {(mapping[u], slot, mapping[v]) for u, slot, v in a.edge_list()}
        assert moved == set(b.edge_list())

    def test_no_conflicts_through_length_six(self, graphs):
        assert graphs[6].conflicts() == []

    def test_conflicts_appear_at_length_seven(self, graphs):
        assert len(graphs[7].conflicts()) == 2

    def test_census(self, graphs):
        census = state_census(graphs[8])
        assert sum(census.values()) <= graphs[8].n_states
        assert census[1] == 1 and census[2] == 2


class TestSCC:
    def test_single_vertex(self):
        g = nx.DiGraph()
        g.add_node(0)
        r = scc_analysis(g)
        assert len(r.components) == 1 and r.closed == [frozenset({0})]

    def test_transient_prefix(self):
        g = nx.DiGraph([(0, 1), (1, 2), (2, 1), (0, 3), (3, 3)])
        r = scc_analysis(g)
        assert sorted(map(sorted, r.closed)) == [[1, 2], [3]]
        assert r.transient == {0}

    def test_unexpanded_sinks_are_undetermined(self):
        g = nx.DiGraph([(0, 1), (0, 0)])
        r = scc_analysis(g, expanded={0})
        assert r.closed == [] and r.undetermined == [frozenset({1})]

    def test_depth_six_has_no_certified_closed_component(self, graphs):
        r = scc_analysis(graphs[6])
        assert r.closed == []
        assert len(r.undetermined) == 5

    def test_depth_eight_split(self, graphs):
        g = graphs[8]
        r = scc_analysis(g)
        assert len(r.closed) == 2
        reps = [class_rep_strings(g, c) for c in r.closed]
        assert ["12435", "124365", "1324", "13254"] in reps
        assert ["213546", "2135476", "21435", "214365"] in reps
        cg = g.class_digraph()
        for c in r.closed:
            assert aperiodicity_check(cg, c) == 1

    def test_expanded_classes_reach_closed_components(self, graphs):
        g = graphs[8]
        r = scc_analysis(g)
        closed = set().union(*r.closed)
        cg = g.class_digraph()
        expanded = {g.class_of_state[s] for s in range(g.n_states) if g.expanded(s)}
        for c in expanded:
            assert (nx.descendants(cg, c) | {c}) & closed


class TestAperiodicity:
    def test_self_loop(self):
        g = nx.DiGraph([(0, 0), (0, 1), (1, 0)])
        assert aperiodicity_check(g, {0, 1}) == 1

    def test_two_cycle(self):
        g = nx.DiGraph([(0, 1), (1, 0)])
        assert aperiodicity_check(g, {0, 1}) == 2

    def test_mixed_cycles(self):
        g = nx.DiGraph([(0, 1), (1, 2), (2, 0), (2, 3), (3, 0)])
        assert aperiodicity_check(g, {0, 1, 2, 3}) == 1
        h = nx.DiGraph([(0, 1), (1, 2), (2, 3), (3, 0), (1, 0)])
        assert aperiodicity_check(h, {0, 1, 2, 3}) == 2

    def test_not_strongly_connected(self):
        with pytest.raises(ValueError):
            aperiodicity_check(nx.DiGraph([(0, 1)]), {0, 1})


class TestMass:
    def test_total_probability(self, graphs):
        for d, g in graphs.items():
            m = estimate_component_mass(d, 2, g)
            assert sum(m.component_mass, Fraction(0)) + m.unresolved == 1

    def test_unresolved_non_increasing(self, graphs):
        values = [estimate_component_mass(d, 2, graphs[d]).unresolved for d in (6, 7, 8)]
        assert values == sorted(values, reverse=True)
        assert values == [1, Fraction(307, 429), Fraction(48, 715)]

    def test_golden_depth_eight(self, graphs):
        golden = json.loads((GOLDEN / "mass_k2_depth8.json").read_text())
        g = graphs[8]
        m = estimate_component_mass(8, 2, g)
        r = scc_analysis(g)
        got = [
            {
                "classes": class_rep_strings(g, c),
                "mass": str(mass),
                "reciprocal_sum": str(rs),
                "progenitors": sorted(map(str, ps)),
            }
            for c, mass, rs, ps in zip(r.closed, m.component_mass, m.reciprocal_sums, m.progenitors)
        ]
        assert got == golden["components"]
        assert str(m.unresolved) == golden["unresolved"]


class TestWellDefinedness:
    def test_trivial(self):
        assert well_definedness_check(2, 1) == []

    def test_holds_up_to_five(self):
        assert well_definedness_check(2, 5) == []

    def test_weakened_control_fails(self):
        assert len(well_definedness_check(2, 5, weakened=True)) >= 1

    def test_breaks_at_length_six(self):
        found = {(str(v.first), str(v.second), v.slot) for v in well_definedness_check(2, 6)}
        assert ("13245", "124356", "P1") in found

    def test_bounds(self):
        with pytest.raises(ValueError):
            well_definedness_check(2, 7)


class TestReplacement:
    def test_basic_properties(self):
        samples = replacement_time(2, 2, 300, stream(3, "tau"), max_steps=2000)
        assert all(s is None or s >= 1 for s in samples)
        ms = list(range(0, 101, 5))
        curve = survival_curve(samples, ms)
        values = [curve[m] for m in ms]
        assert values == sorted(values, reverse=True)
        assert any(v < 0.05 for v in values)

    def test_rejects_small_r(self):
        with pytest.raises(ValueError):
            replacement_time(1, 2, 1, stream(0))


class TestMoments:
    def test_length_one(self):
        for k in (1, 2, 3):
            assert config_moment(k, 1) == 1

    def test_length_three_by_hand(self):
        # products |psi_1| * |psi| for 231, 213, 312, 132, 123
        assert config_moment(2, 3) == Fraction(3 + 6 + 6 + 2 + 9, 5)

    def test_bound(self):
        with pytest.raises(ValueError):
            config_moment(2, 13)


class TestEstimates:
    def test_phi2_exact(self):
        for e in estimate_probability(builtin("phi2"), range(2, 11)):
            assert e.value == 1 - Fraction(1, catalan(e.n))

    def test_phi1_and_max(self):
        for name in ("phi1", "has-max"):
            for e in estimate_probability(builtin(name), range(1, 9)):
                assert e.value == 1

    def test_exact_matches_direct_filter(self):
        f = parse("E x. E y. (x <P y & x <V y & A z. (z = x | z = y | z <V x))")
        from permlogic.fo import evaluate

        for e in estimate_probability(f, range(1, 7)):
            hits = sum(evaluate(f, p) for p in enumerate_avoiders(e.n))
            assert e.value == Fraction(hits, catalan(e.n))

    def test_mc_is_reproducible_and_job_independent(self):
        f = builtin("phi2")
        a = estimate_probability(f, [8], "mc", 3000, seed=4)
        b = estimate_probability(f, [8], "mc", 3000, seed=4, jobs=2)
        assert a == b
        exact = 1 - 1 / catalan(8)
        assert a[0].low <= exact <= a[0].high

    def test_errors(self):
        with pytest.raises(ValueError):
            estimate_probability(builtin("phi2"), [13])
        with pytest.raises(ValueError):
            estimate_probability(builtin("phi2"), [5], "mc", 10)
        with pytest.raises(ValueError):
            estimate_probability(builtin("phi2"), [5], "bogus")

    def test_wilson(self):
        lo, hi = wilson_interval(50, 100)
        assert lo < 0.5 < hi
        assert wilson_interval(100, 100)[1] == 1.0
        assert wilson_interval(0, 100)[0] == 0.0


def test_class_frequencies_sum_to_one():
    for k in (1, 2):
        for n in range(1, 7):
            assert sum(class_frequencies(k, n).values()) == 1
