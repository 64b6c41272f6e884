"""
Unit tests for bipartite completion and the bad-C6 machinery.
"""

import pytest

from core.config import Settings
from core.errors import ContractViolation, DomainError, InducedPathFound, InvariantViolation
from core.graph import Graph, VertexSet
from eval.certify import completion_report, structure_sweep
from eval.fixtures import FixtureKind, gen_fixture
from eval.oracles import oracle_mwis
from solvers.block_dp import Problem, check_witness
from structure.bipartite import (
    BipartiteGraph,
    better_c6_violations,
    bad_c6_class,
    c6_context,
    class_name,
    cleaning_apply_violations,
    comp_nei_violations,
    complete_separator,
    complete_to_chordal_bipartite,
    completed_bag_family,
    depth_key,
    double_c6_violations,
    find_bad_c6,
    is_clean,
    is_t_rich,
    is_vv_free,
    missing_biclique_edges,
    mr_comparable_violations,
    mr_next_c6_violations,
    neighborhood_partition,
    prec_maximal,
    seagull_witness,
    separator_biclique_criterion,
    similar_bad_c6,
    solve_on_completed,
)
from structure.recognition import enumerate_induced_c6, is_chordal_bipartite, is_pt_free
from structure.treedepth import TreedepthStructure, enumerate_treedepth_structures
from tests.graphs import c6_extensions, c6_sides, cycle_graph, domino, path_graph


@pytest.fixture
def bc6(c6):
    return BipartiteGraph(c6, c6_sides())


def _opposite_roots():
    return TreedepthStructure.from_parent_map(6, 2, {0: None, 3: None})


# =============================================================================
# Biclique Completion Tests
# =============================================================================


class TestBipartiteGraph:
    """Tests for BipartiteGraph."""

    def test_inferred_sides(self, c6):
        """Test side 1 is inferred from the two-coloring."""
        bg = BipartiteGraph.from_graph(c6)

        assert bg.side1.to_list() == [0, 2, 4]
        assert bg.side2.to_list() == [1, 3, 5]
        assert bg.side_of(3) == 2

    def test_rejects_odd_cycle(self):
        """Test a triangle has no bipartition."""
        with pytest.raises(DomainError, match="not bipartite"):
            BipartiteGraph.from_graph(Graph.complete(3))

    def test_rejects_wrong_sides(self, c6):
        """Test a declared side with an inner edge."""
        with pytest.raises(DomainError):
            BipartiteGraph(c6, VertexSet.of(6, [0, 1]))


class TestBicliqueCompletion:
    """Tests for separator completion and the chordal bipartite loop."""

    def test_missing_edges(self, bc6):
        """Test the one missing pair of an opposite separator."""
        assert missing_biclique_edges(bc6, bc6.g.vset([0, 3]).bits) == [(0, 3)]
        assert missing_biclique_edges(bc6, bc6.g.vset([0, 2]).bits) == []

    def test_criterion_finds_first_mixed_separator(self, bc6):
        """Test the first separator with both sides present."""
        s = separator_biclique_criterion(bc6)

        assert s.vertices.to_list() == [0, 3]
        assert complete_separator(bc6, s).g.has_edge(0, 3)

    def test_criterion_holds_for_k33(self, k33):
        """Test separators inside one side need nothing."""
        assert separator_biclique_criterion(BipartiteGraph.from_graph(k33)) is None

    def test_complete_c6(self, bc6):
        """Test C6 is completed by one chord between opposite vertices."""
        completed, trace = complete_to_chordal_bipartite(bc6)

        assert len(trace) == 1
        assert trace[0].added_edges == ((0, 3),)
        assert trace[0].to_dict()["pair"] == [0, 3]
        assert trace[0].separator.to_list() == [0, 3]
        assert is_chordal_bipartite(completed.g, completed.side1)
        assert separator_biclique_criterion(completed) is None

    def test_already_chordal_bipartite(self):
        """Test no steps on a chordal bipartite input."""
        bg = BipartiteGraph.from_graph(domino())
        completed, trace = complete_to_chordal_bipartite(bg)

        assert trace == []
        assert completed.g == bg.g

    def test_p7_rejected(self, p7):
        """Test inputs with an induced P7."""
        with pytest.raises(InducedPathFound):
            complete_to_chordal_bipartite(BipartiteGraph.from_graph(p7))

    def test_completed_family_hosts_chord(self, bc6):
        """Test the bag family lives on the completed graph."""
        family, trace = completed_bag_family(bc6)

        assert family.exact
        assert family.host.has_edge(0, 3)
        assert len(trace) == 1


# =============================================================================
# Bad C6 Tests
# =============================================================================


class TestBadC6:
    """Tests for bad C6 detection and classification."""

    def test_incomparable_opposite_pair(self, bc6):
        """Test two roots on opposite vertices make the cycle bad."""
        bads = find_bad_c6(bc6, _opposite_roots())

        assert len(bads) == 1
        assert bads[0].x == 0 and bads[0].y == 3
        assert bads[0].to_dict() == {"cycle": [0, 1, 2, 3, 4, 5], "x": 0, "y": 3, "depth": [1, 1]}

    def test_comparable_pair_is_fine(self, bc6):
        """Test an ancestor pair is not bad."""
        t = TreedepthStructure.from_parent_map(6, 2, {0: None, 3: 0})

        assert find_bad_c6(bc6, t) == []

    def test_depth_order(self):
        """Test the diagonal order on depth pairs."""
        pairs = [(2, 2), (1, 3), (2, 1), (1, 2), (1, 1)]

        assert sorted(pairs, key=depth_key) == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2)]

    def test_prec_maximal(self, bc6):
        """Test the maximal elements of a single bad C6."""
        bads = find_bad_c6(bc6, _opposite_roots())

        assert prec_maximal(bads) == bads
        assert prec_maximal([]) == []

    def test_class_of_lonely_cycle(self, bc6):
        """Test a bare C6 has empty, poor S-sets."""
        t = _opposite_roots()
        bad = find_bad_c6(bc6, t)[0]
        cls = bad_c6_class(bc6, bad, t)

        assert cls == (True, True)
        assert class_name(cls) == "poor/poor"

    def test_richness(self, c6):
        """Test two vertices on one level make a set rich."""
        t = _opposite_roots()

        assert is_t_rich(c6.vset([0, 3]), t)
        assert not is_t_rich(c6.vset([0, 1]), t)

    def test_checks_pass_on_c6(self, bc6):
        """Test the remainder checks on a bare C6."""
        t = _opposite_roots()

        assert better_c6_violations(bc6, t) == []
        assert mr_next_c6_violations(bc6, t) == []
        assert double_c6_violations(bc6, t) == []

    def test_similarity_needs_a_second_cycle(self, bc6):
        """Test a bad C6 is not similar to itself."""
        t = _opposite_roots()
        bad = find_bad_c6(bc6, t)[0]

        assert not similar_bad_c6(bc6, t, bad, bad, 1)
        with pytest.raises(ContractViolation):
            similar_bad_c6(bc6, t, bad, bad, 3)


class TestC6Context:
    """Tests for c6_context."""

    def test_s_sets_and_remainder(self):
        """Test a vertex per triple and a pendant edge behind S1."""
        edges = [(i, (i + 1) % 6) for i in range(6)]
        edges += [(6, 0), (6, 2), (6, 4), (7, 1), (7, 3), (7, 5), (8, 6), (8, 9)]
        g = Graph.from_edges(10, edges)
        bg = BipartiteGraph(g, g.vset([0, 2, 4, 7, 8]))
        cycle = (0, 1, 2, 3, 4, 5)
        ctx = c6_context(bg, cycle)

        assert ctx.s1.to_list() == [6]
        assert ctx.s2.to_list() == [7]
        assert ctx.main_remainder.to_list() == [8, 9]
        assert ctx.seeing(cycle, 2) == ctx.s1
        assert ctx.seeing(cycle, 3) == ctx.s2

    def test_stray_neighbor(self):
        """Test a remainder neighbor seeing one cycle vertex."""
        edges = [(i, (i + 1) % 6) for i in range(6)] + [(6, 0), (6, 7), (7, 8)]
        g = Graph.from_edges(9, edges)
        bg = BipartiteGraph(g, g.vset([0, 2, 4, 7]))

        with pytest.raises(InvariantViolation):
            c6_context(bg, (0, 1, 2, 3, 4, 5))

    def test_not_a_cycle(self, bc6):
        """Test non-cycles are rejected."""
        with pytest.raises(DomainError, match="not an induced C6"):
            c6_context(bc6, (0, 2, 1, 3, 4, 5))


# =============================================================================
# Seagull and Remainder Tests
# =============================================================================


class TestSeagulls:
    """Tests for the two-P3 pattern and neighborhood classes."""

    def _two_paths(self, extra=()):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), *extra])
        return BipartiteGraph(g, g.vset([0, 2, 3, 5]))

    def test_witness(self):
        """Test two far apart paths form a witness."""
        bg = self._two_paths()
        a, b, c = bg.g.vset([0, 3]), bg.g.vset([1, 4]), bg.g.vset([2, 5])

        assert seagull_witness(bg, a, b, c) == ((0, 1, 2), (3, 4, 5))
        assert not is_vv_free(bg, a, b, c)

    def test_linked_paths(self):
        """Test an edge between the paths removes the witness."""
        bg = self._two_paths(extra=[(0, 4)])
        a, b, c = bg.g.vset([0, 3]), bg.g.vset([1, 4]), bg.g.vset([2, 5])

        assert is_vv_free(bg, a, b, c)

    def test_neighborhood_partition(self, bc6):
        """Test classes by side and trace on Z."""
        classes = neighborhood_partition(bc6, bc6.g.vset([0]))

        assert [(i, y.to_list(), a.to_list()) for i, y, a in classes] == [
            (1, [], [2, 4]),
            (2, [], [3]),
            (2, [0], [1, 5]),
        ]
        assert cleaning_apply_violations(bc6, bc6.g.vset([0])) == []

    def test_is_clean(self, bc6):
        """Test removing the middle vertex cleans a path."""
        g = bc6.g
        a, b, c = g.vset([0]), g.vset([1]), g.vset([2])

        assert not is_clean(bc6, a, b, c, g.vset([]))
        assert is_clean(bc6, a, b, c, g.vset([1]))


class TestRemainderChecks:
    """Tests for the component neighborhood checks."""

    def test_comp_nei(self, bc6):
        """Test the far component of C6 is placed."""
        assert comp_nei_violations(bc6, [bc6.g.vset([0, 1])]) == []

    def test_comp_nei_block_shape(self, bc6):
        """Test blocks must be connected pairs or larger."""
        with pytest.raises(DomainError):
            comp_nei_violations(bc6, [bc6.g.vset([0])])

    def test_mr_comparable(self, bc6):
        """Test a single remainder component."""
        assert mr_comparable_violations(bc6, bc6.g.vset([0])) == []
        with pytest.raises(DomainError, match="connected"):
            mr_comparable_violations(bc6, bc6.g.vset([0, 3]))


# =============================================================================
# Solving on the Completion
# =============================================================================


class TestSolveOnCompleted:
    """Tests for solve_on_completed."""

    def test_mwis_exact(self, bc6):
        """Test MWIS over the completion matches the oracle."""
        result = solve_on_completed(bc6, Problem.MWIS, d=2)

        assert result.weight == oracle_mwis(bc6.g).weight == 3
        assert not result.conditional
        assert check_witness(bc6.g, Problem.MWIS, result.witness)

    def test_forest_feasible(self, bc6):
        """Test the forest witness is an induced forest of the input graph."""
        result = solve_on_completed(bc6, Problem.FOREST, d=2, state_cap=6)

        assert result.weight == 5
        assert check_witness(bc6.g, Problem.FOREST, result.witness)

    def test_weighted_path(self):
        """Test a tree needs no completion."""
        g = path_graph(4).with_weights([3, 1, 1, 3])
        result = solve_on_completed(BipartiteGraph.from_graph(g), Problem.MWIS, d=2)

        assert result.weight == 6
        assert result.witness.to_list() == [0, 3]


@pytest.mark.slow
class TestCompletionSweep:
    """Completion over generated bipartite P7-free fixtures."""

    def test_fixtures(self):
        """Test checked completions of 200 fixtures up to 40 vertices."""
        steps = []
        for seed in range(200):
            fixture = gen_fixture(FixtureKind.P7FREE_BIPARTITE, 6 + seed % 35, seed)
            bg = BipartiteGraph.from_graph(fixture.graph, fixture.side1)
            completed, trace, report = completion_report(bg)

            assert report["chordal_bipartite"] == "pass"
            assert report["no_new_c6"] == "pass"
            assert is_chordal_bipartite(completed.g, completed.side1)
            for step in trace:
                for u, v in step.added_edges:
                    assert bg.side_of(u) != bg.side_of(v)
                    assert not bg.g.has_edge(u, v)
            steps.append(len(trace))

        assert min(steps) >= 1
        assert max(steps) >= 2

    def test_mwis_matches_oracle(self):
        """Test MWIS on completed bags against brute force on 200 fixtures up to 18 vertices."""
        for seed in range(200):
            fixture = gen_fixture(FixtureKind.P7FREE_BIPARTITE, 6 + seed % 13, seed)
            g = fixture.graph.with_weights([1 + (v * 7 + seed) % 5 for v in range(fixture.graph.n)])
            bg = BipartiteGraph.from_graph(g, fixture.side1)
            mwis = solve_on_completed(bg, Problem.MWIS, d=2)

            assert mwis.weight == oracle_mwis(g).weight
            assert check_witness(g, Problem.MWIS, mwis.witness)


@pytest.mark.slow
class TestStructureSweep:
    """Exhaustive structure checks on small bipartite graphs with an induced C6."""

    def test_structures_survive_completion(self):
        """Test every connected P7-free bipartite graph on 6 to 8 vertices with d <= 3."""
        graphs = [cycle_graph(6)] + c6_extensions(1) + c6_extensions(2)
        checked = 0
        for g in graphs:
            if not is_pt_free(g, 7):
                continue
            bg = BipartiteGraph.from_graph(g)
            for d in (1, 2, 3):
                report = structure_sweep(bg, d, Settings())

                assert report["structures"] > 0
                assert report["structure_stays"] == "pass"
                assert report["better_c6"] == "pass"
                assert report["mr_comparable"] == "pass"
            checked += 1

        assert checked > 10

    def test_c6_lemmas_on_fixtures(self):
        """Test C6 contexts, remainder nesting and maximal bad C6s on fixtures with n <= 10."""
        for seed in range(40):
            fixture = gen_fixture(FixtureKind.P7FREE_BIPARTITE, 6 + seed % 5, seed)
            bg = BipartiteGraph.from_graph(fixture.graph, fixture.side1)
            for cycle in enumerate_induced_c6(bg.g):
                ctx = c6_context(bg, cycle.vertices)
                remainder_nbrs = bg.g.nbhd_mask(ctx.main_remainder.bits)
                assert remainder_nbrs & ~(ctx.s1.bits | ctx.s2.bits) == 0
                assert mr_comparable_violations(bg, VertexSet(cycle.mask, bg.g.n)) == []
            for record in enumerate_treedepth_structures(bg.g, 2):
                assert better_c6_violations(bg, record.structure) == []
