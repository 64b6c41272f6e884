"""
Unit tests for graph core.
Tests VertexSet, Graph, modules, quotients, cographs and cliques.
"""

from fractions import Fraction

import pytest

from core.errors import CapabilityError, ContractViolation, DomainError
from core.graph import Graph, VertexSet, canonical_sets, components, iter_bits, neighborhood
from core.modules import (
    ModulePartition,
    anticomponents,
    clique_number,
    complement,
    is_cograph,
    is_module,
    max_clique,
    maximal_modules,
    quotient,
)
from tests.graphs import complete_bipartite, cycle_graph, path_graph, star

# =============================================================================
# VertexSet Tests
# =============================================================================


class TestVertexSet:
    """Tests for VertexSet."""

    def test_set_algebra(self):
        """Test union, intersection and difference."""
        a = VertexSet.of(5, [0, 1, 2])
        b = VertexSet.of(5, [2, 3])

        assert (a | b).to_list() == [0, 1, 2, 3]
        assert (a & b).to_list() == [2]
        assert (a - b).to_list() == [0, 1]
        assert len(a) == 3
        assert 2 in a and 4 not in a

    def test_width_mismatch(self):
        """Test that sets of different widths cannot be combined."""
        with pytest.raises(ContractViolation, match="width mismatch"):
            VertexSet.of(4, [0]) | VertexSet.of(5, [0])

    def test_vertex_out_of_range(self):
        """Test construction rejects vertices beyond the width."""
        with pytest.raises(ContractViolation):
            VertexSet.of(3, [3])

    def test_canonical_order(self):
        """Test canonical sets are lexicographic on sorted vertex lists."""
        sets = [VertexSet.of(4, [1, 2]), VertexSet.of(4, [0, 3]), VertexSet.of(4, [0])]
        ordered = canonical_sets(sets + sets)

        assert [s.to_list() for s in ordered] == [[0], [0, 3], [1, 2]]

    def test_iter_bits_increasing(self):
        """Test bit iteration order."""
        assert list(iter_bits(0b101001)) == [0, 3, 5]


# =============================================================================
# Graph Tests
# =============================================================================


class TestGraph:
    """Tests for Graph construction and accessors."""

    def test_from_edges(self):
        """Test edges, degrees and default weights."""
        g = path_graph(4)

        assert g.num_edges == 3
        assert g.edges() == [(0, 1), (1, 2), (2, 3)]
        assert g.degree(1) == 2
        assert g.weights == (Fraction(1),) * 4

    def test_self_loop_rejected(self):
        """Test self-loops raise DomainError."""
        with pytest.raises(DomainError, match="self-loop"):
            Graph.from_edges(3, [(1, 1)])

    def test_edge_out_of_range(self):
        """Test edges outside the vertex range."""
        with pytest.raises(DomainError):
            Graph.from_edges(3, [(0, 3)])

    def test_nonpositive_weight(self):
        """Test weights must be positive."""
        with pytest.raises(DomainError, match="positive"):
            path_graph(2).with_weights([1, 0])

    def test_too_many_vertices(self):
        """Test the vertex cap."""
        with pytest.raises(CapabilityError):
            Graph.empty(513)

    def test_rational_weights(self):
        """Test weights are exact rationals."""
        g = path_graph(3).with_weights(["1/3", "1/3", "1/3"])

        assert g.weight_of(g.vertices) == 1

    def test_neighborhood(self):
        """Test open and closed neighborhoods."""
        g = path_graph(5)
        s = g.vset([2])

        assert neighborhood(g, s).to_list() == [1, 3]
        assert neighborhood(g, s, closed=True).to_list() == [1, 2, 3]

    def test_components_ordered_by_minimum(self):
        """Test component order."""
        g = Graph.from_edges(6, [(4, 5), (0, 3), (1, 2)])
        comps = components(g, g.vertices)

        assert [c.to_list() for c in comps] == [[0, 3], [1, 2], [4, 5]]

    def test_induced_subgraph(self):
        """Test relabelled induced subgraphs keep weights."""
        g = cycle_graph(5).with_weights([1, 2, 3, 4, 5])
        h, old = g.induced_subgraph(g.vset([1, 2, 4]))

        assert old == [1, 2, 4]
        assert h.edges() == [(0, 1)]
        assert h.weights == (2, 3, 5)

    def test_add_edges_is_immutable(self):
        """Test edge addition returns a new graph."""
        g = path_graph(3)
        h = g.add_edges([(0, 2)])

        assert not g.has_edge(0, 2)
        assert h.has_edge(0, 2)


# =============================================================================
# Module Tests
# =============================================================================


class TestModules:
    """Tests for modules and quotients."""

    def test_twins_form_module(self):
        """Test false twins are a module."""
        g = complete_bipartite(2, 3)

        assert is_module(g, g.vset([0, 1]))
        assert not is_module(g, g.vset([0, 2]))

    def test_empty_module_rejected(self):
        """Test the empty set is not accepted."""
        g = path_graph(3)
        with pytest.raises(DomainError):
            is_module(g, VertexSet.empty(3))

    def test_maximal_modules_disconnected(self):
        """Test disconnected graphs split into components."""
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        parts = maximal_modules(g)

        assert [b.to_list() for b in parts] == [[0, 1], [2, 3]]

    def test_maximal_modules_co_disconnected(self):
        """Test complete bipartite graphs split into their sides."""
        parts = maximal_modules(complete_bipartite(2, 2))

        assert [b.to_list() for b in parts] == [[0, 1], [2, 3]]

    def test_maximal_modules_prime(self):
        """Test P4 with a false twin of 1: the twin pair is one block."""
        g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 2)])
        parts = maximal_modules(g)

        assert [b.to_list() for b in parts] == [[0], [1, 4], [2], [3]]
        assert quotient(g, parts).edges() == [(0, 1), (1, 2), (2, 3)]

    def test_quotient_weights(self):
        """Test quotient vertices carry block weights."""
        g = complete_bipartite(2, 3).with_weights([1, 2, 3, 4, 5])
        parts = maximal_modules(g)
        q = quotient(g, parts)

        assert q.n == 2
        assert q.has_edge(0, 1)
        assert q.weights == (3, 12)

    def test_partition_must_cover(self):
        """Test partitions that miss vertices are rejected."""
        with pytest.raises(ContractViolation, match="cover"):
            ModulePartition((VertexSet.of(3, [0]), VertexSet.of(3, [1])))


# =============================================================================
# Cograph and Clique Tests
# =============================================================================


class TestCographsAndCliques:
    """Tests for cograph recognition and clique number."""

    def test_p4_is_not_cograph(self):
        """Test P4 is the forbidden graph."""
        g = path_graph(4)

        assert not is_cograph(g, g.vertices)
        assert is_cograph(g, g.vset([0, 1, 2]))

    def test_complete_bipartite_is_cograph(self, k33):
        """Test joins of independent sets are cographs."""
        assert is_cograph(k33, k33.vertices)

    def test_anticomponents(self, k33):
        """Test anticomponents of K3,3 are its sides."""
        parts = anticomponents(k33, k33.vertices)

        assert [p.to_list() for p in parts] == [[0, 1, 2], [3, 4, 5]]

    def test_complement_involution(self, c6):
        """Test complementing twice restores the graph."""
        assert complement(complement(c6)) == c6

    def test_clique_number(self, k4, c6):
        """Test clique numbers of small graphs."""
        assert clique_number(k4) == 4
        assert clique_number(c6) == 2
        assert clique_number(star(4)) == 2
        assert clique_number(Graph.empty(3)) == 1
        assert clique_number(Graph.empty(0)) == 0

    def test_max_clique_witness(self):
        """Test the returned set is a clique of maximum size."""
        g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
        clique = max_clique(g, g.vertices)

        assert clique.to_list() == [0, 1, 2]
