"""
Unit tests for recognition.
Tests induced paths and cycles, chordality and the bipartite classes.
"""

import networkx as nx
import numpy as np
import pytest

from core.errors import CapabilityError, DomainError
from core.graph import Graph, VertexSet
from eval.fixtures import random_bipartite, random_graph
from eval.oracles import oracle_chordal_bipartite, oracle_induced_path, to_networkx
from structure.recognition import (
    InducedCycle,
    check_bipartition,
    chordal_maximal_cliques,
    enumerate_induced_c6,
    find_induced_path,
    find_long_induced_cycle,
    has_induced_c6,
    is_bipartite,
    is_chordal,
    is_chordal_bipartite,
    is_pt_free,
    perfect_elimination_order,
    two_coloring,
)
from tests.graphs import complete_bipartite, cycle_graph, domino, path_graph

# =============================================================================
# Induced Path Tests
# =============================================================================


class TestInducedPaths:
    """Tests for find_induced_path and is_pt_free."""

    def test_path_finds_itself(self, p7):
        """Test P7 contains an induced P7."""
        path = find_induced_path(p7, 7)

        assert path is not None
        assert path.vertices == (0, 1, 2, 3, 4, 5, 6)
        assert path.is_valid(p7)

    def test_cycle_longest_induced_path(self, c6):
        """Test C6 has induced P5 but no induced P6."""
        assert find_induced_path(c6, 5).vertices == (0, 1, 2, 3, 4)
        assert find_induced_path(c6, 6) is None

    def test_small_graph(self):
        """Test graphs with fewer than t vertices are P_t-free."""
        assert is_pt_free(path_graph(3), 7)

    def test_complete_bipartite_p4_free(self, k33):
        """Test K3,3 is a cograph and so P4-free."""
        assert is_pt_free(k33, 4)
        assert not is_pt_free(k33, 3)

    def test_length_out_of_range(self, c6):
        """Test the supported path lengths."""
        with pytest.raises(DomainError):
            find_induced_path(c6, 11)
        with pytest.raises(DomainError):
            find_induced_path(c6, 1)


# =============================================================================
# Induced Cycle Tests
# =============================================================================


class TestInducedCycles:
    """Tests for induced cycle search."""

    def test_c6_found_once(self, c6):
        """Test the 6-cycle is reported once in canonical form."""
        cycles = enumerate_induced_c6(c6)

        assert [c.vertices for c in cycles] == [(0, 1, 2, 3, 4, 5)]
        assert cycles[0].is_valid(c6)

    def test_k33_has_no_induced_c6(self, k33):
        """Test every 6-cycle of K3,3 has chords."""
        assert enumerate_induced_c6(k33) == []

    def test_domino_has_no_induced_c6(self):
        """Test the chord kills the outer 6-cycle."""
        assert enumerate_induced_c6(domino()) == []

    def test_has_induced_c6(self, c6, k33):
        """Test the early-exit search agrees with enumeration."""
        assert has_induced_c6(c6)
        assert not has_induced_c6(k33)
        assert not has_induced_c6(domino())
        assert not has_induced_c6(cycle_graph(8))

    def test_canonical_orientation(self):
        """Test rotation and orientation of the canonical form."""
        cycle = InducedCycle.canonical((3, 2, 1, 0, 5, 4))

        assert cycle.vertices == (0, 1, 2, 3, 4, 5)
        assert cycle.opposite(0) == 3
        assert cycle.rotated_to(4) == (4, 5, 0, 1, 2, 3)

    def test_long_cycle(self):
        """Test long cycle search in C8 and a chordal graph."""
        assert len(find_long_induced_cycle(cycle_graph(8), 6)) == 8
        assert find_long_induced_cycle(Graph.complete(5), 4) is None

    def test_long_cycle_cap(self):
        """Test the cycle search vertex cap."""
        with pytest.raises(CapabilityError):
            find_long_induced_cycle(path_graph(21), 6)


# =============================================================================
# Chordality Tests
# =============================================================================


class TestChordality:
    """Tests for chordal recognition."""

    def test_chordal_examples(self, k4, c6):
        """Test standard examples."""
        assert is_chordal(k4)
        assert is_chordal(path_graph(5))
        assert not is_chordal(cycle_graph(4))
        assert not is_chordal(c6)

    def test_peo_of_chordal_graph(self, k4):
        """Test the elimination order covers every vertex."""
        peo = perfect_elimination_order(k4)

        assert sorted(peo) == [0, 1, 2, 3]

    def test_maximal_cliques_of_path(self):
        """Test maximal cliques of a tree are its edges."""
        cliques = chordal_maximal_cliques(path_graph(4))

        assert [c.to_list() for c in cliques] == [[0, 1], [1, 2], [2, 3]]

    def test_maximal_cliques_need_chordal(self, c6):
        """Test non-chordal graphs are rejected."""
        with pytest.raises(DomainError, match="not chordal"):
            chordal_maximal_cliques(c6)

    def test_matches_networkx(self):
        """Test agreement with networkx on random graphs."""
        rng = np.random.default_rng(7)
        for _ in range(60):
            g = random_graph(9, 0.4, rng)
            assert is_chordal(g) == nx.is_chordal(to_networkx(g))


# =============================================================================
# Bipartite Class Tests
# =============================================================================


class TestBipartite:
    """Tests for bipartiteness and chordal bipartiteness."""

    def test_two_coloring(self, c6):
        """Test side 1 holds the minimum vertex of each component."""
        assert two_coloring(c6).to_list() == [0, 2, 4]
        assert two_coloring(cycle_graph(5)) is None
        assert not is_bipartite(Graph.complete(3))

    def test_declared_side_checked(self, c6):
        """Test a wrong declared bipartition."""
        with pytest.raises(DomainError, match="edge inside side 1"):
            check_bipartition(c6, VertexSet.of(6, [0, 1]))

    def test_non_bipartite_rejected(self, k4):
        """Test chordal-bipartite recognition needs a bipartite graph."""
        with pytest.raises(DomainError, match="not bipartite"):
            is_chordal_bipartite(k4)

    def test_chordal_bipartite_examples(self, c6, k33, p7):
        """Test C6 fails, K3,3, the domino and trees pass."""
        assert not is_chordal_bipartite(c6)
        assert is_chordal_bipartite(k33)
        assert is_chordal_bipartite(domino())
        assert is_chordal_bipartite(p7)
        assert not is_chordal_bipartite(cycle_graph(8))

    def test_methods_agree_with_oracle(self):
        """Test both methods against the exhaustive oracle."""
        rng = np.random.default_rng(11)
        for _ in range(40):
            g = random_bipartite(4, 5, 0.45, rng)
            expected = oracle_chordal_bipartite(g)
            assert is_chordal_bipartite(g) == expected
            assert is_chordal_bipartite(g, method="cycles") == expected

    def test_unknown_method(self, k33):
        """Test unknown recognition methods."""
        with pytest.raises(DomainError, match="unknown"):
            is_chordal_bipartite(k33, method="magic")


@pytest.mark.slow
class TestRecognitionSweep:
    """Randomized comparison of path detection with the subset oracle."""

    def test_induced_paths_match_oracle(self):
        """Test P_t detection for t = 4..7 on random graphs."""
        rng = np.random.default_rng(2024)
        for _ in range(150):
            g = random_graph(10, 0.3, rng)
            for t in range(4, 8):
                found = find_induced_path(g, t)
                assert (found is None) == (oracle_induced_path(g, t) is None)
                if found is not None:
                    assert found.is_valid(g)
