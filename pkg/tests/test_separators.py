"""
Unit tests for minimal separators, potential maximal cliques and PMC covers.
"""

import numpy as np
import pytest

from core.errors import DomainError
from core.graph import Graph, VertexSet
from eval.fixtures import random_graph
from eval.oracles import oracle_minseps, oracle_pmcs, oracle_pmcs_by_triangulation
from structure.separators import (
    CoverKind,
    MinimalSeparator,
    Pmc,
    cover_report,
    dsw_ceiling,
    dual_vc_dimension,
    enumerate_minimal_separators,
    enumerate_pmcs,
    full_components,
    is_minimal_separator,
    is_pmc,
    pmc_cover,
)
from tests.graphs import path_graph

# =============================================================================
# Minimal Separator Tests
# =============================================================================


class TestMinimalSeparators:
    """Tests for minimal separators and full components."""

    def test_full_components(self, c6):
        """Test an opposite pair of C6 has two full components."""
        comps = full_components(c6, c6.vset([0, 3]))

        assert [c.to_list() for c in comps] == [[1, 2], [4, 5]]
        assert is_minimal_separator(c6, c6.vset([0, 3]))

    def test_not_minimal(self, c6):
        """Test a separator with one full component."""
        assert not is_minimal_separator(c6, c6.vset([0, 2, 3]))
        assert not is_minimal_separator(c6, VertexSet.empty(6))

    def test_c6_count(self, c6):
        """Test C6 has nine minimal separators, its non-adjacent pairs."""
        seps = enumerate_minimal_separators(c6)

        assert len(seps) == 9
        assert all(len(s.vertices) == 2 for s in seps)
        assert seps[0].vertices.to_list() == [0, 2]

    def test_complete_graph_has_none(self, k4):
        """Test cliques have no minimal separators."""
        assert enumerate_minimal_separators(k4) == []

    def test_k33_sides(self, k33):
        """Test the only minimal separators of K3,3 are its sides."""
        seps = enumerate_minimal_separators(k33)

        assert [s.vertices.to_list() for s in seps] == [[0, 1, 2], [3, 4, 5]]

    def test_from_mask_rejects_non_separator(self, c6):
        """Test from_mask validates."""
        with pytest.raises(DomainError, match="not a minimal separator"):
            MinimalSeparator.from_mask(c6, 0b000011)

    def test_matches_oracle(self, c6, k33):
        """Test closure enumeration against the subset oracle."""
        for g in (c6, k33, path_graph(5), Graph.from_edges(5, [(0, 1), (2, 3)])):
            got = [s.vertices for s in enumerate_minimal_separators(g)]
            assert got == oracle_minseps(g)


# =============================================================================
# PMC Tests
# =============================================================================


class TestPmcs:
    """Tests for the PMC predicate and enumeration."""

    def test_triples_of_c6(self, c6):
        """Test every vertex triple of C6 is a PMC."""
        pmcs = enumerate_pmcs(c6)

        assert len(pmcs) == 20
        assert is_pmc(c6, c6.vset([0, 2, 4]))
        assert not is_pmc(c6, c6.vset([0, 3]))

    def test_complete_graph(self, k4):
        """Test a clique is its own only PMC."""
        assert [p.vertices.to_list() for p in enumerate_pmcs(k4)] == [[0, 1, 2, 3]]

    def test_path(self):
        """Test the PMCs of a path are its edges."""
        pmcs = enumerate_pmcs(path_graph(4))

        assert [p.vertices.to_list() for p in pmcs] == [[0, 1], [1, 2], [2, 3]]

    def test_single_vertex(self):
        """Test K1."""
        assert [p.vertices.to_list() for p in enumerate_pmcs(Graph.empty(1))] == [[0]]

    def test_null_graph(self):
        """Test the null graph has no PMCs."""
        assert enumerate_pmcs(Graph.empty(0)) == []

    def test_disconnected(self):
        """Test PMCs of a disconnected graph come from each component."""
        g = Graph.from_edges(4, [(0, 1), (2, 3)])

        assert [p.vertices.to_list() for p in enumerate_pmcs(g)] == [[0, 1], [2, 3]]

    def test_empty_set_is_not_pmc(self, c6):
        """Test the empty set."""
        assert not is_pmc(c6, VertexSet.empty(6))

    def test_matches_oracles(self, c6, k33):
        """Test the definitional and triangulation oracles agree with enumeration."""
        for g in (c6, k33, path_graph(5)):
            got = [p.vertices for p in enumerate_pmcs(g)]
            assert got == oracle_pmcs(g)
            assert got == oracle_pmcs_by_triangulation(g)


# =============================================================================
# Cover Tests
# =============================================================================


class TestPmcCovers:
    """Tests for PMC covers and the dual VC-dimension."""

    def test_closed_neighborhood_cover(self):
        """Test an edge of a path is N[endpoint]."""
        g = path_graph(4)
        cover = pmc_cover(g, Pmc(g.vset([0, 1])), cap=4)

        assert cover.kind == CoverKind.CLOSED_NEIGHBORHOOD
        assert cover.vertex == 0
        assert cover.covered_set(g) == g.vset([0, 1])

    def test_component_family_cover(self, c6):
        """Test the even triple of C6 needs two components."""
        cover = pmc_cover(c6, Pmc(c6.vset([0, 2, 4])), cap=4)

        assert cover.kind == CoverKind.COMPONENT_FAMILY
        assert cover.size == 2
        assert cover.covered_set(c6) == c6.vset([0, 2, 4])
        assert cover.to_dict()["components"] == [[1], [3]]

    def test_cap_too_small(self, c6):
        """Test no cover within a cap of one."""
        assert pmc_cover(c6, Pmc(c6.vset([0, 2, 4])), cap=1) is None

    def test_cover_report(self, c6):
        """Test the report over all PMCs of C6."""
        report = cover_report(c6, cap=8)

        assert report["pmc_count"] == 20
        assert report["failures"] == []
        assert report["max_cover_size"] == 2
        assert report["max_dual_vc_dimension"] == 2
        assert report["ceiling_breaches"] == []

    def test_dual_vc_dimension(self):
        """Test small set systems."""
        assert dual_vc_dimension([]) == 0
        assert dual_vc_dimension([0b01, 0b10]) == 1
        assert dual_vc_dimension([0b011, 0b101]) == 2

    def test_dsw_ceiling(self):
        """Test the transversal ceiling formula."""
        assert dsw_ceiling(1, 1) == 220


@pytest.mark.slow
class TestEnumerationSweep:
    """Randomized comparison with the definitional oracles and count bounds."""

    def test_random_graphs(self):
        """Test separators and PMCs on 500 random graphs with n <= 12."""
        rng = np.random.default_rng(5)
        for i in range(500):
            n = 4 + i % 9
            g = random_graph(n, 0.35, rng)
            seps = [s.vertices for s in enumerate_minimal_separators(g)]
            pmcs = [p.vertices for p in enumerate_pmcs(g)]
            assert seps == oracle_minseps(g)
            assert pmcs == oracle_pmcs(g)
            a, b = len(seps), len(pmcs)
            assert b <= n * (a * a + a + 1)
            assert a <= n * b
