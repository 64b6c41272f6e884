"""
Unit tests for graph file formats, settings and metrics.
"""

from fractions import Fraction

import pytest

from core.config import Settings, load_config
from core.errors import ContractViolation, ParseError
from core.graph_io import format_edge_list, load_graph, parse_graph
from tests.graphs import c6_sides, cycle_graph
from utils.metrics import MetricsTracker

# =============================================================================
# Edge List Tests
# =============================================================================


class TestEdgeList:
    """Tests for the 0-based edge-list format."""

    def test_parse_with_comments(self):
        """Test comments and blank lines are skipped."""
        text = "# triangle\n3 3\n0 1\n\n1 2  # closing\n2 0\n"
        parsed = parse_graph(text)

        assert parsed.graph.n == 3
        assert parsed.graph.num_edges == 3
        assert parsed.side1 is None

    def test_weights_and_bipartition(self):
        """Test weight lines and the bip line."""
        text = "4 3 weighted\n0 1\n1 2\n2 3\nw 0 5/2\nw 3 2\nbip 0 2\n"
        parsed = parse_graph(text)

        assert parsed.graph.weights == (Fraction(5, 2), 1, 1, 2)
        assert parsed.side1.to_list() == [0, 2]

    def test_edge_count_mismatch(self):
        """Test the declared edge count is enforced."""
        with pytest.raises(ParseError, match="declares 2 edges, found 1"):
            parse_graph("3 2\n0 1\n")

    def test_error_carries_line_number(self):
        """Test parse errors name the offending line."""
        with pytest.raises(ParseError) as info:
            parse_graph("3 1\n0 x\n")

        assert info.value.line_number == 2
        assert info.value.to_dict()["line"] == 2

    def test_out_of_range_edge(self):
        """Test edges beyond n."""
        with pytest.raises(ParseError, match="outside vertex range"):
            parse_graph("2 1\n0 2\n")

    def test_self_loop(self):
        """Test self-loops in files."""
        with pytest.raises(ParseError, match="self-loop"):
            parse_graph("2 1\n1 1\n")

    def test_nonpositive_weight(self):
        """Test weights must be positive."""
        with pytest.raises(ParseError, match="positive"):
            parse_graph("2 0\nw 0 -1\n")

    def test_empty_input(self):
        """Test an empty file."""
        with pytest.raises(ParseError, match="empty"):
            parse_graph("# nothing\n")

    def test_unknown_format(self):
        """Test unknown format names."""
        with pytest.raises(ContractViolation):
            parse_graph("1 0\n", fmt="graphml")

    def test_writer_output_parses_back(self):
        """Test the writer produces the documented layout."""
        g = cycle_graph(6).with_weights([1, 2, 1, 2, 1, 2])
        text = format_edge_list(g, c6_sides())
        parsed = parse_graph(text)

        assert text.splitlines()[0] == "6 6 weighted"
        assert parsed.graph == g
        assert parsed.side1 == c6_sides()


# =============================================================================
# DIMACS Tests
# =============================================================================


class TestDimacs:
    """Tests for the 1-based DIMACS format."""

    def test_parse(self):
        """Test 1-based vertices are shifted."""
        text = "c path\np edge 3 2\ne 1 2\ne 2 3\nn 3 7\n"
        parsed = parse_graph(text, fmt="dimacs")

        assert parsed.graph.edges() == [(0, 1), (1, 2)]
        assert parsed.graph.weights[2] == 7

    def test_missing_problem_line(self):
        """Test data before the problem line."""
        with pytest.raises(ParseError, match="before problem line"):
            parse_graph("e 1 2\n", fmt="dimacs")

    def test_bipartition(self):
        """Test the bip extension line."""
        parsed = parse_graph("p edge 2 1\ne 1 2\nbip 1\n", fmt="dimacs")

        assert parsed.side1.to_list() == [0]


class TestLoadGraph:
    """Tests for reading graph files."""

    def test_load_returns_raw_bytes(self, edge_list_c6):
        """Test the raw bytes come back for digesting."""
        parsed, raw = load_graph(str(edge_list_c6))

        assert parsed.graph == cycle_graph(6)
        assert raw == edge_list_c6.read_bytes()

    def test_non_utf8(self, tmp_path):
        """Test undecodable files."""
        path = tmp_path / "bad.txt"
        path.write_bytes(b"\xff\xfe\x00")

        with pytest.raises(ParseError, match="UTF-8"):
            load_graph(str(path))


# =============================================================================
# Settings Tests
# =============================================================================


class TestSettings:
    """Tests for YAML settings."""

    def test_default_file_matches_builtin(self):
        """Test config/defaults.yaml mirrors the dataclass defaults."""
        assert load_config() == Settings()

    def test_override_section(self, tmp_path):
        """Test present keys override defaults section by section."""
        path = tmp_path / "custom.yaml"
        path.write_text("solver:\n  default_d: 2\n  state_cap: 3\nbench:\n  workers: 4\n")
        settings = load_config(str(path))

        assert settings.solver.default_d == 2
        assert settings.solver.state_cap == 3
        assert settings.bench.workers == 4
        assert settings.caps.certify_max_n == 14

    def test_missing_file_falls_back(self, tmp_path):
        """Test a missing file yields defaults."""
        assert load_config(str(tmp_path / "absent.yaml")) == Settings()

    def test_bad_yaml_falls_back(self, tmp_path):
        """Test a non-mapping document yields defaults."""
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")

        assert load_config(str(path)) == Settings()

    def test_unknown_keys_ignored(self):
        """Test unknown keys do not break loading."""
        settings = Settings.from_dict({"pmc": {"cover_cap": 3, "unused": 1}})

        assert settings.pmc.cover_cap == 3

    def test_round_trip(self):
        """Test to_dict and from_dict agree."""
        settings = Settings()

        assert Settings.from_dict(settings.to_dict()) == settings


class TestMetricsTracker:
    """Tests for MetricsTracker."""

    def test_counters_and_timings(self):
        """Test counting, timing and exclusion from totals."""
        metrics = MetricsTracker()
        metrics.count("separators", 3)
        metrics.count("separators")
        with metrics.time("parse"):
            pass
        with metrics.time("solve"):
            pass
        summary = metrics.summary()

        assert summary["counters"] == {"separators": 4}
        assert set(summary["timings_ms"]) == {"parse", "solve"}
        assert metrics.total_ms(exclude=("parse",)) == metrics.timings_ms["solve"]
