"""
Pytest configuration and shared fixtures for pmc-sparse tests.
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.graph import Graph  # noqa: E402
from tests.graphs import complete_bipartite, cycle_graph, path_graph  # noqa: E402

# =============================================================================
# Pytest Configuration
# =============================================================================


def pytest_configure(config):
    """Configure pytest markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line("markers", "integration: marks tests as integration tests")


# =============================================================================
# Graph Fixtures
# =============================================================================


@pytest.fixture
def c6():
    """The induced 6-cycle 0-1-2-3-4-5-0."""
    return cycle_graph(6)


@pytest.fixture
def k33():
    """K3,3 with sides {0,1,2} and {3,4,5}."""
    return complete_bipartite(3, 3)


@pytest.fixture
def k4():
    """Complete graph on four vertices."""
    return Graph.complete(4)


@pytest.fixture
def p7():
    """Induced path on seven vertices."""
    return path_graph(7)


@pytest.fixture
def weighted_path():
    """P4 with weights 3, 1, 1, 3: the endpoints form the unique optimum."""
    return path_graph(4).with_weights([3, 1, 1, 3])


@pytest.fixture
def edge_list_c6(tmp_path):
    """C6 written as an edge-list file."""
    path = tmp_path / "c6.txt"
    lines = ["6 6"] + [f"{i} {(i + 1) % 6}" for i in range(6)]
    path.write_text("\n".join(lines) + "\n")
    return path
