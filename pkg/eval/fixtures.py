"""
Fixture generators.
Seeded random instances for the test sweeps, the `gen` subcommand and the benchmark.
Every declared class tag is re-checked by recognition when a Fixture is built.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from core.config import GenerationSettings
from core.errors import DomainError, GenerationError
from core.graph import Graph, VertexSet, iter_bits
from core.modules import clique_number
from structure.recognition import (
    check_bipartition,
    has_induced_c6,
    is_chordal_bipartite,
    is_pt_free,
)
from utils.logging import get_logger

logger = get_logger(__name__)

# base graphs for the blow-up generators; P7-free rejection stays cheap at this size
BASE_SIZE = 9
# twin-free part of a P7-free bipartite fixture, grown one checked vertex at a time
CORE_SIZE = 16
CORE_ATTEMPTS = 40


class FixtureKind(str, Enum):
    RANDOM = "random"
    CHORDAL_BIPARTITE = "chordal_bipartite"
    P7FREE_BIPARTITE = "p7free_bipartite"
    P7FREE_BOUNDED_OMEGA = "p7free_bounded_omega"


@dataclass(frozen=True)
class Fixture:
    graph: Graph
    kind: FixtureKind
    seed: int
    tags: tuple[str, ...] = ()
    side1: Optional[VertexSet] = None

    def __post_init__(self):
        failed = [tag for tag in self.tags if not _has_tag(self.graph, tag, self.side1)]
        if failed:
            raise DomainError(f"fixture does not satisfy {failed}")


def _has_tag(g: Graph, tag: str, side1: Optional[VertexSet]) -> bool:
    if tag == "bipartite":
        try:
            check_bipartition(g, side1)
        except DomainError:
            return False
        return True
    if tag == "chordal_bipartite":
        return is_chordal_bipartite(g, side1)
    if tag == "p7_free":
        return is_pt_free(g, 7)
    if tag == "induced_c6":
        return has_induced_c6(g)
    if tag.startswith("omega<="):
        return clique_number(g) <= int(tag.split("<=")[1])
    raise DomainError(f"unknown fixture tag {tag!r}")


def _from_pairs(n: int, pairs) -> Graph:
    return Graph.from_edges(n, [(int(u), int(v)) for u, v in pairs])


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p) from the upper triangle of one uniform draw."""
    hits = np.triu(rng.random((n, n)) < p, k=1)
    return _from_pairs(n, zip(*np.nonzero(hits)))


def random_bipartite(n1: int, n2: int, p: float, rng: np.random.Generator) -> Graph:
    """Side 1 is 0..n1−1."""
    hits = rng.random((n1, n2)) < p
    return _from_pairs(n1 + n2, ((u, n1 + v) for u, v in zip(*np.nonzero(hits))))


def blow_up(g: Graph, n: int, rng: np.random.Generator) -> tuple[Graph, list[int]]:
    """
    Add false twins of random vertices until g has n vertices. Returns the graph and,
    for each vertex, the base vertex it copies; induced paths on four or more vertices
    and clique number are unchanged.
    """
    adj = [set(iter_bits(row)) for row in g.adj]
    origin = list(range(g.n))
    while len(adj) < n:
        v = int(rng.integers(0, len(adj)))
        new = len(adj)
        adj.append(set(adj[v]))
        for u in adj[v]:
            adj[u].add(new)
        origin.append(origin[v])
    edges = [(u, w) for u in range(len(adj)) for w in adj[u] if u < w]
    return Graph.from_edges(len(adj), edges), origin


def _chordal_bipartite(n: int, p: float, rng: np.random.Generator) -> tuple[Graph, VertexSet]:
    """
    Vertices arrive one at a time, each weakly simplicial on arrival: its neighbors on
    the other side have neighborhoods that form a chain under inclusion.
    """
    adj: list[set[int]] = []
    side = []
    for v in range(n):
        s = int(rng.integers(1, 3)) if v > 1 else v + 1
        others = [u for u in range(v) if side[u] != s]
        rng.shuffle(others)
        chosen: list[int] = []
        for u in others:
            if rng.random() >= p:
                continue
            if all(adj[u] <= adj[w] or adj[w] <= adj[u] for w in chosen):
                chosen.append(u)
        adj.append(set(chosen))
        side.append(s)
        for u in chosen:
            adj[u].add(v)
    edges = [(u, w) for u in range(n) for w in adj[u] if u < w]
    g = Graph.from_edges(n, edges)
    return g, VertexSet.of(n, (v for v in range(n) if side[v] == 1))


def _p7free_bipartite_core(size: int, p: float, rng: np.random.Generator) -> tuple[Graph, list[int]]:
    """
    Grow from an induced C6. Each new vertex draws a neighborhood on the other side that
    no vertex of its own side already has, and is kept only while the graph stays P7-free.
    Growth stops early once CORE_ATTEMPTS draws in a row fail. Returns the graph and each
    vertex's side.
    """
    adj = [{(v - 1) % 6, (v + 1) % 6} for v in range(6)]
    side = [1 + v % 2 for v in range(6)]
    while len(adj) < size:
        new = len(adj)
        for _ in range(CORE_ATTEMPTS):
            s = int(rng.integers(1, 3))
            others = [u for u in range(new) if side[u] != s]
            nbrs = {u for u in others if rng.random() < p}
            if not nbrs or any(side[w] == s and adj[w] == nbrs for w in range(new)):
                continue
            edges = [(u, w) for u in range(new) for w in adj[u] if u < w]
            edges += [(u, new) for u in nbrs]
            if is_pt_free(Graph.from_edges(new + 1, edges), 7):
                adj.append(nbrs)
                side.append(s)
                for u in nbrs:
                    adj[u].add(new)
                break
        else:
            logger.debug(f"bipartite core stopped at {new} vertices")
            break
    edges = [(u, w) for u in range(len(adj)) for w in adj[u] if u < w]
    return Graph.from_edges(len(adj), edges), side


def _relabel(g: Graph, perm: np.ndarray) -> Graph:
    edges = [(int(perm[u]), int(perm[w])) for u in range(g.n) for w in iter_bits(g.adj[u]) if u < w]
    return Graph.from_edges(g.n, edges)


def gen_fixture(
    kind: FixtureKind,
    n: int,
    seed: int,
    k: int = 2,
    settings: Optional[GenerationSettings] = None,
) -> Fixture:
    """
    Reproducible instance of the requested class. P7-free bipartite fixtures on six or
    more vertices grow a twin-free core around an induced C6; the other blow-up kinds draw
    a base graph of at most BASE_SIZE vertices by rejection. Either way false twins fill
    the graph up to n.
    """
    settings = settings or GenerationSettings()
    kind = FixtureKind(kind)
    if n < 0:
        raise DomainError(f"fixture size must be non-negative, got {n}")
    rng = np.random.default_rng(seed)

    if kind == FixtureKind.RANDOM:
        return Fixture(random_graph(n, settings.random_p, rng), kind, seed)

    if kind == FixtureKind.CHORDAL_BIPARTITE:
        for attempt in range(settings.rejection_budget):
            g, side1 = _chordal_bipartite(n, settings.bipartite_p, rng)
            if is_chordal_bipartite(g, side1):
                return Fixture(g, kind, seed, ("bipartite", "chordal_bipartite"), side1)
            logger.warning(f"chordal bipartite draw {attempt} rejected")
        raise GenerationError("no chordal bipartite draw accepted", {"attempts": settings.rejection_budget})

    if kind == FixtureKind.P7FREE_BIPARTITE and n >= 6:
        core, side = _p7free_bipartite_core(min(n, CORE_SIZE), settings.bipartite_p, rng)
        g, origin = blow_up(core, n, rng)
        perm = rng.permutation(n)
        side1 = VertexSet.of(n, (int(perm[v]) for v in range(n) if side[origin[v]] == 1))
        logger.debug(f"{kind.value} fixture grown from a {core.n}-vertex core")
        return Fixture(_relabel(g, perm), kind, seed, ("bipartite", "p7_free", "induced_c6"), side1)

    base_n = min(n, BASE_SIZE)
    for attempt in range(settings.rejection_budget):
        if kind == FixtureKind.P7FREE_BIPARTITE:
            n1 = int(rng.integers(0, base_n + 1))
            base = random_bipartite(n1, base_n - n1, settings.bipartite_p, rng)
            ok = is_pt_free(base, 7)
        else:
            base = random_graph(base_n, settings.random_p, rng)
            ok = is_pt_free(base, 7) and clique_number(base) <= k
        if not ok:
            continue
        g, origin = blow_up(base, n, rng)
        logger.debug(f"{kind.value} fixture accepted after {attempt + 1} draws")
        if kind == FixtureKind.P7FREE_BIPARTITE:
            side1 = VertexSet.of(n, (v for v in range(n) if origin[v] < n1))
            return Fixture(g, kind, seed, ("bipartite", "p7_free"), side1)
        return Fixture(g, kind, seed, ("p7_free", f"omega<={k}"))
    raise GenerationError(
        f"no {kind.value} base graph accepted", {"attempts": settings.rejection_budget, "n": n}
    )


def fixture_corpus(kind: FixtureKind, sizes: list[int], seeds: range, k: int = 2) -> list[Fixture]:
    return [gen_fixture(kind, n, seed, k=k) for n in sizes for seed in seeds]
