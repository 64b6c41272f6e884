"""
Brute-force oracles.
Exhaustive ground truth for the solvers and enumerators, built from graph primitives and
networkx only so that no solver code path is shared with what they certify.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Optional

import networkx as nx

from core.errors import CapabilityError, DomainError
from core.graph import Graph, VertexSet, iter_bits, popcount
from solvers.block_dp import Problem, SolveResult

ORACLE_MWIS_CAP = 20
ORACLE_SUBSET_CAP = 14
ORACLE_TRIANGULATION_CAP = 8


def _require(cap: str, limit: int, g: Graph) -> None:
    if g.n > limit:
        raise CapabilityError(cap, limit, g.n)


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def _prefer(a: int, b: int) -> bool:
    # earliest differing vertex decides, the set containing it wins
    diff = a ^ b
    return bool(diff and a & diff & -diff)


def _best_subset(g: Graph, feasible) -> tuple[Fraction, int]:
    best_w, best = Fraction(0), 0
    for mask in range(1 << g.n):
        if not feasible(mask):
            continue
        w = g.weight_of(mask)
        if w > best_w or (w == best_w and _prefer(mask, best)):
            best_w, best = w, mask
    return best_w, best


# =============================================================================
# Problem oracles
# =============================================================================


def oracle_mwis(g: Graph) -> SolveResult:
    """Branch and bound on the lowest undecided vertex, taking it first."""
    _require("oracle_mwis", ORACLE_MWIS_CAP, g)
    best: list = [Fraction(-1), 0]

    def branch(free: int, chosen: int, weight: Fraction) -> None:
        if not free:
            if weight > best[0]:
                best[0], best[1] = weight, chosen
            return
        if weight + g.weight_of(free) <= best[0]:
            return
        v = free & -free
        idx = v.bit_length() - 1
        branch(free & ~v & ~g.adj[idx], chosen | v, weight + g.weights[idx])
        branch(free & ~v, chosen, weight)

    branch(g.full_mask, 0, Fraction(0))
    return SolveResult(Problem.MWIS, max(best[0], Fraction(0)), VertexSet(best[1], g.n))


def oracle_induced_forest(g: Graph) -> SolveResult:
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    h = to_networkx(g)
    weight, mask = _best_subset(g, lambda m: nx.is_forest(h.subgraph(iter_bits(m))) if m else True)
    return SolveResult(Problem.FOREST, weight, VertexSet(mask, g.n))


def oracle_max_degree(g: Graph, k: int) -> SolveResult:
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    if k < 0:
        raise DomainError(f"degree bound k must be non-negative, got {k}")
    weight, mask = _best_subset(g, lambda m: all(popcount(g.adj[v] & m) <= k for v in iter_bits(m)))
    return SolveResult(Problem.MAXDEG, weight, VertexSet(mask, g.n), k=k)


def oracle_solve(g: Graph, problem: Problem, k: int = 1) -> SolveResult:
    problem = Problem(problem)
    if problem == Problem.MWIS:
        return oracle_mwis(g)
    if problem == Problem.FOREST:
        return oracle_induced_forest(g)
    return oracle_max_degree(g, k)


# =============================================================================
# Separator and PMC oracles
# =============================================================================


def _components(g: Graph, within: int) -> list[int]:
    h = to_networkx(g).subgraph(iter_bits(within))
    return [sum(1 << v for v in comp) for comp in nx.connected_components(h)]


def _full_count(g: Graph, s: int) -> int:
    return sum(1 for c in _components(g, g.full_mask & ~s) if g.nbhd_mask(c) == s)


def oracle_minseps(g: Graph) -> list[VertexSet]:
    """Every nonempty subset with at least two full components, canonical order."""
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    found = [s for s in range(1, 1 << g.n) if _full_count(g, s) >= 2]
    return sorted((VertexSet(s, g.n) for s in found), key=lambda x: x.sort_key())


def _is_pmc_by_definition(g: Graph, omega: int) -> bool:
    comps = _components(g, g.full_mask & ~omega)
    nbhds = [g.nbhd_mask(c) for c in comps]
    if any(nb == omega for nb in nbhds):
        return False
    for u, v in combinations(iter_bits(omega), 2):
        if g.has_edge(u, v):
            continue
        pair = (1 << u) | (1 << v)
        if not any(nb & pair == pair for nb in nbhds):
            return False
    return True


def oracle_pmcs(g: Graph) -> list[VertexSet]:
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    found = [m for m in range(1, 1 << g.n) if _is_pmc_by_definition(g, m)]
    return sorted((VertexSet(m, g.n) for m in found), key=lambda x: x.sort_key())


def _fill(g: Graph, order: tuple[int, ...]) -> frozenset[tuple[int, int]]:
    adj = [set(iter_bits(row)) for row in g.adj]
    fill = set()
    for i, v in enumerate(order):
        later = [u for u in adj[v] if order.index(u) > i]
        for a, b in combinations(later, 2):
            if b not in adj[a]:
                adj[a].add(b)
                adj[b].add(a)
                fill.add((min(a, b), max(a, b)))
    return frozenset(fill)


def _without_edge(h: nx.Graph, e: tuple[int, int]) -> nx.Graph:
    smaller = h.copy()
    smaller.remove_edge(*e)
    return smaller


def oracle_minimal_triangulations(g: Graph) -> list[frozenset[tuple[int, int]]]:
    """Fill sets of all elimination orderings that are inclusion-minimal triangulations."""
    _require("oracle_triangulations", ORACLE_TRIANGULATION_CAP, g)
    base = to_networkx(g)
    minimal = set()
    for fill in {_fill(g, order) for order in permutations(range(g.n))}:
        h = base.copy()
        h.add_edges_from(fill)
        if all(not nx.is_chordal(_without_edge(h, e)) for e in fill):
            minimal.add(fill)
    return sorted(minimal, key=lambda f: (len(f), sorted(f)))


def oracle_pmcs_by_triangulation(g: Graph) -> list[VertexSet]:
    """Maximal cliques of all minimal triangulations."""
    base = to_networkx(g)
    found = set()
    for fill in oracle_minimal_triangulations(g):
        h = base.copy()
        h.add_edges_from(fill)
        for clique in nx.find_cliques(h):
            found.add(sum(1 << v for v in clique))
    return sorted((VertexSet(m, g.n) for m in found), key=lambda x: x.sort_key())


# =============================================================================
# Width and recognition oracles
# =============================================================================


def oracle_treewidth(g: Graph) -> int:
    """Vertex-subset DP: TW(S) = min over v ∈ S of max(TW(S − v), |Q(S − v, v)|)."""
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    if g.n == 0:
        return -1

    def q(s: int, v: int) -> int:
        # vertices outside s ∪ {v} reachable from v through s
        reach = seen = 1 << v
        while reach:
            nxt = g.union_adj(reach) & ~seen
            seen |= nxt
            reach = nxt & s
        return popcount(seen & ~s & ~(1 << v))

    @lru_cache(maxsize=None)
    def tw(s: int) -> int:
        if not s:
            return -1
        return min(max(tw(s & ~(1 << v)), q(s & ~(1 << v), v)) for v in iter_bits(s))

    return tw(g.full_mask)


def oracle_treedepth(g: Graph) -> int:
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    h = to_networkx(g)

    @lru_cache(maxsize=None)
    def td(vertices: frozenset) -> int:
        if not vertices:
            return 0
        comps = list(nx.connected_components(h.subgraph(vertices)))
        if len(comps) > 1:
            return max(td(frozenset(c)) for c in comps)
        return 1 + min(td(vertices - {v}) for v in vertices)

    return td(frozenset(range(g.n)))


def _is_path_mask(g: Graph, mask: int) -> bool:
    degrees = [popcount(g.adj[v] & mask) for v in iter_bits(mask)]
    edges = sum(degrees) // 2
    return (
        edges == popcount(mask) - 1
        and max(degrees, default=0) <= 2
        and g.is_connected_mask(mask)
    )


def oracle_induced_path(g: Graph, t: int) -> Optional[VertexSet]:
    """Vertex set of some induced path on t vertices, scanning t-subsets."""
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    for combo in combinations(range(g.n), t):
        mask = sum(1 << v for v in combo)
        if _is_path_mask(g, mask):
            return VertexSet(mask, g.n)
    return None


def oracle_clique_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    return max(len(c) for c in nx.find_cliques(to_networkx(g)))


def oracle_chordal_bipartite(g: Graph) -> bool:
    """Bipartite with no induced cycle on six or more vertices."""
    _require("oracle_subsets", ORACLE_SUBSET_CAP, g)
    if not nx.is_bipartite(to_networkx(g)):
        return False
    for mask in range(1 << g.n):
        size = popcount(mask)
        if size < 6:
            continue
        if all(popcount(g.adj[v] & mask) == 2 for v in iter_bits(mask)) and g.is_connected_mask(mask):
            return False
    return True
