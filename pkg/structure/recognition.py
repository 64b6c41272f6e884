"""
Recognition
Induced paths and cycles, chordality, bipartiteness and chordal bipartiteness.
"""

from collections.abc import Iterator
from dataclasses import dataclass
from typing import Optional

from core.errors import CapabilityError, DomainError
from core.graph import Graph, VertexSet, canonical_sets, iter_bits, mask_of
from structure.separators import enumerate_minimal_separator_masks
from utils.logging import get_logger

logger = get_logger(__name__)

MAX_PATH_LENGTH = 10
CYCLE_SEARCH_CAP = 20


@dataclass(frozen=True)
class InducedPath:
    """Vertices in path order."""

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def is_valid(self, g: Graph) -> bool:
        vs = self.vertices
        if len(set(vs)) != len(vs):
            return False
        for i, u in enumerate(vs):
            for j in range(i + 1, len(vs)):
                if g.has_edge(u, vs[j]) != (j == i + 1):
                    return False
        return True


@dataclass(frozen=True)
class InducedCycle:
    """Vertices in cyclic order, stored in canonical form."""

    vertices: tuple[int, ...]

    @classmethod
    def canonical(cls, vertices: tuple[int, ...]) -> "InducedCycle":
        """Rotate to start at the minimum vertex, then orient towards its smaller neighbor."""
        k = len(vertices)
        start = vertices.index(min(vertices))
        rotated = vertices[start:] + vertices[:start]
        if k > 2 and rotated[-1] < rotated[1]:
            rotated = (rotated[0],) + tuple(reversed(rotated[1:]))
        return cls(rotated)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def mask(self) -> int:
        return mask_of(self.vertices)

    def opposite(self, i: int) -> int:
        """Vertex opposite to position i on an even cycle."""
        k = len(self.vertices)
        return self.vertices[(i + k // 2) % k]

    def rotated_to(self, vertex: int) -> tuple[int, ...]:
        """Same cyclic order, starting at `vertex`."""
        i = self.vertices.index(vertex)
        return self.vertices[i:] + self.vertices[:i]

    def is_valid(self, g: Graph) -> bool:
        vs = self.vertices
        k = len(vs)
        if k < 3 or len(set(vs)) != k:
            return False
        for i in range(k):
            for j in range(i + 1, k):
                consecutive = j == i + 1 or (i == 0 and j == k - 1)
                if g.has_edge(vs[i], vs[j]) != consecutive:
                    return False
        return True


# =============================================================================
# Induced paths
# =============================================================================


def _extend_path(g: Graph, path: list[int], blocked: int, target: int) -> Optional[list[int]]:
    # blocked = N[path without its last vertex] ∪ path
    if len(path) == target:
        return path
    last = path[-1]
    next_blocked = blocked | g.adj[last] | (1 << last)
    for w in iter_bits(g.adj[last] & ~blocked):
        path.append(w)
        found = _extend_path(g, path, next_blocked, target)
        if found is not None:
            return found
        path.pop()
    return None


def find_induced_path(g: Graph, length_at_least: int) -> Optional[InducedPath]:
    """
    Lexicographically least induced path on exactly `length_at_least` vertices.

    Any longer induced path contains one of that length, so None means P_t-free.
    """
    t = length_at_least
    if not 2 <= t <= MAX_PATH_LENGTH:
        raise DomainError(f"path length must be in 2..{MAX_PATH_LENGTH}, got {t}")
    if g.n < t:
        return None
    for s in range(g.n):
        found = _extend_path(g, [s], 1 << s, t)
        if found is not None:
            return InducedPath(tuple(found))
    return None


def is_pt_free(g: Graph, t: int) -> bool:
    return find_induced_path(g, t) is None


# =============================================================================
# Induced cycles
# =============================================================================


def _cycles_from(g: Graph, start: int, min_len: int, max_len: Optional[int]) -> Iterator[tuple]:
    """Induced cycles whose minimum vertex is `start`, each in both orientations."""
    allowed = g.full_mask & ~((1 << (start + 1)) - 1)
    start_nbrs = g.adj[start] & allowed

    def grow(path: list[int], blocked: int):
        # blocked = N[interior] ∪ path (interior excludes start and the last vertex)
        last = path[-1]
        k = len(path)
        for w in iter_bits(g.adj[last] & allowed & ~blocked):
            if g.adj[w] >> start & 1:
                if k + 1 >= min_len and (max_len is None or k + 1 <= max_len) and k >= 2:
                    yield tuple(path + [w])
                continue
            if max_len is not None and k + 1 >= max_len:
                continue
            path.append(w)
            yield from grow(path, blocked | g.adj[last] | (1 << last) | (1 << w))
            path.pop()

    for second in iter_bits(start_nbrs):
        # vertices adjacent to start other than the closing one may not be used later
        blocked = (1 << start) | (1 << second)
        yield from grow([start, second], blocked)


def enumerate_induced_c6(g: Graph) -> list[InducedCycle]:
    """Every induced 6-cycle once, canonical and sorted."""
    found = set()
    for start in range(g.n):
        for cycle in _cycles_from(g, start, 6, 6):
            if cycle[1] < cycle[-1]:
                found.add(cycle)
    return [InducedCycle(c) for c in sorted(found)]


def has_induced_c6(g: Graph) -> bool:
    """Stops at the first induced 6-cycle."""
    return any(next(_cycles_from(g, start, 6, 6), None) is not None for start in range(g.n))


def find_long_induced_cycle(g: Graph, min_length: int) -> Optional[InducedCycle]:
    """Some induced cycle on at least `min_length` vertices (n ≤ 20)."""
    if g.n > CYCLE_SEARCH_CAP:
        raise CapabilityError("cycle_search", CYCLE_SEARCH_CAP, g.n)
    for start in range(g.n):
        for cycle in _cycles_from(g, start, max(min_length, 3), None):
            return InducedCycle.canonical(cycle)
    return None


# =============================================================================
# Chordality
# =============================================================================


def maximum_cardinality_search(g: Graph) -> list[int]:
    """Visit order of MCS; ties go to the smallest index."""
    weight = [0] * g.n
    unvisited = g.full_mask
    order = []
    for _ in range(g.n):
        v = max(iter_bits(unvisited), key=lambda u: (weight[u], -u))
        order.append(v)
        unvisited &= ~(1 << v)
        for u in iter_bits(g.adj[v] & unvisited):
            weight[u] += 1
    return order


def perfect_elimination_order(g: Graph) -> Optional[list[int]]:
    """Reverse MCS order if it is a perfect elimination order, else None."""
    peo = list(reversed(maximum_cardinality_search(g)))
    position = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in iter_bits(g.adj[v]) if position[u] > position[v]]
        if not later:
            continue
        parent = min(later, key=position.__getitem__)
        rest = mask_of(later) & ~(1 << parent)
        if rest & ~g.adj[parent]:
            return None
    return peo


def is_chordal(g: Graph) -> bool:
    return perfect_elimination_order(g) is not None


def chordal_maximal_cliques(g: Graph) -> list[VertexSet]:
    """Maximal cliques of a chordal graph from its elimination order."""
    peo = perfect_elimination_order(g)
    if peo is None:
        raise DomainError("graph is not chordal")
    position = {v: i for i, v in enumerate(peo)}
    candidates = []
    for v in peo:
        later = mask_of(u for u in iter_bits(g.adj[v]) if position[u] > position[v])
        candidates.append(later | (1 << v))
    maximal = [c for c in set(candidates) if not any(c != d and c & ~d == 0 for d in candidates)]
    return canonical_sets(VertexSet(c, g.n) for c in maximal)


# =============================================================================
# Bipartite classes
# =============================================================================


def two_coloring(g: Graph) -> Optional[VertexSet]:
    """Side containing the minimum vertex of every component, or None if not bipartite."""
    side = [-1] * g.n
    for root in range(g.n):
        if side[root] != -1:
            continue
        side[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for u in iter_bits(g.adj[v]):
                if side[u] == -1:
                    side[u] = 1 - side[v]
                    stack.append(u)
                elif side[u] == side[v]:
                    return None
    return VertexSet.of(g.n, [v for v in range(g.n) if side[v] == 0])


def is_bipartite(g: Graph) -> bool:
    return two_coloring(g) is not None


def check_bipartition(g: Graph, side1: Optional[VertexSet]) -> VertexSet:
    """Validate (or infer) side 1 of a bipartition."""
    if side1 is None:
        inferred = two_coloring(g)
        if inferred is None:
            raise DomainError("graph is not bipartite")
        return inferred
    g.check(side1)
    s1 = side1.bits
    s2 = g.full_mask & ~s1
    for v in iter_bits(s1):
        if g.adj[v] & s1:
            raise DomainError(f"edge inside side 1 at vertex {v}")
    for v in iter_bits(s2):
        if g.adj[v] & s2:
            raise DomainError(f"edge inside side 2 at vertex {v}")
    return side1


def biclique_violation(g: Graph, side1: int, separators: list[int]) -> Optional[int]:
    """First separator whose side-1 part is not complete to its side-2 part."""
    for s in separators:
        part2 = s & ~side1
        for v in iter_bits(s & side1):
            if part2 & ~g.adj[v]:
                return s
    return None


def is_chordal_bipartite(
    g: Graph, side1: Optional[VertexSet] = None, method: str = "separators"
) -> bool:
    """
    Bipartite with no induced cycle longer than 4.

    ``separators``: every minimal separator induces a biclique.
    ``cycles``: direct induced-cycle search (n ≤ 20).
    """
    side = check_bipartition(g, side1)
    if method == "cycles":
        return find_long_induced_cycle(g, 6) is None
    if method != "separators":
        raise DomainError(f"unknown chordal-bipartite method '{method}'")
    separators = enumerate_minimal_separator_masks(g)
    violation = biclique_violation(g, side.bits, separators)
    if violation is not None:
        logger.debug(f"biclique criterion fails at {VertexSet(violation, g.n).to_list()}")
    return violation is None
