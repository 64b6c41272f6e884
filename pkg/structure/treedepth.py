"""
Treedepth Structures
Elimination forests of bounded height over vertex subsets, maximality, aligned chordal
completions, containers, tree decompositions and exact small-graph parameters.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Any, Optional

import networkx as nx

from core.errors import CapabilityError, ContractViolation, DomainError
from core.graph import Graph, VertexSet, iter_bits, lowest_bit, mask_of, popcount
from structure.recognition import chordal_maximal_cliques, is_chordal
from structure.separators import Pmc, enumerate_minimal_separator_masks
from utils.logging import get_logger

logger = get_logger(__name__)

ROOT = -1
ABSENT = -2

STRUCTURE_ENUM_CAP = 12
TREEDEPTH_CAP = 14
TREEWIDTH_CAP = 64
TRIANGULATION_CAP = 10

Edge = tuple[int, int]


@dataclass(frozen=True)
class TreedepthStructure:
    """
    Rooted forest of height at most d over a subset of the vertices of a graph.

    ``parents[v]`` is ROOT, ABSENT (v not in the forest) or the parent vertex.
    """

    d: int
    parents: tuple[int, ...]

    def __post_init__(self):
        if self.d < 1:
            raise ContractViolation(f"depth bound must be positive, got {self.d}")
        n = len(self.parents)
        for v, p in enumerate(self.parents):
            if p in (ROOT, ABSENT):
                continue
            if not 0 <= p < n or self.parents[p] == ABSENT:
                raise ContractViolation(f"parent {p} of vertex {v} is not in the forest")
        for v in range(n):
            if self.depths[v] > self.d:
                raise ContractViolation(f"vertex {v} at depth {self.depths[v]} exceeds d={self.d}")

    @classmethod
    def from_parent_map(cls, n: int, d: int, parent: dict[int, Optional[int]]) -> "TreedepthStructure":
        """Build from {vertex: parent or None for roots}."""
        parents = [ABSENT] * n
        for v, p in parent.items():
            if not 0 <= v < n:
                raise ContractViolation(f"vertex {v} outside 0..{n - 1}")
            parents[v] = ROOT if p is None else p
        return cls(d, tuple(parents))

    @classmethod
    def empty(cls, n: int, d: int) -> "TreedepthStructure":
        return cls(d, (ABSENT,) * n)

    @property
    def n(self) -> int:
        return len(self.parents)

    @cached_property
    def depths(self) -> tuple[int, ...]:
        """Depth per vertex, roots at 1 and 0 outside the forest."""
        depth = [0] * self.n
        for v in range(self.n):
            chain = []
            u = v
            while u >= 0 and depth[u] == 0 and self.parents[u] != ABSENT:
                chain.append(u)
                if len(chain) > self.n:
                    raise ContractViolation("parent pointers contain a cycle")
                u = self.parents[u]
            base = depth[u] if u >= 0 else 0
            for w in reversed(chain):
                base += 1
                depth[w] = base
        return tuple(depth)

    @cached_property
    def ancestors(self) -> tuple[int, ...]:
        """Mask of ancestors of each vertex, the vertex itself included."""
        anc = [0] * self.n
        for v in sorted(range(self.n), key=self.depths.__getitem__):
            p = self.parents[v]
            if p == ABSENT:
                continue
            anc[v] = (1 << v) | (anc[p] if p >= 0 else 0)
        return tuple(anc)

    @cached_property
    def mask(self) -> int:
        return mask_of(v for v, p in enumerate(self.parents) if p != ABSENT)

    @property
    def vertices(self) -> VertexSet:
        return VertexSet(self.mask, self.n)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and self.parents[v] != ABSENT

    def parent(self, v: int) -> Optional[int]:
        p = self.parents[v]
        if p == ABSENT:
            raise ContractViolation(f"vertex {v} is not in the forest")
        return None if p == ROOT else p

    def depth(self, v: int) -> int:
        return self.depths[v]

    def is_comparable(self, u: int, v: int) -> bool:
        """One of u, v is an ancestor of the other (both in the forest)."""
        return bool(self.ancestors[u] >> v & 1 or self.ancestors[v] >> u & 1)

    def level_mask(self, i: int) -> int:
        return mask_of(v for v in range(self.n) if self.depths[v] == i)

    def up_to_mask(self, alpha: int) -> int:
        """Vertices of depth 1..alpha."""
        return mask_of(v for v in range(self.n) if 0 < self.depths[v] <= alpha)

    def deeper_than_mask(self, alpha: int) -> int:
        return mask_of(v for v in range(self.n) if self.depths[v] > alpha)

    def extended(self, w: int, parent: Optional[int]) -> "TreedepthStructure":
        """Copy with w added as a leaf under `parent` (a new root for None)."""
        if w in self:
            raise ContractViolation(f"vertex {w} already in the forest")
        parents = list(self.parents)
        parents[w] = ROOT if parent is None else parent
        return TreedepthStructure(self.d, tuple(parents))

    def sort_key(self) -> tuple:
        verts = tuple(iter_bits(self.mask))
        return (len(verts), verts, tuple(self.depths[v] for v in verts), tuple(self.parents))

    def to_dict(self) -> dict[str, Any]:
        return {
            "d": self.d,
            "parent": {str(v): self.parent(v) for v in iter_bits(self.mask)},
        }


@dataclass(frozen=True)
class StructureRecord:
    structure: TreedepthStructure
    maximal: bool


@dataclass(frozen=True)
class Container:
    """Superset of a target set with a bounded number of extra forest vertices."""

    set: VertexSet
    defect: int

    def certifies(self, s: VertexSet, t: TreedepthStructure) -> bool:
        found = container_defect(s, self.set, t)
        return found is not None and found <= self.defect


@dataclass(frozen=True)
class TreeDecomposition:
    """Forest of bags; ``parent[i]`` is the parent node of node i or -1."""

    parent: tuple[int, ...]
    bags: tuple[VertexSet, ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, g: Graph) -> list[str]:
        """Problems found; empty when this is a tree decomposition of g."""
        problems = []
        if len(self.parent) != len(self.bags):
            return [f"{len(self.parent)} parent pointers for {len(self.bags)} bags"]
        k = len(self.bags)
        for i, p in enumerate(self.parent):
            if p != -1 and not 0 <= p < k:
                problems.append(f"node {i} has parent {p} outside the tree")
                return problems
        for i in range(k):
            seen, p = 0, i
            while p != -1:
                seen += 1
                if seen > k:
                    return [f"parent pointers from node {i} contain a cycle"]
                p = self.parent[p]

        masks = [g.check(b).bits for b in self.bags]
        covered = 0
        for m in masks:
            covered |= m
        if covered != g.full_mask:
            problems.append(f"vertices {VertexSet(g.full_mask & ~covered, g.n).to_list()} in no bag")
        for u, v in g.edges():
            pair = (1 << u) | (1 << v)
            if not any(m & pair == pair for m in masks):
                problems.append(f"edge ({u}, {v}) in no bag")
        for v in range(g.n):
            # bags holding v form a subtree iff exactly one of them has no parent holding v
            tops = [
                i for i, m in enumerate(masks)
                if m >> v & 1 and (self.parent[i] == -1 or not masks[self.parent[i]] >> v & 1)
            ]
            if len(tops) > 1:
                problems.append(f"bags containing {v} are not connected")
        return problems

    def is_valid(self, g: Graph) -> bool:
        return not self.validate(g)

    def to_dict(self) -> dict[str, Any]:
        return {"parent": list(self.parent), "bags": [b.to_list() for b in self.bags]}


# =============================================================================
# Validity and maximality
# =============================================================================


def _check_width(g: Graph, t: TreedepthStructure) -> None:
    if t.n != g.n:
        raise ContractViolation(f"structure over {t.n} vertices for a graph with n={g.n}")


def is_treedepth_structure(g: Graph, t: TreedepthStructure) -> bool:
    """Every edge of g inside the forest joins comparable vertices."""
    _check_width(g, t)
    inside = t.mask
    for v in iter_bits(inside):
        for u in iter_bits(g.adj[v] & inside):
            if u > v and not t.is_comparable(u, v):
                return False
    return True


def extensions(g: Graph, t: TreedepthStructure) -> list[tuple[int, Optional[int]]]:
    """Every (w, parent) leaf addition that keeps a valid structure; None is a new root."""
    _check_width(g, t)
    found = []
    for w in range(g.n):
        if w in t:
            continue
        options: list[Optional[int]] = [None]
        options.extend(p for p in iter_bits(t.mask) if t.depths[p] < t.d)
        for p in options:
            if is_treedepth_structure(g, t.extended(w, p)):
                found.append((w, p))
    return found


def is_maximal(g: Graph, t: TreedepthStructure) -> bool:
    """Valid and no leaf can be added."""
    return is_treedepth_structure(g, t) and not extensions(g, t)


def _is_extendable_fast(g: Graph, t: TreedepthStructure) -> bool:
    inside = t.mask
    for w in iter_bits(g.full_mask & ~inside):
        nw = g.adj[w] & inside
        if not nw:
            return True
        for p in iter_bits(inside):
            if t.depths[p] < t.d and nw & ~t.ancestors[p] == 0:
                return True
    return False


# =============================================================================
# Enumeration
# =============================================================================


def _independent_submasks(g: Graph, mask: int) -> Iterator[int]:
    verts = list(iter_bits(mask))
    for size in range(1, len(verts) + 1):
        for combo in combinations(verts, size):
            m = mask_of(combo)
            if g.is_independent_mask(m):
                yield m


def _forest_builder(g: Graph):
    @lru_cache(maxsize=None)
    def forests(mask: int, height: int) -> tuple[tuple[Edge, ...], ...]:
        # each forest is a sorted tuple of (vertex, parent-or-ROOT) pairs covering mask
        if not mask:
            return ((),)
        if height == 0:
            return ()
        out = []
        for roots in _independent_submasks(g, mask):
            root_list = list(iter_bits(roots))
            comps = g.component_masks(mask & ~roots)
            options: Optional[list] = []
            for comp in comps:
                touching = g.union_adj(comp) & roots
                if popcount(touching) > 1:
                    options = None
                    break
                options.append([lowest_bit(touching)] if touching else root_list)
            if options is None:
                continue
            for assignment in product(*options):
                below = {r: 0 for r in root_list}
                for comp, r in zip(comps, assignment):
                    below[r] |= comp
                sub = [forests(below[r], height - 1) for r in root_list]
                for combo in product(*sub):
                    pairs = [(r, ROOT) for r in root_list]
                    for r, forest in zip(root_list, combo):
                        pairs.extend((v, r if p == ROOT else p) for v, p in forest)
                    out.append(tuple(sorted(pairs)))
        return tuple(out)

    return forests


def enumerate_treedepth_structures(
    g: Graph, d: int, max_count: Optional[int] = None
) -> Iterator[StructureRecord]:
    """
    All treedepth-d structures of g, ordered by vertex set (size, then lexicographic), then
    by depth vector. Each record says whether the structure is maximal.
    """
    if d < 1:
        raise DomainError(f"depth bound must be positive, got {d}")
    if max_count is None and g.n > STRUCTURE_ENUM_CAP:
        raise CapabilityError("structure_enumeration", STRUCTURE_ENUM_CAP, g.n)
    forests = _forest_builder(g)
    emitted = 0
    for size in range(g.n + 1):
        for combo in combinations(range(g.n), size):
            batch = []
            for forest in forests(mask_of(combo), d):
                parents = [ABSENT] * g.n
                for v, p in forest:
                    parents[v] = p
                batch.append(TreedepthStructure(d, tuple(parents)))
            batch.sort(key=TreedepthStructure.sort_key)
            for t in batch:
                yield StructureRecord(t, not _is_extendable_fast(g, t))
                emitted += 1
                if max_count is not None and emitted >= max_count:
                    return


# =============================================================================
# Aligned completions and containers
# =============================================================================


def is_t_aligned(g: Graph, t: TreedepthStructure, fill_edges: Iterable[Edge]) -> bool:
    """
    Every fill edge avoids depth-d vertices of t and joins comparable vertices when both
    ends are in the forest. Raises DomainError if g + fill is not chordal.
    """
    _check_width(g, t)
    fill = list(fill_edges)
    if not is_chordal(g.add_edges(fill)):
        raise DomainError("completion is not chordal")
    for u, v in fill:
        if t.depths[u] == t.d or t.depths[v] == t.d:
            return False
        if u in t and v in t and not t.is_comparable(u, v):
            return False
    return True


def container_defect(s: VertexSet, cand: VertexSet, t: TreedepthStructure) -> Optional[int]:
    """|cand ∩ T| − |s ∩ T|, or None when s is not inside cand."""
    if not s.issubset(cand):
        return None
    return popcount(cand.bits & t.mask) - popcount(s.bits & t.mask)


def best_container(
    s: VertexSet, candidates: Iterable[VertexSet], t: TreedepthStructure
) -> Optional[Container]:
    """Candidate of least defect holding s; ties go to the first candidate."""
    best: Optional[Container] = None
    for cand in candidates:
        found = container_defect(s, cand, t)
        if found is not None and (best is None or found < best.defect):
            best = Container(cand, found)
    return best


def check_maximality_neighbor_property(g: Graph, t: TreedepthStructure, omega: Pmc) -> bool:
    """Each vertex of Ω outside the forest has a neighbor in the forest minus Ω."""
    _check_width(g, t)
    om = g.check(omega.vertices).bits
    outside_omega = t.mask & ~om
    return all(g.adj[v] & outside_omega for v in iter_bits(om & ~t.mask))


# =============================================================================
# Minimal triangulations
# =============================================================================


def _parallel(g: Graph, s: int, t: int) -> bool:
    rest = t & ~s
    if not rest:
        return True
    return any(rest & ~c == 0 for c in g.component_masks(g.full_mask & ~s))


def minimal_triangulations(g: Graph) -> list[frozenset[Edge]]:
    """
    Fill edge sets of all minimal triangulations, one per maximal family of pairwise
    parallel minimal separators, each separator turned into a clique.
    """
    if g.n > TRIANGULATION_CAP:
        raise CapabilityError("minimal_triangulations", TRIANGULATION_CAP, g.n)
    seps = enumerate_minimal_separator_masks(g)
    if not seps:
        return [frozenset()]

    parallel = nx.Graph()
    parallel.add_nodes_from(range(len(seps)))
    for i, j in combinations(range(len(seps)), 2):
        if _parallel(g, seps[i], seps[j]) and _parallel(g, seps[j], seps[i]):
            parallel.add_edge(i, j)

    fills = set()
    for family in nx.find_cliques(parallel):
        fill = set()
        for i in family:
            verts = list(iter_bits(seps[i]))
            fill.update((u, v) for u, v in combinations(verts, 2) if not g.has_edge(u, v))
        fills.add(frozenset(fill))
    return sorted(fills, key=sorted)


def aligned_triangulations(g: Graph, t: TreedepthStructure) -> list[frozenset[Edge]]:
    return [f for f in minimal_triangulations(g) if is_t_aligned(g, t, f)]


def t_avoiding_pmcs(g: Graph, t: TreedepthStructure) -> list[Pmc]:
    """Maximal cliques free of depth-d vertices in some aligned minimal triangulation."""
    deepest = t.level_mask(t.d)
    found = set()
    for fill in aligned_triangulations(g, t):
        for clique in chordal_maximal_cliques(g.add_edges(fill)):
            if not clique.bits & deepest:
                found.add(clique)
    return [Pmc(c) for c in sorted(found, key=VertexSet.sort_key)]


# =============================================================================
# Parameters
# =============================================================================


def treedepth(g: Graph) -> int:
    """Exact treedepth, memoized over vertex subsets (n ≤ 14)."""
    if g.n > TREEDEPTH_CAP:
        raise CapabilityError("treedepth", TREEDEPTH_CAP, g.n)

    @lru_cache(maxsize=None)
    def td(mask: int) -> int:
        if not mask:
            return 0
        comps = g.component_masks(mask)
        if len(comps) > 1:
            return max(td(c) for c in comps)
        if mask & (mask - 1) == 0:
            return 1
        best = popcount(mask)
        for v in iter_bits(mask):
            best = min(best, td(mask & ~(1 << v)))
            if best == 1:
                break
        return 1 + best

    return td(g.full_mask)


def treewidth(g: Graph) -> int:
    """Exact treewidth through the block DP over all PMCs (n ≤ 64); −1 for the null graph."""
    if g.n > TREEWIDTH_CAP:
        raise CapabilityError("treewidth", TREEWIDTH_CAP, g.n)
    from solvers.block_dp import treewidth_via_blocks

    return treewidth_via_blocks(g)


def degeneracy(g: Graph) -> int:
    """Largest minimum degree met while repeatedly deleting a minimum-degree vertex."""
    alive = g.full_mask
    best = 0
    while alive:
        v = min(iter_bits(alive), key=lambda u: (popcount(g.adj[u] & alive), u))
        best = max(best, popcount(g.adj[v] & alive))
        alive &= ~(1 << v)
    return best
