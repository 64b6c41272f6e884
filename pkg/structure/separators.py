"""
Separators and Potential Maximal Cliques
Minimal separators, full components, the PMC predicate and enumeration, and PMC covers.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb
from typing import Any, Optional

from core.errors import ContractViolation, DomainError, InvariantViolation
from core.graph import Graph, VertexSet, iter_bits, lowest_bit, popcount
from utils.logging import get_logger

logger = get_logger(__name__)

DUAL_VC_FAMILY_CAP = 24


def mask_key(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


@dataclass(frozen=True)
class MinimalSeparator:
    """A minimal separator with its full components in canonical order."""

    vertices: VertexSet
    full_components: tuple[VertexSet, ...]

    def __post_init__(self):
        if len(self.full_components) < 2:
            raise ContractViolation("a minimal separator has at least two full components")

    @classmethod
    def from_mask(cls, g: Graph, s: int) -> "MinimalSeparator":
        full = full_component_masks(g, s)
        if len(full) < 2:
            raise DomainError(f"{VertexSet(s, g.n).to_list()} is not a minimal separator")
        return cls(VertexSet(s, g.n), tuple(VertexSet(c, g.n) for c in full))


@dataclass(frozen=True)
class Pmc:
    """Potential maximal clique."""

    vertices: VertexSet


class CoverKind(str, Enum):
    CLOSED_NEIGHBORHOOD = "closed_neighborhood"
    COMPONENT_FAMILY = "component_family"


@dataclass(frozen=True)
class PmcCover:
    """Witness that a PMC is N[v] or a union of few component neighborhoods."""

    kind: CoverKind
    vertex: Optional[int] = None
    components: tuple[VertexSet, ...] = ()

    @property
    def size(self) -> int:
        return 1 if self.kind == CoverKind.CLOSED_NEIGHBORHOOD else len(self.components)

    def covered_set(self, g: Graph) -> VertexSet:
        if self.kind == CoverKind.CLOSED_NEIGHBORHOOD:
            return VertexSet(g.closed_nbhd_mask(1 << self.vertex), g.n)
        covered = 0
        for d in self.components:
            covered |= g.nbhd_mask(d.bits)
        return VertexSet(covered, g.n)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "vertex": self.vertex,
            "components": [d.to_list() for d in self.components],
        }


# =============================================================================
# Full components and minimal separators
# =============================================================================


def full_component_masks(g: Graph, s: int) -> list[int]:
    return [c for c in g.component_masks(g.full_mask & ~s) if g.nbhd_mask(c) == s]


def full_components(g: Graph, s: VertexSet) -> list[VertexSet]:
    """Components C of g − s with N(C) = s."""
    g.check(s)
    return [VertexSet(c, g.n) for c in full_component_masks(g, s.bits)]


def is_minimal_separator(g: Graph, s: VertexSet) -> bool:
    g.check(s)
    if not s or s.bits == g.full_mask:
        return False
    return len(full_component_masks(g, s.bits)) >= 2


def enumerate_minimal_separator_masks(g: Graph) -> list[int]:
    """
    Closure enumeration: seeds N(C) for components C of g − N[v], then for every
    separator S and x ∈ S the sets N(C) for components C of g − (S ∪ N(x)).
    """
    full = g.full_mask
    found: set[int] = set()
    queue: deque[int] = deque()

    def offer(s: int) -> None:
        if s and s not in found and len(full_component_masks(g, s)) >= 2:
            found.add(s)
            queue.append(s)

    for v in range(g.n):
        for c in g.component_masks(full & ~g.closed_nbhd_mask(1 << v)):
            offer(g.nbhd_mask(c))
    while queue:
        s = queue.popleft()
        for x in iter_bits(s):
            for c in g.component_masks(full & ~(s | g.adj[x])):
                offer(g.nbhd_mask(c))

    return sorted(found, key=mask_key)


def enumerate_minimal_separators(g: Graph) -> list[MinimalSeparator]:
    """All minimal separators in canonical order."""
    return [MinimalSeparator.from_mask(g, s) for s in enumerate_minimal_separator_masks(g)]


# =============================================================================
# Potential maximal cliques
# =============================================================================


def is_pmc_mask(g: Graph, omega: int) -> bool:
    if not omega:
        return False
    nbhds = []
    for c in g.component_masks(g.full_mask & ~omega):
        nc = g.nbhd_mask(c)
        if nc == omega:
            return False
        nbhds.append(nc)
    for u in iter_bits(omega):
        missing = omega & ~g.adj[u] & ~(1 << u)
        if not missing:
            continue
        covered = 0
        for nc in nbhds:
            if nc >> u & 1:
                covered |= nc
        if missing & ~covered:
            return False
    return True


def is_pmc(g: Graph, omega: VertexSet) -> bool:
    """No component of g − Ω is full, and every non-edge of Ω lies in some N(D)."""
    g.check(omega)
    return is_pmc_mask(g, omega.bits)


def _prefix_graph(g: Graph, size: int) -> Graph:
    keep = (1 << size) - 1
    return Graph(size, tuple(g.adj[v] & keep for v in range(size)))


def enumerate_pmc_masks(g: Graph, separators: Optional[list[int]] = None) -> list[int]:
    """
    One-more-vertex enumeration over the prefixes g[0..i].

    Candidates for the prefix with new vertex a: every previous PMC with and without a,
    S ∪ {a} for separators S of either prefix, N[v], and S ∪ (T ∩ C) for separators S, T
    and components C of the prefix minus S. Each candidate goes through is_pmc.
    """
    if g.n == 0:
        return []
    pmcs = {1}
    prev_seps: list[int] = []
    for size in range(2, g.n + 1):
        a_bit = 1 << (size - 1)
        h = _prefix_graph(g, size) if size < g.n else g
        seps = enumerate_minimal_separator_masks(h) if size < g.n or separators is None else separators
        candidates = set()
        for omega in pmcs:
            candidates.add(omega)
            candidates.add(omega | a_bit)
        for v in range(size):
            candidates.add(h.closed_nbhd_mask(1 << v))
        current = set(seps)
        pairs = seps + [t for t in prev_seps if t not in current]
        for s in seps + prev_seps:
            candidates.add(s | a_bit)
        for s in seps:
            for c in h.component_masks(h.full_mask & ~s):
                for t in pairs:
                    candidates.add(s | (t & c))
        pmcs = {c for c in candidates if is_pmc_mask(h, c)}
        prev_seps = seps
    return sorted(pmcs, key=mask_key)


def enumerate_pmcs(g: Graph) -> list[Pmc]:
    """All PMCs in canonical order; asserts the separator/PMC count bounds."""
    seps = enumerate_minimal_separator_masks(g)
    pmcs = enumerate_pmc_masks(g, seps)
    a, b, n = len(seps), len(pmcs), g.n
    if b > n * (a * a + a + 1) or a > n * b:
        raise InvariantViolation(
            "separator_pmc_count_bounds", {"n": n, "separators": a, "pmcs": b}
        )
    logger.debug(f"n={n}: {a} minimal separators, {b} PMCs")
    return [Pmc(VertexSet(p, g.n)) for p in pmcs]


# =============================================================================
# PMC covers
# =============================================================================


def _search_cover(uncovered: int, nbhds: list[int], budget: int) -> Optional[list[int]]:
    if not uncovered:
        return []
    if budget == 0:
        return None
    gains = [popcount(nb & uncovered) for nb in nbhds]
    if budget * max(gains, default=0) < popcount(uncovered):
        return None

    # branch on the uncovered vertex with the fewest covering components
    best_u, best_options = -1, None
    for u in iter_bits(uncovered):
        options = [i for i, nb in enumerate(nbhds) if nb >> u & 1]
        if best_options is None or len(options) < len(best_options):
            best_u, best_options = u, options
    if not best_options:
        return None
    best_options.sort(key=lambda i: (-gains[i], i))
    for i in best_options:
        rest = _search_cover(uncovered & ~nbhds[i], nbhds, budget - 1)
        if rest is not None:
            return [i] + rest
    return None


def pmc_cover(g: Graph, omega: Pmc, cap: int) -> Optional[PmcCover]:
    """
    Smallest cover of Ω: a vertex v with Ω = N[v], else a minimum family of components
    of g − Ω whose neighborhoods union to Ω, at most `cap` of them.
    """
    om = g.check(omega.vertices).bits
    for v in iter_bits(om):
        if g.closed_nbhd_mask(1 << v) == om:
            return PmcCover(CoverKind.CLOSED_NEIGHBORHOOD, vertex=v)
    comps = g.component_masks(g.full_mask & ~om)
    nbhds = [g.nbhd_mask(c) for c in comps]
    for k in range(1, min(cap, len(comps)) + 1):
        chosen = _search_cover(om, nbhds, k)
        if chosen is not None:
            family = tuple(VertexSet(comps[i], g.n) for i in sorted(chosen))
            return PmcCover(CoverKind.COMPONENT_FAMILY, components=family)
    return None


def dual_vc_dimension(sets: list[int]) -> int:
    """
    Largest k such that some k sets are shattered by elements: every subfamily of them is
    exactly the family of sets containing some element.
    """
    if len(sets) > DUAL_VC_FAMILY_CAP:
        raise DomainError(f"dual VC-dimension limited to {DUAL_VC_FAMILY_CAP} sets")
    universe = 0
    for s in sets:
        universe |= s
    best = 0
    for k in range(1, len(sets) + 1):
        if 1 << k > popcount(universe) + 1:
            break
        shattered = False
        for family in combinations(sets, k):
            patterns = {0}
            for x in iter_bits(universe):
                patterns.add(sum(1 << i for i, s in enumerate(family) if s >> x & 1))
            if len(patterns) == 1 << k:
                shattered = True
                break
        if not shattered:
            break
        best = k
    return best


def dsw_ceiling(vc: int, nu: int) -> int:
    """Transversal ceiling 11·vc²·(vc+nu+3)·C(vc+nu, nu)² for dual VC-dimension vc."""
    return 11 * vc * vc * (vc + nu + 3) * comb(vc + nu, nu) ** 2


def cover_report(g: Graph, cap: int, pmcs: Optional[list[Pmc]] = None) -> dict[str, Any]:
    """Observed cover sizes over all PMCs; failures are reported, not raised."""
    pmcs = pmcs if pmcs is not None else enumerate_pmcs(g)
    sizes: dict[str, int] = {}
    failures = []
    max_size = 0
    max_vc = 0
    ceiling_breaches = []
    for p in pmcs:
        cover = pmc_cover(g, p, cap)
        if cover is None:
            failures.append(p.vertices.to_list())
            continue
        key = cover.kind.value
        sizes[key] = sizes.get(key, 0) + 1
        max_size = max(max_size, cover.size)
        if cover.kind == CoverKind.COMPONENT_FAMILY:
            comps = g.component_masks(g.full_mask & ~p.vertices.bits)
            # elements are components, sets are the components seen by each vertex of Ω
            dual = [
                s
                for s in (
                    sum(1 << i for i, c in enumerate(comps) if g.adj[u] & c)
                    for u in iter_bits(p.vertices.bits)
                )
                if s
            ]
            if len(dual) <= DUAL_VC_FAMILY_CAP:
                vc = dual_vc_dimension(dual)
                max_vc = max(max_vc, vc)
                if vc and cover.size > dsw_ceiling(vc, cover.size):
                    ceiling_breaches.append(p.vertices.to_list())
    return {
        "pmc_count": len(pmcs),
        "cap": cap,
        "max_cover_size": max_size,
        "max_dual_vc_dimension": max_vc,
        "kinds": sizes,
        "failures": failures,
        "ceiling_breaches": ceiling_breaches,
    }


def separator_sides(g: Graph, s: int) -> tuple[int, int]:
    """The two smallest-index full components of a separator mask."""
    full = full_component_masks(g, s)
    if len(full) < 2:
        raise DomainError(f"{VertexSet(s, g.n).to_list()} is not a minimal separator")
    full.sort(key=lowest_bit)
    return full[0], full[1]
