"""
Modules, quotients, anticomponents, cographs and cliques.
"""

from dataclasses import dataclass
from fractions import Fraction

from core.errors import CapabilityError, ContractViolation, DomainError
from core.graph import Graph, VertexSet, iter_bits, lowest_bit, popcount

CLIQUE_NUMBER_CAP = 64


@dataclass(frozen=True)
class ModulePartition:
    """Disjoint modules covering every vertex of a graph."""

    blocks: tuple[VertexSet, ...]

    def __post_init__(self):
        if not self.blocks:
            return
        n = self.blocks[0].n
        seen = 0
        for block in self.blocks:
            if block.n != n:
                raise ContractViolation("module blocks of different widths")
            if not block:
                raise ContractViolation("empty module block")
            if seen & block.bits:
                raise ContractViolation("module blocks overlap")
            seen |= block.bits
        if seen != (1 << n) - 1:
            raise ContractViolation("module blocks do not cover the vertex set")

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def block_of(self, v: int) -> int:
        for i, block in enumerate(self.blocks):
            if v in block:
                return i
        raise ContractViolation(f"vertex {v} not covered")


# =============================================================================
# Modules
# =============================================================================


def is_module_mask(g: Graph, m: int) -> bool:
    for v in iter_bits(g.nbhd_mask(m)):
        if g.adj[v] & m != m:
            return False
    return True


def module_closure(g: Graph, seed: int) -> int:
    """Smallest module containing seed."""
    m = seed
    changed = True
    while changed:
        changed = False
        for v in iter_bits(g.nbhd_mask(m)):
            if g.adj[v] & m != m:
                m |= 1 << v
                changed = True
    return m


def is_module(g: Graph, m: VertexSet) -> bool:
    """Every vertex outside m is complete or anticomplete to m."""
    g.check(m)
    if not m:
        raise DomainError("a module must be nonempty")
    return is_module_mask(g, m.bits)


def maximal_modules(g: Graph) -> ModulePartition:
    """
    Partition into maximal strong proper modules.

    Disconnected graphs split into components, graphs with a disconnected complement
    into anticomponents; otherwise the maximal proper modules are disjoint and each one
    is the union of the proper closures of pairs through one of its vertices.
    """
    if g.n < 2:
        raise DomainError(f"maximal modules need at least 2 vertices, got {g.n}")
    full = g.full_mask

    blocks = g.component_masks(full)
    if len(blocks) == 1:
        blocks = anticomponent_masks(g, full)
    if len(blocks) == 1:
        blocks = []
        assigned = 0
        for v in range(g.n):
            if assigned >> v & 1:
                continue
            mv = 1 << v
            for u in range(g.n):
                if u == v or mv >> u & 1:
                    continue
                closure = module_closure(g, (1 << u) | (1 << v))
                if closure != full:
                    mv |= closure
            blocks.append(mv)
            assigned |= mv

    return ModulePartition(tuple(VertexSet(b, g.n) for b in sorted(blocks, key=lowest_bit)))


def quotient(g: Graph, parts: ModulePartition) -> Graph:
    """One vertex per block; weight is the block weight, edges between complete blocks."""
    blocks = [g.check(block).bits for block in parts]
    for block in blocks:
        if not is_module_mask(g, block):
            raise ContractViolation(f"block {VertexSet(block, g.n).to_list()} is not a module")
    adj = [0] * len(blocks)
    for i, a in enumerate(blocks):
        representative = lowest_bit(a)
        for j, b in enumerate(blocks):
            if i != j and g.adj[representative] & b:
                adj[i] |= 1 << j
    weights = tuple(sum((g.weights[v] for v in iter_bits(b)), Fraction(0)) for b in blocks)
    return Graph(len(blocks), tuple(adj), weights)


# =============================================================================
# Complement and anticomponents
# =============================================================================


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.adj)), g.weights)


def anticomponent_masks(g: Graph, within: int) -> list[int]:
    """Components of the complement of g[within], ordered by minimum vertex."""
    comps = []
    rest = within
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= within & ~g.adj[v]
            frontier = reach & rest & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


def anticomponents(g: Graph, within: VertexSet) -> list[VertexSet]:
    g.check(within)
    return [VertexSet(c, g.n) for c in anticomponent_masks(g, within.bits)]


# =============================================================================
# Cographs
# =============================================================================


def is_cograph_mask(g: Graph, mask: int) -> bool:
    # An induced subgraph on 4+ vertices that is connected and co-connected holds a P4.
    stack = [mask]
    while stack:
        m = stack.pop()
        if popcount(m) < 4:
            continue
        parts = g.component_masks(m)
        if len(parts) == 1:
            parts = anticomponent_masks(g, m)
        if len(parts) == 1:
            return False
        stack.extend(parts)
    return True


def is_cograph(g: Graph, within: VertexSet) -> bool:
    """P4-freeness of g[within]."""
    g.check(within)
    return is_cograph_mask(g, within.bits)


# =============================================================================
# Cliques
# =============================================================================


def max_clique_mask(g: Graph, within: int) -> int:
    """Branch and bound over candidate bitsets; first maximum found wins."""
    size = popcount(within)
    if size > CLIQUE_NUMBER_CAP:
        raise CapabilityError("clique_number", CLIQUE_NUMBER_CAP, size)
    best = [0, 0]  # mask, size

    def expand(clique: int, clique_size: int, cand: int) -> None:
        if not cand:
            if clique_size > best[1]:
                best[0], best[1] = clique, clique_size
            return
        while cand:
            if clique_size + popcount(cand) <= best[1]:
                return
            v = lowest_bit(cand)
            expand(clique | (1 << v), clique_size + 1, cand & g.adj[v])
            cand &= ~(1 << v)

    expand(0, 0, within)
    return best[0]


def max_clique(g: Graph, within: VertexSet) -> VertexSet:
    g.check(within)
    return VertexSet(max_clique_mask(g, within.bits), g.n)


def clique_number(g: Graph) -> int:
    """ω(g); exact for n ≤ 64."""
    if g.n > CLIQUE_NUMBER_CAP:
        raise CapabilityError("clique_number", CLIQUE_NUMBER_CAP, g.n)
    return popcount(max_clique_mask(g, g.full_mask))
