"""
Structural Lemmas
Constructive versions of the P7-free separator lemmas: two-order minima, cograph
dominators, X-sets, cograph neighborhood covers and (K, D, L) triple checks.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from math import factorial
from typing import Any, Callable, Optional

from core.errors import ContractViolation, DomainError, InducedPathFound, InvariantViolation
from core.graph import Graph, VertexSet, iter_bits, lowest_bit, mask_of, popcount
from core.modules import (
    ModulePartition,
    anticomponent_masks,
    is_cograph_mask,
    max_clique_mask,
    maximal_modules,
    quotient,
)
from structure.recognition import find_induced_path
from structure.separators import MinimalSeparator
from structure.treedepth import TreedepthStructure
from utils.logging import get_logger

logger = get_logger(__name__)


class Side(str, Enum):
    A = "A"
    B = "B"


def _sides(s: MinimalSeparator, side: Side = Side.A) -> tuple[int, int]:
    a, b = s.full_components[0].bits, s.full_components[1].bits
    return (a, b) if side == Side.A else (b, a)


def _p7_or_bug(g: Graph, invariant: str, details: dict[str, Any]) -> None:
    """The lemma can only fail on graphs with an induced P7; report which case this is."""
    witness = find_induced_path(g, 7)
    if witness is not None:
        raise InducedPathFound(list(witness.vertices))
    raise InvariantViolation(invariant, details)


# =============================================================================
# Two orders
# =============================================================================


@dataclass(frozen=True)
class TwoOrders:
    """
    Two reflexive, transitive relations on one universe as boolean matrices indexed by
    universe position.
    """

    universe: tuple[int, ...]
    leq1: tuple[tuple[bool, ...], ...]
    leq2: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        k = len(self.universe)
        for name, rel in (("leq1", self.leq1), ("leq2", self.leq2)):
            if len(rel) != k or any(len(row) != k for row in rel):
                raise ContractViolation(f"{name} must be a {k}x{k} matrix")
            for i in range(k):
                if not rel[i][i]:
                    raise DomainError(f"{name} is not reflexive at {self.universe[i]}")
                for j in range(k):
                    if not rel[i][j]:
                        continue
                    for m in range(k):
                        if rel[j][m] and not rel[i][m]:
                            raise DomainError(
                                f"{name} is not transitive on "
                                f"{self.universe[i]}, {self.universe[j]}, {self.universe[m]}"
                            )

    @classmethod
    def from_relations(
        cls,
        universe: list[int],
        leq1: Callable[[int, int], bool],
        leq2: Callable[[int, int], bool],
    ) -> "TwoOrders":
        return cls(
            tuple(universe),
            tuple(tuple(leq1(x, y) for y in universe) for x in universe),
            tuple(tuple(leq2(x, y) for y in universe) for x in universe),
        )

    def incomparable_pair(self) -> Optional[tuple[int, int]]:
        k = len(self.universe)
        for i in range(k):
            for j in range(i + 1, k):
                if not (self.leq1[i][j] or self.leq1[j][i] or self.leq2[i][j] or self.leq2[j][i]):
                    return self.universe[i], self.universe[j]
        return None


def two_orders_min(t: TwoOrders) -> int:
    """Least-index element v with v ≤₁ x or v ≤₂ x for every x."""
    if not t.universe:
        raise DomainError("two-order minimum of an empty universe")
    pair = t.incomparable_pair()
    if pair is not None:
        raise DomainError(f"elements {pair[0]} and {pair[1]} are incomparable in both orders")
    k = len(t.universe)
    for i in range(k):
        if all(t.leq1[i][j] or t.leq2[i][j] for j in range(k)):
            return t.universe[i]
    raise InvariantViolation("two_orders_minimum", {"universe": list(t.universe)})


# =============================================================================
# Cograph dominator
# =============================================================================


def find_cograph_dominator(g: Graph, s: MinimalSeparator) -> VertexSet:
    """
    Connected cograph Z inside the first full component A such that every vertex of
    S \\ N(Z) is complete to the second full component B.

    Z is grown by BFS from min(A) until it dominates the vertices of S not complete to
    B, then pruned to an inclusion-minimal connected dominating set.
    """
    a, b = _sides(s)
    sep = s.vertices.bits
    complete_to_b = mask_of(v for v in iter_bits(sep) if g.adj[v] & b == b)
    target = sep & ~complete_to_b
    if not target:
        return VertexSet(a & -a, g.n)

    order = []
    z = 0
    frontier = deque([lowest_bit(a)])
    seen = a & -a
    while frontier and target & ~g.union_adj(z):
        v = frontier.popleft()
        order.append(v)
        z |= 1 << v
        for u in iter_bits(g.adj[v] & a & ~seen):
            seen |= 1 << u
            frontier.append(u)

    changed = True
    while changed:
        changed = False
        for v in reversed(order):
            if not z >> v & 1:
                continue
            rest = z & ~(1 << v)
            if rest and g.is_connected_mask(rest) and not target & ~g.union_adj(rest):
                z = rest
                changed = True

    if not is_cograph_mask(g, z):
        _p7_or_bug(g, "cograph_dominator", {"z": VertexSet(z, g.n).to_list()})
    logger.debug(f"cograph dominator of size {popcount(z)} for |S|={popcount(sep)}")
    return VertexSet(z, g.n)


# =============================================================================
# X-sets
# =============================================================================


def find_x_set(g: Graph, s: MinimalSeparator, side: Side = Side.A) -> VertexSet:
    """
    X inside the chosen full component with |X| ≤ ω(g) such that every vertex of
    S \\ N(X) starts an induced path into three vertices of that component.
    """
    a, _ = _sides(s, side)
    if popcount(a) < 2:
        return VertexSet(a, g.n)
    anti = anticomponent_masks(g, a)
    if len(anti) > 1:
        return VertexSet(mask_of(lowest_bit(c) for c in anti), g.n)

    sub, old = g.induced_subgraph(VertexSet(a, g.n))
    blocks = [m.bits for m in maximal_modules(sub)]
    for i, mi in enumerate(blocks):
        for mj in blocks[i + 1:]:
            if sub.adj[lowest_bit(mi)] & mj:
                return VertexSet((1 << old[lowest_bit(mi)]) | (1 << old[lowest_bit(mj)]), g.n)
    raise InvariantViolation("adjacent_maximal_modules", {"component": VertexSet(a, g.n).to_list()})


def _starts_path_into(g: Graph, v: int, a: int, length: int) -> bool:
    # induced path v - a1 - ... - a_length with every a_i in a
    def grow(path: list[int], blocked: int) -> bool:
        if len(path) == length + 1:
            return True
        last = path[-1]
        for w in iter_bits(g.adj[last] & a & ~blocked):
            if grow(path + [w], blocked | g.adj[last] | (1 << last) | (1 << w)):
                return True
        return False

    return grow([v], 1 << v)


def x_set_postcondition(g: Graph, s: MinimalSeparator, side: Side, x: VertexSet) -> list[int]:
    """Vertices of S \\ N(X) with no induced path v−A−A−A; empty when X is valid."""
    a, _ = _sides(s, side)
    uncovered = s.vertices.bits & ~g.union_adj(g.check(x).bits)
    return [v for v in iter_bits(uncovered) if not _starts_path_into(g, v, a, 3)]


# =============================================================================
# Cograph neighborhood cover
# =============================================================================


def cover_bound(omega: int) -> int:
    return factorial(omega + 1)


class _CographCover:
    def __init__(self, g: Graph, i_set: int):
        self.g = g
        self.i_set = i_set

    def cover(self, z: int, j: int) -> tuple[int, int]:
        g = self.g
        if not j:
            return 0, 0
        if popcount(z) == 1:
            return z, 0

        anti = anticomponent_masks(g, z)
        reps = [lowest_bit(c) for c in anti]
        q_z = mask_of(reps)
        q_i = 0
        j_rest = j & ~g.union_adj(q_z)
        earlier = 0
        for zi, rep in zip(anti, reps):
            j_i = j_rest & g.union_adj(zi) & ~g.union_adj(earlier)
            earlier |= zi
            comps = g.component_masks(zi & ~(1 << rep))
            if not j_i or not comps:
                continue
            if len(comps) == 1:
                sub_z, sub_i = self.cover(comps[0], j_i)
            else:
                w = self._two_order_pick(j_i, comps)
                u = lowest_bit(g.adj[w] & self.i_set)
                jw = next(c for c in comps if g.adj[w] & c)
                q_i |= 1 << u
                sub_z, sub_i = self.cover(jw, j_i & ~g.adj[u])
            q_z |= sub_z
            q_i |= sub_i
        return q_z, q_i

    def _two_order_pick(self, j_i: int, comps: list[int]) -> int:
        g = self.g
        touch = {v: mask_of(k for k, c in enumerate(comps) if g.adj[v] & c) for v in iter_bits(j_i)}
        orders = TwoOrders.from_relations(
            list(iter_bits(j_i)),
            lambda x, y: g.adj[x] & self.i_set & ~g.adj[y] == 0,
            lambda x, y: touch[x] & ~touch[y] == 0,
        )
        if orders.incomparable_pair() is not None:
            _p7_or_bug(g, "two_orders_comparability", {"j": VertexSet(j_i, g.n).to_list()})
        return two_orders_min(orders)


def cograph_neighborhood_cover(
    g: Graph, z: VertexSet, i_set: VertexSet, j_set: VertexSet
) -> tuple[VertexSet, VertexSet]:
    """
    Q_Z ⊆ Z and Q_I ⊆ I with J ⊆ N(Q_Z) ∪ N(Q_I) and |Q_Z|, |Q_I| ≤ (ω(Z)+1)!.

    Recurses over the anticomponents of Z, one representative each, and splits the
    remaining part of J by the first anticomponent it sees.
    """
    zm, im, jm = g.check(z).bits, g.check(i_set).bits, g.check(j_set).bits
    if not zm or not g.is_connected_mask(zm) or not is_cograph_mask(g, zm):
        raise DomainError("Z must induce a connected cograph")
    if not g.is_independent_mask(im):
        raise DomainError("I must be independent")
    if im & g.closed_nbhd_mask(zm):
        raise DomainError("I must be disjoint from N[Z]")
    if not g.is_independent_mask(jm):
        raise DomainError("J must be independent")
    if jm & ~(g.nbhd_mask(zm) & g.nbhd_mask(im)):
        raise DomainError("J must lie in N(Z) ∩ N(I)")

    q_z, q_i = _CographCover(g, im).cover(zm, jm)

    bound = cover_bound(popcount(max_clique_mask(g, zm)))
    if jm & ~(g.union_adj(q_z) | g.union_adj(q_i)):
        raise InvariantViolation("cograph_cover_covers", {"uncovered": VertexSet(jm, g.n).to_list()})
    if popcount(q_z) > bound or popcount(q_i) > bound:
        raise InvariantViolation(
            "cograph_cover_bound", {"q_z": popcount(q_z), "q_i": popcount(q_i), "bound": bound}
        )
    return VertexSet(q_z, g.n), VertexSet(q_i, g.n)


# =============================================================================
# (K, D, L) triples
# =============================================================================


@dataclass(frozen=True)
class KdlTriple:
    """K, the chosen components D of G − K, and L(D) for each of them (same order)."""

    k: VertexSet
    d_list: tuple[VertexSet, ...]
    l_map: tuple[VertexSet, ...]

    def __post_init__(self):
        if len(self.d_list) != len(self.l_map):
            raise ContractViolation("one L(D) is needed per component D")


@dataclass
class KdlReport:
    separator_inside_budget: bool
    components_of_rest: bool
    module_splits: bool
    components_placed: bool
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.separator_inside_budget
            and self.components_of_rest
            and self.module_splits
            and self.components_placed
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "i": self.separator_inside_budget,
            "ii": self.components_of_rest,
            "iii": self.module_splits,
            "iv": self.components_placed,
            "problems": list(self.problems),
        }


def _is_module_within(g: Graph, m: int, within: int) -> bool:
    for v in iter_bits(within & ~m):
        seen = g.adj[v] & m
        if seen and seen != m:
            return False
    return True


def check_kdl_triple(
    g: Graph, triple: KdlTriple, s: MinimalSeparator, t: TreedepthStructure, td_budget: int
) -> KdlReport:
    """Check each guarantee of a (K, D, L) triple for separator S; never raises on failure."""
    problems = []
    k = triple.k.bits
    sep = s.vertices.bits

    bullet_i = sep & t.mask & ~k == 0 and popcount(k & t.mask) <= td_budget
    if not bullet_i:
        problems.append(f"(i) |K ∩ T| = {popcount(k & t.mask)}, budget {td_budget}")

    rest_components = g.component_masks(g.full_mask & ~k)
    bullet_ii = all(d.bits in rest_components for d in triple.d_list)
    if not bullet_ii:
        problems.append("(ii) some D is not a component of G − K")

    bullet_iii = True
    for d, l in zip(triple.d_list, triple.l_map):
        dm, lm = d.bits, l.bits
        if not lm or lm == dm or lm & ~dm:
            bullet_iii = False
            problems.append(f"(iii) L(D) is not a nonempty proper subset of D = {d.to_list()}")
            continue
        parts = g.component_masks(lm) + g.component_masks(dm & ~lm)
        if not all(_is_module_within(g, p, dm) for p in parts):
            bullet_iii = False
            problems.append(f"(iii) a piece of D = {d.to_list()} is not a module of G[D]")

    separated = g.component_masks(g.full_mask & ~sep)
    chosen = {d.bits for d in triple.d_list}
    bullet_iv = True
    for comp in rest_components:
        if comp in chosen:
            continue
        if not any(comp & ~c == 0 for c in separated):
            bullet_iv = False
            problems.append(f"(iv) component {VertexSet(comp, g.n).to_list()} crosses S")

    return KdlReport(bullet_i, bullet_ii, bullet_iii, bullet_iv, problems)


def kdl_partition(g: Graph, d: VertexSet, l: VertexSet) -> tuple[Graph, ModulePartition, VertexSet]:
    """
    Quotient of G[D] by the components of G[L] and of G[D \\ L], with the L-blocks as
    side 1. The quotient is bipartite because each side's blocks are pairwise anticomplete.
    """
    sub, old = g.induced_subgraph(g.check(d))
    index = {v: i for i, v in enumerate(old)}
    l_local = mask_of(index[v] for v in g.check(l) if v in index)
    if not l_local or l_local == sub.full_mask:
        raise DomainError("L must be a nonempty proper subset of D")
    l_blocks = sub.component_masks(l_local)
    r_blocks = sub.component_masks(sub.full_mask & ~l_local)
    partition = ModulePartition(tuple(VertexSet(m, sub.n) for m in l_blocks + r_blocks))
    q = quotient(sub, partition)
    return q, partition, VertexSet((1 << len(l_blocks)) - 1, q.n)
