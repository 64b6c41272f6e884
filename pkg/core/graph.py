"""
Graph Core
Immutable vertex-weighted graphs whose adjacency rows are Python ints used as bitsets.

Vertices are dense 0-based indices. Every set-valued argument of the public API is a
VertexSet; the int-level helpers (``*_mask``) exist for the enumeration hot loops.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Union

from core.errors import CapabilityError, ContractViolation, DomainError

MAX_VERTICES = 512

WeightLike = Union[int, str, Fraction]


# =============================================================================
# Bit helpers
# =============================================================================


def popcount(mask: int) -> int:
    """Number of set bits."""
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit; mask must be nonzero."""
    return (mask & -mask).bit_length() - 1


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


# =============================================================================
# VertexSet
# =============================================================================


@dataclass(frozen=True)
class VertexSet:
    """Fixed-width set of vertices of one graph."""

    bits: int
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ContractViolation(f"vertex set width {self.n} outside 0..{MAX_VERTICES}")
        if self.bits < 0 or self.bits >> self.n:
            raise ContractViolation(f"bits {self.bits:#x} do not fit width {self.n}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        vertices = list(vertices)
        for v in vertices:
            if not 0 <= v < n:
                raise ContractViolation(f"vertex {v} outside 0..{n - 1}")
        return cls(mask_of(vertices), n)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls((1 << n) - 1, n)

    def _check(self, other: object) -> "VertexSet":
        if not isinstance(other, VertexSet):
            raise ContractViolation(f"expected VertexSet, got {type(other).__name__}")
        if other.n != self.n:
            raise ContractViolation(f"width mismatch: {self.n} vs {other.n}")
        return other

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & self._check(other).bits, self.n)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits | self._check(other).bits, self.n)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & ~self._check(other).bits, self.n)

    def __xor__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits ^ self._check(other).bits, self.n)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.bits >> v & 1)

    def __repr__(self) -> str:
        return f"VertexSet({self.to_list()}, n={self.n})"

    def issubset(self, other: "VertexSet") -> bool:
        return self.bits & ~self._check(other).bits == 0

    def issuperset(self, other: "VertexSet") -> bool:
        return self._check(other).bits & ~self.bits == 0

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.bits & self._check(other).bits == 0

    def add(self, v: int) -> "VertexSet":
        if not 0 <= v < self.n:
            raise ContractViolation(f"vertex {v} outside 0..{self.n - 1}")
        return VertexSet(self.bits | (1 << v), self.n)

    def discard(self, v: int) -> "VertexSet":
        return VertexSet(self.bits & ~(1 << v), self.n)

    def min(self) -> int:
        if not self.bits:
            raise ContractViolation("min() of an empty vertex set")
        return lowest_bit(self.bits)

    def to_list(self) -> list[int]:
        return list(iter_bits(self.bits))

    def sort_key(self) -> tuple[int, ...]:
        """Canonical order of sets: lexicographic on the sorted vertex list."""
        return tuple(iter_bits(self.bits))


def canonical_sets(sets: Iterable[VertexSet]) -> list[VertexSet]:
    """Deduplicate and sort vertex sets canonically."""
    return sorted(set(sets), key=VertexSet.sort_key)


# =============================================================================
# Graph
# =============================================================================


@dataclass(frozen=True)
class Graph:
    """
    Immutable simple graph with positive rational vertex weights.

    ``adj[v]`` is the bit row of v's neighbors. Weights default to 1.
    """

    n: int
    adj: tuple[int, ...]
    weights: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ContractViolation(f"negative vertex count {self.n}")
        if self.n > MAX_VERTICES:
            raise CapabilityError("max_vertices", MAX_VERTICES, self.n)
        if len(self.adj) != self.n:
            raise ContractViolation(f"{len(self.adj)} adjacency rows for {self.n} vertices")

        for v, row in enumerate(self.adj):
            if row < 0 or row >> self.n:
                raise ContractViolation(f"adjacency row of {v} exceeds width {self.n}")
            if row >> v & 1:
                raise DomainError(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise DomainError(f"asymmetric adjacency between {v} and {u}")

        if not self.weights:
            object.__setattr__(self, "weights", (Fraction(1),) * self.n)
        elif len(self.weights) != self.n:
            raise ContractViolation(f"{len(self.weights)} weights for {self.n} vertices")
        else:
            weights = tuple(Fraction(w) for w in self.weights)
            for v, w in enumerate(weights):
                if w <= 0:
                    raise DomainError(f"weight of vertex {v} must be positive, got {w}")
            object.__setattr__(self, "weights", weights)

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        weights: Optional[Iterable[WeightLike]] = None,
    ) -> "Graph":
        """Build a graph from an edge list; duplicate edges are merged."""
        if n > MAX_VERTICES:
            raise CapabilityError("max_vertices", MAX_VERTICES, n)
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        w = tuple(Fraction(x) for x in weights) if weights is not None else ()
        return cls(n, tuple(adj), w)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    def add_edges(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """New graph with the given edges added."""
        adj = list(self.adj)
        for u, v in pairs:
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj), self.weights)

    def with_weights(self, weights: Iterable[WeightLike]) -> "Graph":
        return Graph(self.n, self.adj, tuple(Fraction(w) for w in weights))

    def induced_subgraph(self, s: VertexSet) -> tuple["Graph", list[int]]:
        """Relabelled copy of g[s]; returns (graph, new-to-old vertex map)."""
        self.check(s)
        old = s.to_list()
        index = {v: i for i, v in enumerate(old)}
        adj = []
        for v in old:
            row = 0
            for u in iter_bits(self.adj[v] & s.bits):
                row |= 1 << index[u]
            adj.append(row)
        return Graph(len(old), tuple(adj), tuple(self.weights[v] for v in old)), old

    # -------------------------------------------------------------------------
    # Accessors
    # -------------------------------------------------------------------------

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def vertices(self) -> VertexSet:
        return VertexSet(self.full_mask, self.n)

    @cached_property
    def num_edges(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    @cached_property
    def is_unit_weighted(self) -> bool:
        return all(w == 1 for w in self.weights)

    def vset(self, vertices: Iterable[int]) -> VertexSet:
        return VertexSet.of(self.n, vertices)

    def from_mask(self, mask: int) -> VertexSet:
        return VertexSet(mask, self.n)

    def check(self, s: VertexSet) -> VertexSet:
        """Raise ContractViolation unless s is a vertex set of this graph."""
        if not isinstance(s, VertexSet):
            raise ContractViolation(f"expected VertexSet, got {type(s).__name__}")
        if s.n != self.n:
            raise ContractViolation(f"width mismatch: set has {s.n}, graph has {self.n}")
        return s

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.adj[v], self.n)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """All edges (u, v) with u < v in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def weight_of(self, s: Union[VertexSet, int]) -> Fraction:
        mask = s.bits if isinstance(s, VertexSet) else s
        return sum((self.weights[v] for v in iter_bits(mask)), Fraction(0))

    # -------------------------------------------------------------------------
    # Mask-level primitives
    # -------------------------------------------------------------------------

    def union_adj(self, mask: int) -> int:
        nb = 0
        for v in iter_bits(mask):
            nb |= self.adj[v]
        return nb

    def nbhd_mask(self, mask: int) -> int:
        """Open neighborhood N(mask)."""
        return self.union_adj(mask) & ~mask

    def closed_nbhd_mask(self, mask: int) -> int:
        return self.union_adj(mask) | mask

    def component_of(self, v: int, within: int) -> int:
        comp = frontier = 1 << v
        while frontier:
            frontier = self.union_adj(frontier) & within & ~comp
            comp |= frontier
        return comp

    def component_masks(self, within: int) -> list[int]:
        """Components of g[within], ordered by minimum vertex."""
        comps = []
        rest = within
        while rest:
            comp = self.component_of(lowest_bit(rest), within)
            comps.append(comp)
            rest &= ~comp
        return comps

    def is_connected_mask(self, mask: int) -> bool:
        """True for nonempty masks inducing a connected subgraph."""
        return mask != 0 and self.component_of(lowest_bit(mask), mask) == mask

    def is_independent_mask(self, mask: int) -> bool:
        return all(not self.adj[v] & mask for v in iter_bits(mask))

    def is_clique_mask(self, mask: int) -> bool:
        return all(mask & ~self.adj[v] == 1 << v for v in iter_bits(mask))


# =============================================================================
# Public set operations
# =============================================================================


def neighborhood(g: Graph, s: VertexSet, closed: bool = False) -> VertexSet:
    """N(s) or N[s]."""
    g.check(s)
    if closed:
        return VertexSet(g.closed_nbhd_mask(s.bits), g.n)
    return VertexSet(g.nbhd_mask(s.bits), g.n)


def components(g: Graph, within: VertexSet) -> list[VertexSet]:
    """Connected components of g[within], ordered by minimum vertex."""
    g.check(within)
    return [VertexSet(c, g.n) for c in g.component_masks(within.bits)]
