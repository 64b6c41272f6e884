"""
Block DP
Dynamic programming over a bag family: every block (S, C) is tiled by a bag Ω with
S ⊆ Ω ⊆ S ∪ C whose leftover components become child blocks. Solves the problem
catalog (max-weight independent set, induced forest, bounded-degree induced subgraph)
and exact treewidth.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Iterator, Optional

from core.errors import ContractViolation, DomainError, InfeasibleFamilyError, InvariantViolation
from core.graph import Graph, VertexSet, iter_bits, lowest_bit, popcount
from structure.separators import enumerate_pmc_masks, mask_key
from structure.treedepth import TreeDecomposition
from utils.logging import get_logger

logger = get_logger(__name__)


class Problem(str, Enum):
    MWIS = "mwis"
    FOREST = "forest"
    MAXDEG = "maxdeg"


@dataclass(frozen=True)
class Block:
    """A component together with the separator it hangs from."""

    separator: VertexSet
    component: VertexSet


@dataclass(frozen=True)
class BagFamily:
    """
    Candidate bags, deduplicated and in canonical order.

    ``host`` is the graph whose block structure the bags tile (the input graph when
    None); ``exact`` marks a family holding every PMC of the host.
    """

    bags: tuple[VertexSet, ...]
    exact: bool = False
    host: Optional[Graph] = None

    def __post_init__(self):
        unique = {b.bits: b for b in self.bags}
        ordered = tuple(unique[m] for m in sorted(unique, key=mask_key))
        object.__setattr__(self, "bags", ordered)

    @classmethod
    def from_pmcs(cls, g: Graph) -> "BagFamily":
        return cls(tuple(VertexSet(p, g.n) for p in enumerate_pmc_masks(g)), exact=True)

    @classmethod
    def from_sets(cls, g: Graph, sets: list[list[int]]) -> "BagFamily":
        return cls(tuple(g.vset(s) for s in sets))

    def __len__(self) -> int:
        return len(self.bags)

    def graph_for(self, g: Graph) -> Graph:
        h = self.host if self.host is not None else g
        if h.n != g.n:
            raise ContractViolation(f"host graph has n={h.n}, input has n={g.n}")
        if any(g.adj[v] & ~h.adj[v] for v in range(g.n)):
            raise DomainError("host graph must contain every edge of the input graph")
        for b in self.bags:
            h.check(b)
        return h


@dataclass(frozen=True)
class SolveResult:
    problem: Problem
    weight: Fraction
    witness: VertexSet
    k: Optional[int] = None
    conditional: bool = False
    reason: Optional[str] = None
    components: tuple[VertexSet, ...] = field(default=())
    blocks: int = 0

    def with_reason(self, reason: str) -> "SolveResult":
        return replace(self, reason=reason)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "problem": self.problem.value,
            "weight": str(self.weight),
            "witness": self.witness.to_list(),
            "conditional": self.conditional,
            "reason": self.reason,
            "blocks": self.blocks,
        }
        if self.k is not None:
            data["k"] = self.k
        if self.problem == Problem.FOREST:
            data["trees"] = [c.to_list() for c in self.components]
        return data


# Table entries are (weight, witness mask); equal weights prefer the witness whose
# lowest differing vertex is included.
Entry = tuple[Fraction, int]


def _better(a: Entry, b: Optional[Entry]) -> bool:
    if b is None or a[0] != b[0]:
        return b is None or a[0] > b[0]
    diff = a[1] ^ b[1]
    return bool(a[1] & diff & -diff)


def _submasks(avail: int, limit: int) -> Iterator[int]:
    """Submasks of avail with at most `limit` bits, empty first."""
    bits = list(iter_bits(avail))

    def grow(i: int, chosen: int, size: int) -> Iterator[int]:
        if i == len(bits):
            yield chosen
            return
        yield from grow(i + 1, chosen, size)
        if size < limit:
            yield from grow(i + 1, chosen | (1 << bits[i]), size + 1)

    yield from grow(0, 0, 0)


def _independent_submasks(g: Graph, avail: int, limit: int) -> Iterator[int]:
    if not avail:
        yield 0
        return
    v = lowest_bit(avail)
    rest = avail & ~(1 << v)
    yield from _independent_submasks(g, rest, limit)
    if limit > 0:
        for sub in _independent_submasks(g, rest & ~g.adj[v], limit - 1):
            yield sub | (1 << v)


def _merge_classes(classes: tuple[int, ...], group: int) -> Optional[tuple[int, ...]]:
    """Join the classes meeting `group`; None when two members were already joined."""
    merged, rest = 0, []
    for cl in classes:
        hit = cl & group
        if hit:
            if hit & (hit - 1):
                return None
            merged |= cl
        else:
            rest.append(cl)
    rest.append(merged | group)
    return tuple(sorted(rest))


class _BlockSolver:
    """
    Memoized block tables. A table maps a boundary choice X ∩ S to
    {summary: best entry over C}; the summary is the connectivity partition of X ∩ S
    (forest) or the degree each boundary vertex receives from C (max-degree).
    """

    def __init__(self, g: Graph, family: BagFamily, problem: Problem, k: int, state_cap: Optional[int]):
        self.g = g
        self.h = family.graph_for(g)
        self.bags = [b.bits for b in family.bags]
        self.problem = problem
        self.k = k
        self.cap = state_cap if state_cap is not None else g.n
        self.truncated = False
        self._options: dict[tuple[int, int], list[tuple[int, list[tuple[int, int]]]]] = {}
        self._tables: dict[tuple[int, int, int], dict[Any, Entry]] = {}

    def options(self, s: int, c: int) -> list[tuple[int, list[tuple[int, int]]]]:
        """Bags tiling block (s, c), each with its child blocks; empty when untileable."""
        key = (s, c)
        if key in self._options:
            return self._options[key]
        h = self.h
        found = []
        for omega in self.bags:
            if omega & ~(s | c) or s & ~omega or not omega & c:
                continue
            children = [(h.nbhd_mask(d), d) for d in h.component_masks(c & ~omega)]
            if all(self.options(sd, d) for sd, d in children):
                found.append((omega, children))
        self._options[key] = found
        return found

    def table(self, s: int, c: int, xs: int) -> dict[Any, Entry]:
        key = (s, c, xs)
        if key in self._tables:
            return self._tables[key]
        best: dict[Any, Entry] = {}
        for omega, children in self.options(s, c):
            for xn in self._candidates(omega & ~s, xs):
                for summary, entry in self._combine(s, xs, xn, children):
                    if _better(entry, best.get(summary)):
                        best[summary] = entry
        self._tables[key] = best
        return best

    def _candidates(self, avail: int, xs: int) -> Iterator[int]:
        limit = self.cap - popcount(xs)
        if self.problem == Problem.MWIS:
            avail &= ~self.g.union_adj(xs)
        if popcount(avail) > limit:
            self.truncated = True
        if self.problem == Problem.MWIS:
            yield from _independent_submasks(self.g, avail, limit)
        else:
            yield from _submasks(avail, limit)

    def _combine(self, s: int, xs: int, xn: int, children: list[tuple[int, int]]) -> Iterator[tuple[Any, Entry]]:
        g = self.g
        xo = xs | xn
        base = g.weight_of(xn)
        if self.problem == Problem.MWIS:
            weight, witness = base, xn
            for sd, d in children:
                entry = self.table(sd, d, xo & sd).get(None)
                if entry is None:
                    return
                weight += entry[0]
                witness |= entry[1]
            yield None, (weight, witness)
            return

        start = self._local_state(s, xo)
        if start is None:
            return
        states: dict[Any, Entry] = {start: (base, xn)}
        for sd, d in children:
            child = self.table(sd, d, xo & sd)
            folded: dict[Any, Entry] = {}
            for state, (w, wit) in states.items():
                for summary, (cw, cwit) in child.items():
                    nxt = self._absorb(state, summary)
                    if nxt is None:
                        continue
                    entry = (w + cw, wit | cwit)
                    if _better(entry, folded.get(nxt)):
                        folded[nxt] = entry
            states = folded
            if not states:
                return
        for state, entry in states.items():
            yield self._summary(state, xs), entry

    # -- problem-specific state handling --------------------------------------
    # forest: sorted tuple of connectivity classes of xo
    # maxdeg: sorted tuple of (vertex, degree so far) over xo

    def _local_state(self, s: int, xo: int) -> Optional[tuple]:
        """State from the edges of G[xo] that do not lie inside s."""
        g = self.g
        if self.problem == Problem.FOREST:
            classes: Optional[tuple[int, ...]] = tuple(1 << v for v in iter_bits(xo))
            for v in iter_bits(xo):
                later = g.adj[v] & xo & ~((1 << (v + 1)) - 1)
                if s >> v & 1:
                    later &= ~s
                for u in iter_bits(later):
                    classes = _merge_classes(classes, (1 << v) | (1 << u))
                    if classes is None:
                        return None
            return classes
        degrees = []
        for v in iter_bits(xo):
            seen = g.adj[v] & xo & ~s if s >> v & 1 else g.adj[v] & xo
            if popcount(seen) > self.k:
                return None
            degrees.append((v, popcount(seen)))
        return tuple(degrees)

    def _absorb(self, state: tuple, summary: tuple) -> Optional[tuple]:
        if self.problem == Problem.FOREST:
            classes: Optional[tuple[int, ...]] = state
            for group in summary:
                classes = _merge_classes(classes, group)
                if classes is None:
                    return None
            return classes
        extra = dict(summary)
        degrees = []
        for v, deg in state:
            deg += extra.get(v, 0)
            if deg > self.k:
                return None
            degrees.append((v, deg))
        return tuple(degrees)

    def _summary(self, state: tuple, xs: int) -> tuple:
        if self.problem == Problem.FOREST:
            return tuple(sorted(cl & xs for cl in state if popcount(cl & xs) > 1))
        return tuple((v, deg) for v, deg in state if xs >> v & 1 and deg)


# =============================================================================
# Treewidth over tilings
# =============================================================================


class _WidthTiler:
    def __init__(self, g: Graph, family: BagFamily):
        self.h = family.graph_for(g)
        self.bags = [b.bits for b in family.bags]
        self._best: dict[tuple[int, int], tuple[int, int, list[tuple[int, int]]]] = {}

    def best(self, s: int, c: int) -> Optional[tuple[int, int, list[tuple[int, int]]]]:
        """(width, bag, children) of the narrowest tiling of block (s, c)."""
        key = (s, c)
        if key in self._best:
            return self._best[key]
        h = self.h
        choice = None
        for omega in self.bags:
            if omega & ~(s | c) or s & ~omega or not omega & c:
                continue
            width = popcount(omega) - 1
            if choice is not None and width >= choice[0]:
                continue
            children = [(h.nbhd_mask(d), d) for d in h.component_masks(c & ~omega)]
            for sd, d in children:
                sub = self.best(sd, d)
                if sub is None:
                    width = -2
                    break
                width = max(width, sub[0])
            if width == -2:
                continue
            if choice is None or width < choice[0]:
                choice = (width, omega, children)
        self._best[key] = choice
        return choice

    def decomposition(self) -> TreeDecomposition:
        n = self.h.n
        parent: list[int] = []
        bags: list[VertexSet] = []
        stack: list[tuple[int, int, int]] = [(0, self.h.full_mask, -1)]
        while stack:
            s, c, up = stack.pop()
            _, omega, children = self._best[(s, c)]
            node = len(bags)
            parent.append(up)
            bags.append(VertexSet(omega, n))
            for sd, d in reversed(children):
                stack.append((sd, d, node))
        return TreeDecomposition(tuple(parent), tuple(bags))


def _tile_widths(g: Graph) -> _WidthTiler:
    tiler = _WidthTiler(g, BagFamily.from_pmcs(g))
    if tiler.best(0, g.full_mask) is None:
        raise InfeasibleFamilyError("PMC family does not tile the graph")
    return tiler


def treewidth_via_blocks(g: Graph) -> int:
    """Exact treewidth: the narrowest tiling by PMCs; −1 for the null graph."""
    if g.n == 0:
        return -1
    width = _tile_widths(g).best(0, g.full_mask)[0]
    logger.debug(f"treewidth of n={g.n} is {width}")
    return width


def optimal_tree_decomposition(g: Graph) -> TreeDecomposition:
    """Tree decomposition realizing treewidth_via_blocks, one node per tiling bag."""
    if g.n == 0:
        return TreeDecomposition((), ())
    return _tile_widths(g).decomposition()


# =============================================================================
# Problem catalog
# =============================================================================


def forest_components(g: Graph, witness: VertexSet) -> tuple[VertexSet, ...]:
    return tuple(VertexSet(c, g.n) for c in g.component_masks(witness.bits))


def check_witness(g: Graph, problem: Problem, witness: VertexSet, k: int = 1) -> bool:
    """Independent feasibility check of a solution set."""
    x = g.check(witness).bits
    problem = Problem(problem)
    if problem == Problem.MWIS:
        return g.is_independent_mask(x)
    if problem == Problem.FOREST:
        edges = sum(popcount(g.adj[v] & x) for v in iter_bits(x)) // 2
        return edges == popcount(x) - len(g.component_masks(x))
    return all(popcount(g.adj[v] & x) <= k for v in iter_bits(x))


def full_blocks(g: Graph, family: BagFamily) -> list[Block]:
    """Blocks (N(D), D) for every bag and component D of the host minus the bag."""
    h = family.graph_for(g)
    seen = {}
    for b in family.bags:
        for d in h.component_masks(h.full_mask & ~b.bits):
            seen[(h.nbhd_mask(d), d)] = True
    return [Block(VertexSet(s, g.n), VertexSet(d, g.n)) for s, d in sorted(seen, key=lambda sd: (mask_key(sd[1]), mask_key(sd[0])))]


def solve(
    g: Graph,
    problem: Problem,
    bags: BagFamily,
    k: int = 1,
    state_cap: Optional[int] = None,
) -> SolveResult:
    """
    Optimum of the catalog problem over every tiling of the family.

    With ``state_cap`` at most that many solution vertices are tracked per bag; when the
    cap cut off any candidate the result is flagged conditional.
    """
    problem = Problem(problem)
    if problem == Problem.MAXDEG and k < 0:
        raise DomainError(f"degree bound k must be non-negative, got {k}")
    if state_cap is not None and state_cap < 0:
        raise DomainError(f"state cap must be non-negative, got {state_cap}")
    k_out = k if problem == Problem.MAXDEG else None
    if g.n == 0:
        return SolveResult(problem, Fraction(0), VertexSet.empty(0), k=k_out)

    solver = _BlockSolver(g, bags, problem, k, state_cap)
    if not solver.options(0, g.full_mask):
        raise InfeasibleFamilyError(f"{len(bags)} bags do not tile the graph")
    table = solver.table(0, g.full_mask, 0)
    weight, witness_mask = table[()] if problem != Problem.MWIS else table[None]
    witness = VertexSet(witness_mask, g.n)
    if not check_witness(g, problem, witness, k):
        raise InvariantViolation(
            "witness_feasible", {"problem": problem.value, "witness": witness.to_list()}
        )

    if solver.truncated:
        logger.warning(f"state cap {state_cap} cut candidates; {problem.value} result is a lower bound")
    result = SolveResult(
        problem,
        weight,
        witness,
        k=k_out,
        conditional=solver.truncated,
        reason="state_cap" if solver.truncated else None,
        components=forest_components(g, witness) if problem == Problem.FOREST else (),
        blocks=len(solver._tables),
    )
    logger.debug(f"{problem.value}: weight {weight} over {len(bags)} bags")
    return result


def solve_mwis(g: Graph, bags: BagFamily) -> SolveResult:
    return solve(g, Problem.MWIS, bags)


def solve_induced_forest(g: Graph, bags: BagFamily, state_cap: Optional[int] = None) -> SolveResult:
    return solve(g, Problem.FOREST, bags, state_cap=state_cap)


def solve_max_degree(g: Graph, bags: BagFamily, k: int, state_cap: Optional[int] = None) -> SolveResult:
    return solve(g, Problem.MAXDEG, bags, k=k, state_cap=state_cap)
