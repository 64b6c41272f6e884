"""
Bipartite Completion
Completing minimal separators of P7-free bipartite graphs into bicliques until the graph is
chordal bipartite, plus the bad-C6 machinery measured against a treedepth structure.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Optional

from core.errors import ContractViolation, DomainError, InducedPathFound, InvariantViolation
from core.graph import Graph, VertexSet, iter_bits, lowest_bit, mask_of, popcount
from structure.recognition import (
    InducedCycle,
    check_bipartition,
    enumerate_induced_c6,
    find_induced_path,
    is_chordal_bipartite,
)
from structure.separators import (
    MinimalSeparator,
    enumerate_minimal_separator_masks,
    enumerate_pmc_masks,
)
from structure.treedepth import TreedepthStructure
from solvers.block_dp import BagFamily, Problem, SolveResult, solve
from utils.logging import get_logger

logger = get_logger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True)
class BipartiteGraph:
    """A graph with a fixed ordered bipartition (side1, side2)."""

    g: Graph
    side1: VertexSet

    def __post_init__(self):
        check_bipartition(self.g, self.side1)

    @classmethod
    def from_graph(cls, g: Graph, side1: Optional[VertexSet] = None) -> "BipartiteGraph":
        return cls(g, check_bipartition(g, side1))

    @property
    def side2(self) -> VertexSet:
        return self.g.vertices - self.side1

    def side_of(self, v: int) -> int:
        return 1 if v in self.side1 else 2

    def side_mask(self, i: int) -> int:
        return self.side1.bits if i == 1 else self.side2.bits

    def with_graph(self, g: Graph) -> "BipartiteGraph":
        return BipartiteGraph(g, self.side1)


@dataclass(frozen=True)
class CompletionStep:
    cycle: InducedCycle
    x: int
    y: int
    separator: VertexSet
    added_edges: tuple[Edge, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "cycle": list(self.cycle.vertices),
            "pair": [self.x, self.y],
            "separator": self.separator.to_list(),
            "added_edges": [list(e) for e in self.added_edges],
        }


@dataclass(frozen=True)
class BadC6:
    """Induced C6 with opposite, forest-incomparable x ∈ side 1 and y ∈ side 2."""

    cycle: InducedCycle
    x: int
    y: int
    depth: tuple[int, int]

    @property
    def oriented(self) -> tuple[int, ...]:
        """Cycle read from x, so c1 = x and c4 = y."""
        return self.cycle.rotated_to(self.x)

    def to_dict(self) -> dict[str, Any]:
        return {"cycle": list(self.oriented), "x": self.x, "y": self.y, "depth": list(self.depth)}


@dataclass(frozen=True)
class C6Context:
    """S1 sees exactly c1, c3, c5; S2 sees exactly c2, c4, c6; MR is the big remainder."""

    s1: VertexSet
    s2: VertexSet
    main_remainder: VertexSet
    remainder_components: tuple[VertexSet, ...]

    def seeing(self, cycle: tuple[int, ...], v: int) -> VertexSet:
        """The S-set whose triple contains cycle vertex v."""
        return self.s1 if cycle.index(v) % 2 == 0 else self.s2


# =============================================================================
# Biclique criterion and completion
# =============================================================================


def missing_biclique_edges(bg: BipartiteGraph, s: int) -> list[Edge]:
    g = bg.g
    part2 = s & bg.side2.bits
    edges = []
    for u in iter_bits(s & bg.side1.bits):
        for v in iter_bits(part2 & ~g.adj[u]):
            edges.append((min(u, v), max(u, v)))
    return sorted(edges)


def separator_biclique_criterion(bg: BipartiteGraph) -> Optional[MinimalSeparator]:
    """First minimal separator (canonical order) whose sides are not complete to each other."""
    for s in enumerate_minimal_separator_masks(bg.g):
        if missing_biclique_edges(bg, s):
            return MinimalSeparator.from_mask(bg.g, s)
    return None


def complete_separator(bg: BipartiteGraph, s: MinimalSeparator) -> BipartiteGraph:
    """Add every missing side1 × side2 pair inside S."""
    return bg.with_graph(bg.g.add_edges(missing_biclique_edges(bg, bg.g.check(s.vertices).bits)))


def _separator_through(g: Graph, cycle: tuple[int, ...]) -> int:
    # minimal separator with c1 and c4 that splits {c2, c3} from {c5, c6}
    far = (1 << cycle[4]) | (1 << cycle[5])
    k_x = g.component_of(cycle[1], g.full_mask & ~g.closed_nbhd_mask(far))
    s1 = g.nbhd_mask(k_x)
    k_y = g.component_of(cycle[4], g.full_mask & ~s1)
    return g.nbhd_mask(k_y)


def complete_to_chordal_bipartite(
    bg: BipartiteGraph, check_invariants: bool = True
) -> tuple[BipartiteGraph, list[CompletionStep]]:
    """
    While an induced C6 remains: take the least one, its pair (c1, c4), a minimal
    separator through both, and complete that separator.

    With ``check_invariants`` every step re-verifies that no induced P7 and no new
    induced C6 appeared.
    """
    witness = find_induced_path(bg.g, 7)
    if witness is not None:
        raise InducedPathFound(list(witness.vertices))

    current = bg
    trace: list[CompletionStep] = []
    cycles = enumerate_induced_c6(current.g)
    while cycles:
        cycle = cycles[0]
        c = cycle.vertices
        x, y = c[0], c[3]
        s = _separator_through(current.g, c)
        if not (s >> x & 1 and s >> y & 1):
            raise InvariantViolation("separator_contains_pair", {"cycle": list(c), "separator": s})
        added = missing_biclique_edges(current, s)
        if not added:
            raise InvariantViolation("completion_progress", {"cycle": list(c)})
        nxt = current.with_graph(current.g.add_edges(added))
        next_cycles = enumerate_induced_c6(nxt.g)

        if check_invariants:
            path = find_induced_path(nxt.g, 7)
            if path is not None:
                raise InvariantViolation("completion_keeps_p7_free", {"path": list(path.vertices)})
            before = {cyc.vertices for cyc in cycles}
            new = [cyc.vertices for cyc in next_cycles if cyc.vertices not in before]
            if new:
                raise InvariantViolation("completion_adds_no_c6", {"new_cycles": new})

        trace.append(CompletionStep(cycle, x, y, VertexSet(s, bg.g.n), tuple(added)))
        current, cycles = nxt, next_cycles

    if not is_chordal_bipartite(current.g, current.side1):
        raise InvariantViolation("completion_is_chordal_bipartite", {"steps": len(trace)})
    logger.info(f"completion finished after {len(trace)} steps")
    return current, trace


# =============================================================================
# Bad C6s
# =============================================================================


def depth_key(depth: tuple[int, int]) -> tuple[int, int]:
    """(1,1) ≺ (1,2) ≺ (2,1) ≺ (1,3) ≺ (2,2) ≺ ..."""
    return (depth[0] + depth[1], depth[0])


def depth_order_less(a: BadC6, b: BadC6) -> bool:
    return depth_key(a.depth) < depth_key(b.depth)


def find_bad_c6(bg: BipartiteGraph, t: TreedepthStructure) -> list[BadC6]:
    """All bad C6s, cycles canonical and sorted, x on side 1."""
    found = []
    for cycle in enumerate_induced_c6(bg.g):
        c = cycle.vertices
        for i in range(3):
            u, v = c[i], c[i + 3]
            x, y = (u, v) if u in bg.side1 else (v, u)
            if x in t and y in t and not t.is_comparable(x, y):
                found.append(BadC6(cycle, x, y, (t.depth(x), t.depth(y))))
    found.sort(key=lambda b: (b.cycle.vertices, b.x))
    return found


def prec_maximal(bads: list[BadC6]) -> list[BadC6]:
    if not bads:
        return []
    top = max(depth_key(b.depth) for b in bads)
    return [b for b in bads if depth_key(b.depth) == top]


def c6_context(bg: BipartiteGraph, cycle: tuple[int, ...]) -> C6Context:
    """
    S1, S2 and MR for a C6 read as c1..c6. Raises InvariantViolation when some neighbor of
    MR sees the cycle in neither pattern, which a P7-free graph rules out.
    """
    g = bg.g
    if len(cycle) != 6 or not InducedCycle(tuple(cycle)).is_valid(g):
        raise DomainError(f"{list(cycle)} is not an induced C6")
    cmask = mask_of(cycle)
    odd = mask_of(cycle[0::2])
    even = mask_of(cycle[1::2])
    around = g.nbhd_mask(cmask)
    s1 = mask_of(v for v in iter_bits(around) if g.adj[v] & cmask == odd)
    s2 = mask_of(v for v in iter_bits(around) if g.adj[v] & cmask == even)

    comps = [c for c in g.component_masks(g.full_mask & ~g.closed_nbhd_mask(cmask)) if c & (c - 1)]
    mr = 0
    for c in comps:
        mr |= c
    stray = g.nbhd_mask(mr) & ~(s1 | s2)
    if stray:
        raise InvariantViolation(
            "remainder_neighbors_see_alternate_triple",
            {"cycle": list(cycle), "stray": VertexSet(stray, g.n).to_list()},
        )
    return C6Context(
        VertexSet(s1, g.n),
        VertexSet(s2, g.n),
        VertexSet(mr, g.n),
        tuple(VertexSet(c, g.n) for c in comps),
    )


def is_t_rich(a: VertexSet, t: TreedepthStructure) -> bool:
    """Some depth level of t holds at least two vertices of a."""
    return any(popcount(a.bits & t.level_mask(alpha)) > 1 for alpha in range(1, t.d + 1))


def is_t_poor(a: VertexSet, t: TreedepthStructure) -> bool:
    return not is_t_rich(a, t)


def bad_c6_class(bg: BipartiteGraph, bad: BadC6, t: TreedepthStructure) -> tuple[bool, bool]:
    """(S1 poor, S2 poor) with the cycle read from x."""
    ctx = c6_context(bg, bad.oriented)
    return is_t_poor(ctx.s1, t), is_t_poor(ctx.s2, t)


def class_name(cls: tuple[bool, bool]) -> str:
    return "/".join("poor" if poor else "rich" for poor in cls)


# =============================================================================
# Seagulls and neighborhood partitions
# =============================================================================


def _p3s(g: Graph, a: int, b: int, c: int) -> list[tuple[int, int, int]]:
    found = []
    for mid in iter_bits(b):
        for left in iter_bits(g.adj[mid] & a):
            for right in iter_bits(g.adj[mid] & c & ~g.adj[left] & ~(1 << left)):
                found.append((left, mid, right))
    return found


def seagull_witness(
    bg: BipartiteGraph, a: VertexSet, b: VertexSet, c: VertexSet
) -> Optional[tuple[tuple[int, int, int], tuple[int, int, int]]]:
    """Two vertex-disjoint, anticomplete induced P3s of the form A−B−C, if any."""
    g = bg.g
    paths = _p3s(g, a.bits, b.bits, c.bits)
    for p, q in combinations(paths, 2):
        pm, qm = mask_of(p), mask_of(q)
        if pm & qm or g.union_adj(pm) & qm:
            continue
        return p, q
    return None


def is_vv_free(bg: BipartiteGraph, a: VertexSet, b: VertexSet, c: VertexSet) -> bool:
    return seagull_witness(bg, a, b, c) is None


def neighborhood_partition(bg: BipartiteGraph, z: VertexSet) -> list[tuple[int, VertexSet, VertexSet]]:
    """
    Nonempty classes A_{i,Y} of V − Z: side i and exact neighborhood Y in Z, as
    (i, Y, A) sorted by side then Y.
    """
    g = bg.g
    zm = g.check(z).bits
    classes: dict[tuple[int, int], int] = {}
    for v in iter_bits(g.full_mask & ~zm):
        key = (bg.side_of(v), g.adj[v] & zm)
        classes[key] = classes.get(key, 0) | (1 << v)
    ordered = sorted(classes.items(), key=lambda kv: (kv[0][0], tuple(iter_bits(kv[0][1]))))
    return [(side, VertexSet(y, g.n), VertexSet(block, g.n)) for (side, y), block in ordered]


def cleaning_apply_violations(bg: BipartiteGraph, z: VertexSet) -> list[tuple[VertexSet, ...]]:
    """Ordered triples of distinct partition classes that are not ∨∨-free."""
    blocks = [block for _, _, block in neighborhood_partition(bg, z)]
    bad = []
    for a, b, c in ((a, b, c) for a in blocks for b in blocks for c in blocks):
        if a == b or b == c or a == c:
            continue
        if not is_vv_free(bg, a, b, c):
            bad.append((a, b, c))
    return bad


def is_clean(bg: BipartiteGraph, a: VertexSet, b: VertexSet, c: VertexSet, x: VertexSet) -> bool:
    """No vertex of B − X has neighbors in both A − X and C − X."""
    g = bg.g
    keep_a, keep_c = a.bits & ~x.bits, c.bits & ~x.bits
    return not any(g.adj[v] & keep_a and g.adj[v] & keep_c for v in iter_bits(b.bits & ~x.bits))


# =============================================================================
# Remainder lemmas as checks
# =============================================================================


def comp_nei_violations(bg: BipartiteGraph, blocks: list[VertexSet]) -> list[VertexSet]:
    """
    Components D of G − ∪N[B] for which some side of N(D) is not inside N(B) for a single
    block B. Blocks must be pairwise disjoint and anticomplete, connected, of size ≥ 2.
    """
    g = bg.g
    masks = [g.check(b).bits for b in blocks]
    for m in masks:
        if popcount(m) < 2 or not g.is_connected_mask(m):
            raise DomainError("blocks must be connected with at least two vertices")
    for m1, m2 in combinations(masks, 2):
        if m1 & m2 or g.union_adj(m1) & m2:
            raise DomainError("blocks must be disjoint and anticomplete")
    covered = 0
    for m in masks:
        covered |= g.closed_nbhd_mask(m)

    bad = []
    for d in g.component_masks(g.full_mask & ~covered):
        nd = g.nbhd_mask(d)
        for side in (1, 2):
            part = nd & bg.side_mask(side)
            if part and not any(part & ~g.nbhd_mask(m) == 0 for m in masks):
                bad.append(VertexSet(d, g.n))
                break
    return bad


def mr_comparable_violations(bg: BipartiteGraph, z: VertexSet) -> list[tuple[VertexSet, VertexSet]]:
    """Pairs of ≥2-vertex components of G − N[Z] whose same-side neighborhoods do not nest."""
    g = bg.g
    zm = g.check(z).bits
    if not g.is_connected_mask(zm):
        raise DomainError("Z must be connected")
    comps = [c for c in g.component_masks(g.full_mask & ~g.closed_nbhd_mask(zm)) if c & (c - 1)]
    bad = []
    for d1, d2 in combinations(comps, 2):
        n1, n2 = g.nbhd_mask(d1), g.nbhd_mask(d2)
        for side in (1, 2):
            p, q = n1 & bg.side_mask(side), n2 & bg.side_mask(side)
            if p & ~q and q & ~p:
                bad.append((VertexSet(d1, g.n), VertexSet(d2, g.n)))
                break
    return bad


def better_c6_violations(bg: BipartiteGraph, t: TreedepthStructure) -> list[BadC6]:
    """
    Bad C6s breaking the depth rules: a level holding two vertices of the S-set that sees
    x (resp. y) must lie deeper than x (resp. y), and a ≺-maximal bad C6 has a poor S-set.
    """
    bads = find_bad_c6(bg, t)
    top = {id(b) for b in prec_maximal(bads)}
    broken = []
    for bad in bads:
        ctx = c6_context(bg, bad.oriented)
        ok = True
        for s, anchor in ((ctx.s1, bad.x), (ctx.s2, bad.y)):
            for alpha in range(1, t.d + 1):
                if popcount(s.bits & t.level_mask(alpha)) > 1 and alpha <= t.depth(anchor):
                    ok = False
        if id(bad) in top and is_t_rich(ctx.s1, t) and is_t_rich(ctx.s2, t):
            ok = False
        if not ok:
            broken.append(bad)
    return broken


def _disjoint_anticomplete(g: Graph, a: int, b: int) -> bool:
    return not a & b and not g.union_adj(a) & b


def _deep_seers(ctx: C6Context, bad: BadC6, t: TreedepthStructure, i: int) -> int:
    xi, alpha = (bad.x, bad.depth[0]) if i == 1 else (bad.y, bad.depth[1])
    return ctx.seeing(bad.oriented, xi).bits & t.deeper_than_mask(alpha)


def _home(ctx: C6Context, other: BadC6) -> Optional[int]:
    om = other.cycle.mask
    return next((d.bits for d in ctx.remainder_components if om & ~d.bits == 0), None)


def similar_bad_c6(
    bg: BipartiteGraph, t: TreedepthStructure, bad: BadC6, other: BadC6, i: int
) -> bool:
    """
    `other` is similar to `bad` on side i: same depth, disjoint and anticomplete, and its
    component of the remainder MR sees a vertex of the S-set at x_i deeper than x_i.
    """
    if i not in (1, 2):
        raise ContractViolation(f"side must be 1 or 2, got {i}")
    g = bg.g
    if other.depth != bad.depth or not _disjoint_anticomplete(g, bad.cycle.mask, other.cycle.mask):
        return False
    ctx = c6_context(bg, bad.oriented)
    home = _home(ctx, other)
    return home is not None and bool(g.nbhd_mask(home) & _deep_seers(ctx, bad, t, i))


def mr_next_c6_violations(bg: BipartiteGraph, t: TreedepthStructure) -> list[dict[str, Any]]:
    """
    For a bad C6 (C, x1, x2) and i with U = (S-set of C seeing x_i) ∩ T deeper than
    depth(x_i) nonempty: every similar bad C6 C' is anticomplete to U, every u ∈ U ∩ N(D')
    has a neighbor in D' on the S-set of C' opposite to x'_i, and all similar C' share D'.
    """
    g = bg.g
    bads = find_bad_c6(bg, t)
    problems = []
    for bad in bads:
        c = bad.oriented
        ctx = c6_context(bg, c)
        for i in (1, 2):
            u_set = _deep_seers(ctx, bad, t, i)
            if not u_set:
                continue
            homes = set()
            for other in bads:
                if not similar_bad_c6(bg, t, bad, other, i):
                    continue
                home = _home(ctx, other)
                homes.add(home)
                oc = other.oriented
                octx = c6_context(bg, oc)
                xi_other = other.x if i == 1 else other.y
                opposite = octx.s2 if oc.index(xi_other) % 2 == 0 else octx.s1
                if g.union_adj(other.cycle.mask) & u_set:
                    problems.append({"cycle": list(c), "similar": list(oc), "point": 1})
                for u in iter_bits(u_set & g.nbhd_mask(home)):
                    if not g.adj[u] & home & opposite.bits:
                        problems.append({"cycle": list(c), "similar": list(oc), "point": 2, "u": u})
            if len(homes) > 1:
                problems.append({"cycle": list(c), "point": 3, "components": len(homes)})
    return problems


def double_c6_violations(bg: BipartiteGraph, t: TreedepthStructure) -> list[dict[str, Any]]:
    """
    For disjoint anticomplete bad C6s of equal depth in one component and an edge uv
    joining their S-sets outside each other's closed neighborhoods, every ≥2-vertex
    component D of G − N[Z] has N(D) ⊆ N(C ∪ C'), and both sides of N(D) are T-poor when D
    holds a bad C6 of that depth.
    """
    g = bg.g
    bads = find_bad_c6(bg, t)
    contexts = {id(b): c6_context(bg, b.oriented) for b in bads}
    problems = []
    for first, second in combinations(bads, 2):
        c1m, c2m = first.cycle.mask, second.cycle.mask
        if first.depth != second.depth or not _disjoint_anticomplete(g, c1m, c2m):
            continue
        if not g.component_of(lowest_bit(c1m), g.full_mask) & c2m:
            continue
        ctx1, ctx2 = contexts[id(first)], contexts[id(second)]
        u_side = (ctx1.s1.bits | ctx1.s2.bits) & ~g.closed_nbhd_mask(c2m)
        v_side = (ctx2.s1.bits | ctx2.s2.bits) & ~g.closed_nbhd_mask(c1m)
        both = g.nbhd_mask(c1m | c2m)
        for u in iter_bits(u_side):
            for v in iter_bits(g.adj[u] & v_side):
                z = c1m | c2m | (1 << u) | (1 << v)
                for d in g.component_masks(g.full_mask & ~g.closed_nbhd_mask(z)):
                    if not d & (d - 1):
                        continue
                    nd = g.nbhd_mask(d)
                    if nd & ~both:
                        problems.append({"pair": [list(first.oriented), list(second.oriented)],
                                         "edge": [u, v], "point": 1})
                    holds = any(b.depth == first.depth and b.cycle.mask & ~d == 0 for b in bads)
                    if holds and (is_t_rich(VertexSet(nd & bg.side1.bits, g.n), t)
                                  or is_t_rich(VertexSet(nd & bg.side2.bits, g.n), t)):
                        problems.append({"pair": [list(first.oriented), list(second.oriented)],
                                         "edge": [u, v], "point": 2})
    return problems


# =============================================================================
# Solving on the completed graph
# =============================================================================


def completed_bag_family(bg: BipartiteGraph) -> tuple[BagFamily, list[CompletionStep]]:
    """PMCs of the chordal bipartite completion, hosted on the completed graph."""
    completed, trace = complete_to_chordal_bipartite(bg, check_invariants=False)
    h = completed.g
    bags = tuple(VertexSet(p, h.n) for p in enumerate_pmc_masks(h))
    return BagFamily(bags, exact=True, host=h), trace


def solve_on_completed(
    bg: BipartiteGraph, problem: Problem, d: int, k: int = 1, state_cap: Optional[int] = None
) -> SolveResult:
    """
    Solve on the original graph over the PMCs of its completion. MWIS is exact; forest and
    max-degree track at most `state_cap` (default d) solution vertices per bag and are
    exact when an optimum has a treedepth-d structure with no bad C6.
    """
    family, trace = completed_bag_family(bg)
    problem = Problem(problem)
    cap = None if problem == Problem.MWIS else (state_cap if state_cap is not None else d)
    result = solve(bg.g, problem, family, k=k, state_cap=cap)
    if result.conditional:
        result = result.with_reason(
            f"exact when an optimum has a treedepth-{d} structure with no bad C6"
        )
    logger.info(f"solved {problem.value} on completion with {len(trace)} steps, {len(family)} bags")
    return result
