"""
Coloring
Constructive χ-bounding coloring of P_t-free graphs with at most (t−1)^(ω−1) colors.
"""

from dataclasses import dataclass

from core.errors import ContractViolation, DomainError, InducedPathFound
from core.graph import Graph, VertexSet, lowest_bit
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Coloring:
    """Colors are 0-based internally; color class i+1 holds the vertices of color i."""

    color_of: tuple[int, ...]
    num_colors: int

    def __post_init__(self):
        for v, c in enumerate(self.color_of):
            if not 0 <= c < self.num_colors:
                raise ContractViolation(f"color {c} of vertex {v} outside 0..{self.num_colors - 1}")

    def is_proper(self, g: Graph) -> bool:
        if len(self.color_of) != g.n:
            raise ContractViolation(f"coloring of {len(self.color_of)} vertices for n={g.n}")
        return all(self.color_of[u] != self.color_of[v] for u, v in g.edges())


def gyarfas_bound(t: int, omega: int) -> int:
    """(t−1)^(ω−1); 0 for the null graph."""
    return (t - 1) ** (omega - 1) if omega > 0 else 0


class _LevelColorer:
    """
    Colors a connected piece from its minimum vertex v1: N(v1) gets one palette, and every
    component D beyond it is colored level by level along an induced path that starts
    v1, u and always moves into the current component. Each level gets a fresh palette
    stacked on the previous ones, while sibling components share theirs.
    """

    def __init__(self, g: Graph, t: int):
        self.g = g
        self.t = t
        self.colors = [-1] * g.n

    def _found(self, path: list[int]) -> None:
        raise InducedPathFound(path[: self.t])

    def color_set(self, x: int, base: int) -> int:
        used = 0
        for comp in self.g.component_masks(x):
            used = max(used, self.color_connected(comp, base))
        return used

    def color_connected(self, x: int, base: int) -> int:
        g = self.g
        v1 = lowest_bit(x)
        nbrs = x & g.adj[v1]
        if not nbrs:
            self.colors[v1] = base
            return 1
        if self.t <= 2:
            self._found([v1, lowest_bit(nbrs)])

        p_n = self.color_set(nbrs, base)
        p_r = 0
        for d in g.component_masks(x & ~nbrs & ~(1 << v1)):
            u = lowest_bit(nbrs & g.union_adj(d))
            if self.t <= 3:
                self._found([v1, u, lowest_bit(d & g.adj[u])])
            p_r = max(p_r, self.color_below([v1, u], d, base + p_n))
        # v1 is anticomplete to every D, so it reuses their first color
        self.colors[v1] = base + p_n
        return p_n + max(p_r, 1)

    def color_below(self, path: list[int], d: int, base: int) -> int:
        # d is connected, anticomplete to path[:-1], and attached to path[-1]
        g = self.g
        level = d & g.adj[path[-1]]
        p_n = self.color_set(level, base)
        p_r = 0
        for d2 in g.component_masks(d & ~level):
            u = lowest_bit(level & g.union_adj(d2))
            if len(path) + 2 >= self.t:
                self._found(path + [u, lowest_bit(d2 & g.adj[u])])
            p_r = max(p_r, self.color_below(path + [u], d2, base + p_n))
        return p_n + p_r


def gyarfas_coloring(g: Graph, t: int) -> Coloring:
    """
    Proper coloring of a P_t-free graph; deterministic, ties go to the smallest index.

    Raises InducedPathFound with a t-vertex witness when the recursion runs into an
    induced P_t.
    """
    if t < 2:
        raise DomainError(f"path length t must be at least 2, got {t}")
    colorer = _LevelColorer(g, t)
    colorer.color_set(g.full_mask, 0)

    # compress the palette to the colors actually used
    used = sorted(set(colorer.colors))
    rank = {c: i for i, c in enumerate(used)}
    coloring = Coloring(tuple(rank[c] for c in colorer.colors), len(used))
    logger.debug(f"coloring of n={g.n} with t={t} uses {coloring.num_colors} colors")
    return coloring


def color_classes(c: Coloring) -> list[VertexSet]:
    """Color classes in color order; element i is class i+1."""
    n = len(c.color_of)
    masks = [0] * c.num_colors
    for v, color in enumerate(c.color_of):
        masks[color] |= 1 << v
    return [VertexSet(m, n) for m in masks]
