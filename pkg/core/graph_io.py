"""
Graph file formats.

Edge list (0-based)::

    # comment
    n m [weighted]
    u v                 (m lines)
    w v num/den         (optional weight lines)
    bip v1 v2 ...       (optional, side-1 vertices)

DIMACS (1-based)::

    c comment
    p edge n m
    e u v
    n v weight          (optional)
    bip v1 v2 ...       (optional, 1-based)
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from core.errors import ContractViolation, DomainError, ParseError
from core.graph import Graph, VertexSet

FORMATS = ("edgelist", "dimacs")


@dataclass(frozen=True)
class ParsedGraph:
    """A parsed graph plus the optional declared bipartition."""

    graph: Graph
    side1: Optional[VertexSet] = None


def _content_lines(text: str, comment: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(comment, 1)[0].strip() if comment == "#" else raw.strip()
        if not line:
            continue
        if comment != "#" and line.split()[0] == comment:
            continue
        yield number, line.split()


def _int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected integer, got '{token}'", line_number) from None


def _weight(token: str, line_number: int) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad weight '{token}'", line_number) from None
    if value <= 0:
        raise ParseError(f"weight must be positive, got {token}", line_number)
    return value


def _build(
    n: int,
    edges: list[tuple[int, int, int]],
    weights: dict[int, Fraction],
    side1: Optional[list[int]],
) -> ParsedGraph:
    for u, v, line_number in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u}, {v}) outside vertex range", line_number)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line_number)
    try:
        graph = Graph.from_edges(
            n,
            [(u, v) for u, v, _ in edges],
            [weights.get(v, Fraction(1)) for v in range(n)],
        )
        side = VertexSet.of(n, side1) if side1 is not None else None
    except (DomainError, ContractViolation) as e:
        raise ParseError(str(e)) from e
    return ParsedGraph(graph, side)


def parse_edge_list(text: str) -> ParsedGraph:
    lines = list(_content_lines(text, "#"))
    if not lines:
        raise ParseError("empty input", 1)

    header_line, header = lines[0]
    if len(header) not in (2, 3) or (len(header) == 3 and header[2] != "weighted"):
        raise ParseError("header must be 'n m [weighted]'", header_line)
    n, m = _int(header[0], header_line), _int(header[1], header_line)
    if n < 0 or m < 0:
        raise ParseError("negative header value", header_line)

    edges: list[tuple[int, int, int]] = []
    weights: dict[int, Fraction] = {}
    side1: Optional[list[int]] = None
    for line_number, tokens in lines[1:]:
        if tokens[0] == "w":
            if len(tokens) != 3:
                raise ParseError("weight line must be 'w v num/den'", line_number)
            v = _int(tokens[1], line_number)
            if not 0 <= v < n:
                raise ParseError(f"weight for unknown vertex {v}", line_number)
            weights[v] = _weight(tokens[2], line_number)
        elif tokens[0] == "bip":
            side1 = [_int(t, line_number) for t in tokens[1:]]
            for v in side1:
                if not 0 <= v < n:
                    raise ParseError(f"bipartition vertex {v} outside range", line_number)
        elif len(tokens) == 2:
            edges.append((_int(tokens[0], line_number), _int(tokens[1], line_number), line_number))
        else:
            raise ParseError(f"unrecognized line '{' '.join(tokens)}'", line_number)

    if len(edges) != m:
        last = lines[-1][0]
        raise ParseError(f"header declares {m} edges, found {len(edges)}", last)
    return _build(n, edges, weights, side1)


def parse_dimacs(text: str) -> ParsedGraph:
    n: Optional[int] = None
    m = 0
    last_line = 1
    edges: list[tuple[int, int, int]] = []
    weights: dict[int, Fraction] = {}
    side1: Optional[list[int]] = None
    for line_number, tokens in _content_lines(text, "c"):
        last_line = line_number
        tag = tokens[0]
        if tag == "p":
            if len(tokens) != 4 or n is not None:
                raise ParseError("problem line must be 'p edge n m' and appear once", line_number)
            n, m = _int(tokens[2], line_number), _int(tokens[3], line_number)
        elif n is None:
            raise ParseError("data before problem line", line_number)
        elif tag == "e" and len(tokens) == 3:
            edges.append(
                (_int(tokens[1], line_number) - 1, _int(tokens[2], line_number) - 1, line_number)
            )
        elif tag == "n" and len(tokens) == 3:
            v = _int(tokens[1], line_number) - 1
            if not 0 <= v < n:
                raise ParseError(f"weight for unknown vertex {v + 1}", line_number)
            weights[v] = _weight(tokens[2], line_number)
        elif tag == "bip":
            side1 = [_int(t, line_number) - 1 for t in tokens[1:]]
            for v in side1:
                if not 0 <= v < n:
                    raise ParseError(f"bipartition vertex {v + 1} outside range", line_number)
        else:
            raise ParseError(f"unrecognized line '{' '.join(tokens)}'", line_number)
    if n is None:
        raise ParseError("missing problem line", last_line)
    if len(edges) != m:
        raise ParseError(f"problem line declares {m} edges, found {len(edges)}", last_line)
    return _build(n, edges, weights, side1)


def parse_graph(text: str, fmt: str = "edgelist") -> ParsedGraph:
    if fmt == "edgelist":
        return parse_edge_list(text)
    if fmt == "dimacs":
        return parse_dimacs(text)
    raise ContractViolation(f"unknown graph format '{fmt}', expected one of {FORMATS}")


def load_graph(path: str, fmt: str = "edgelist") -> tuple[ParsedGraph, bytes]:
    """Parse a graph file; also returns the raw bytes for digesting."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"input is not UTF-8: {e}") from e
    return parse_graph(text, fmt), raw


def format_edge_list(g: Graph, side1: Optional[VertexSet] = None) -> str:
    edges = g.edges()
    weighted = not g.is_unit_weighted
    lines = [f"{g.n} {len(edges)}" + (" weighted" if weighted else "")]
    lines.extend(f"{u} {v}" for u, v in edges)
    if weighted:
        lines.extend(f"w {v} {w.numerator}/{w.denominator}" for v, w in enumerate(g.weights))
    if side1 is not None:
        lines.append(" ".join(["bip", *(str(v) for v in side1)]))
    return "\n".join(lines) + "\n"
