"""
Core Orchestrator - runs one subcommand of the pipeline and wraps the outcome in a
RunReport.

Parsing is timed separately from the work itself; every report carries the metrics
summary of its run.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from core.config import Settings
from core.errors import ContractViolation, DomainError, ParseError
from core.graph_io import ParsedGraph, format_edge_list, load_graph
from core.graph import Graph
from core.modules import CLIQUE_NUMBER_CAP, clique_number, is_cograph
from eval.certify import certify_solve, completion_report, verify_graph
from eval.fixtures import FixtureKind, gen_fixture
from solvers.block_dp import BagFamily, Problem, SolveResult, full_blocks, solve
from structure.bipartite import (
    BipartiteGraph,
    complete_to_chordal_bipartite,
    completed_bag_family,
    solve_on_completed,
)
from structure.coloring import color_classes, gyarfas_bound, gyarfas_coloring
from structure.recognition import (
    enumerate_induced_c6,
    find_induced_path,
    is_bipartite,
    is_chordal,
    is_chordal_bipartite,
)
from structure.separators import (
    cover_report,
    enumerate_minimal_separators,
    enumerate_pmc_masks,
    enumerate_pmcs,
)
from structure.treedepth import (
    degeneracy,
    enumerate_treedepth_structures,
    minimal_triangulations,
    treedepth,
    treewidth,
)
from utils.logging import get_logger
from utils.metrics import MetricsTracker

logger = get_logger(__name__)

SCHEMA_VERSION = 1
ENUMERATE_TARGETS = ("separators", "pmcs", "blocks", "covers", "structures", "triangulations")
BAG_SOURCES = ("pmcs", "completed", "file")


@dataclass
class RunReport:
    """Machine-readable outcome of one subcommand."""

    subcommand: str
    input_digest: Optional[str]
    timing: dict[str, float]
    result: dict[str, Any]
    invariant_report: dict[str, Any] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunReport":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ContractViolation(f"unsupported report schema version {version}")
        return cls(
            subcommand=data["subcommand"],
            input_digest=data.get("input_digest"),
            timing=dict(data["timing"]),
            result=dict(data["result"]),
            invariant_report=dict(data.get("invariant_report", {})),
            counters=dict(data.get("counters", {})),
        )


def digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def _clique_number_or_none(g: Graph) -> Optional[int]:
    return clique_number(g) if g.n <= CLIQUE_NUMBER_CAP else None


class PmcOrchestrator:
    """Wires parsing, the structure modules, the solver and the certification suites."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        self.metrics = MetricsTracker()

    # =========================================================================
    # Input
    # =========================================================================

    def load(self, path: str, fmt: str = "edgelist") -> tuple[ParsedGraph, str]:
        with self.metrics.time("parse"):
            parsed, raw = load_graph(path, fmt)
        self.metrics.record("n", parsed.graph.n)
        self.metrics.record("m", parsed.graph.num_edges)
        return parsed, digest(raw)

    def report(
        self,
        subcommand: str,
        input_digest: Optional[str],
        result: dict[str, Any],
        invariant_report: Optional[dict[str, Any]] = None,
    ) -> RunReport:
        timings = self.metrics.summary()["timings_ms"]
        return RunReport(
            subcommand=subcommand,
            input_digest=input_digest,
            timing={
                "parse_ms": timings.get("parse", 0.0),
                "wall_ms": round(self.metrics.total_ms(exclude=("parse",)), 3),
            },
            result=result,
            invariant_report=invariant_report or {},
            counters=dict(self.metrics.counters),
        )

    # =========================================================================
    # Subcommands
    # =========================================================================

    def recognize(self, parsed: ParsedGraph, t: int = 7) -> dict[str, Any]:
        g = parsed.graph
        with self.metrics.time("recognize"):
            path = find_induced_path(g, t)
            p7_path = path if t == 7 else find_induced_path(g, 7)
            bipartite = is_bipartite(g)
            c6s = enumerate_induced_c6(g)
            result: dict[str, Any] = {
                "p7_free": p7_path is None,
                "chordal": is_chordal(g),
                "bipartite": bipartite,
                "chordal_bipartite": bipartite and is_chordal_bipartite(g, parsed.side1),
                "c6_count": len(c6s),
                "n": g.n,
                "m": g.num_edges,
                "t": t,
                "pt_free": path is None,
                "induced_path": list(path.vertices) if path else None,
                "cograph": is_cograph(g, g.vertices),
                "clique_number": _clique_number_or_none(g),
            }
        self.metrics.count("induced_c6", len(c6s))
        return result

    def color(self, parsed: ParsedGraph, t: int = 7) -> dict[str, Any]:
        g = parsed.graph
        with self.metrics.time("color"):
            coloring = gyarfas_coloring(g, t)
            omega = _clique_number_or_none(g)
        return {
            "t": t,
            "clique_number": omega,
            "colors": coloring.num_colors,
            "bound": gyarfas_bound(t, omega) if omega is not None else None,
            "color_of": list(coloring.color_of),
            "classes": [c.to_list() for c in color_classes(coloring)],
        }

    def enumerate(self, parsed: ParsedGraph, target: str, d: int = 2) -> dict[str, Any]:
        g = parsed.graph
        if target not in ENUMERATE_TARGETS:
            raise ContractViolation(f"unknown enumeration target '{target}'")
        with self.metrics.time(f"enumerate_{target}"):
            if target == "separators":
                seps = enumerate_minimal_separators(g)
                self.metrics.count("separators", len(seps))
                return {
                    "count": len(seps),
                    "separators": [s.vertices.to_list() for s in seps],
                    "full_components": [[c.to_list() for c in s.full_components] for s in seps],
                }
            if target == "pmcs":
                pmcs = enumerate_pmcs(g)
                self.metrics.count("pmcs", len(pmcs))
                return {"count": len(pmcs), "pmcs": [p.vertices.to_list() for p in pmcs]}
            if target == "blocks":
                blocks = full_blocks(g, BagFamily.from_pmcs(g))
                self.metrics.count("blocks", len(blocks))
                return {
                    "count": len(blocks),
                    "blocks": [
                        {"separator": b.separator.to_list(), "component": b.component.to_list()}
                        for b in blocks
                    ],
                }
            if target == "covers":
                return cover_report(g, self.settings.pmc.cover_cap)
            if target == "structures":
                records = list(enumerate_treedepth_structures(g, d))
                self.metrics.count("structures", len(records))
                return {
                    "d": d,
                    "count": len(records),
                    "maximal": sum(1 for r in records if r.maximal),
                    "structures": [
                        {**r.structure.to_dict(), "maximal": r.maximal} for r in records
                    ],
                }
            fills = minimal_triangulations(g)
            return {"count": len(fills), "fills": [sorted(list(e) for e in f) for f in fills]}

    def complete_bipartite(
        self, parsed: ParsedGraph, check_invariants: bool = False
    ) -> tuple[dict, dict]:
        bg = BipartiteGraph.from_graph(parsed.graph, parsed.side1)
        with self.metrics.time("complete"):
            if check_invariants:
                completed, trace, invariants = completion_report(bg)
            else:
                completed, trace = complete_to_chordal_bipartite(bg, check_invariants=False)
                invariants = {}
        with self.metrics.time("enumerate_completed"):
            seps = enumerate_minimal_separators(completed.g)
            pmcs = enumerate_pmc_masks(completed.g)
        self.metrics.count("completion_steps", len(trace))
        added = [list(e) for step in trace for e in step.added_edges]
        result = {
            "steps": len(trace),
            "added_edges": added,
            "trace": [step.to_dict() for step in trace],
            "final_minsep_count": len(seps),
            "final_pmc_count": len(pmcs),
        }
        return result, invariants

    def _bags(self, parsed: ParsedGraph, source: str, bags_file: Optional[str]) -> BagFamily:
        g = parsed.graph
        if source == "pmcs":
            return BagFamily.from_pmcs(g)
        if source == "completed":
            family, trace = completed_bag_family(BipartiteGraph.from_graph(g, parsed.side1))
            self.metrics.count("completion_steps", len(trace))
            return family
        if source == "file":
            if not bags_file:
                raise DomainError("--bags file needs --bags-file PATH")
            with open(bags_file) as f:
                try:
                    sets = json.load(f)
                except json.JSONDecodeError as e:
                    raise ParseError(f"bags file: {e.msg}", e.lineno) from e
            if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
                raise DomainError("bags file must hold a JSON list of vertex lists")
            return BagFamily.from_sets(g, sets)
        raise ContractViolation(f"unknown bag source '{source}', expected one of {BAG_SOURCES}")

    def solve(
        self,
        parsed: ParsedGraph,
        problem: str,
        k: int = 1,
        bags: str = "pmcs",
        bags_file: Optional[str] = None,
        d: Optional[int] = None,
        state_cap: Optional[int] = None,
        certify: bool = False,
    ) -> tuple[dict, dict]:
        g = parsed.graph
        problem_id = Problem(problem)
        cap = state_cap if state_cap is not None else self.settings.solver.state_cap
        with self.metrics.time("solve"):
            if bags == "completed":
                depth = d if d is not None else self.settings.solver.default_d
                bg = BipartiteGraph.from_graph(g, parsed.side1)
                result: SolveResult = solve_on_completed(bg, problem_id, depth, k=k, state_cap=cap)
            else:
                family = self._bags(parsed, bags, bags_file)
                self.metrics.count("bags", len(family))
                result = solve(g, problem_id, family, k=k, state_cap=cap)
        self.metrics.count("blocks", result.blocks)
        invariants: dict[str, Any] = {}
        if certify:
            with self.metrics.time("certify"):
                invariants = certify_solve(g, result, self.settings)
        return result.to_dict(), invariants

    def params(self, parsed: ParsedGraph) -> dict[str, Any]:
        g = parsed.graph
        caps = self.settings.caps
        with self.metrics.time("params"):
            return {
                "n": g.n,
                "m": g.num_edges,
                "clique_number": _clique_number_or_none(g),
                "degeneracy": degeneracy(g),
                "treewidth": treewidth(g) if g.n <= caps.params_treewidth_max_n else None,
                "treedepth": treedepth(g) if g.n <= caps.params_treedepth_max_n else None,
            }

    def verify(self, parsed: ParsedGraph, d: int = 2) -> dict[str, Any]:
        with self.metrics.time("verify"):
            return verify_graph(parsed.graph, self.settings, parsed.side1, d)

    def gen(self, kind: str, n: int, seed: int, k: int = 2) -> tuple[dict[str, Any], str]:
        with self.metrics.time("generate"):
            fixture = gen_fixture(FixtureKind(kind), n, seed, k=k, settings=self.settings.generation)
        text = format_edge_list(fixture.graph, fixture.side1)
        result = {
            "kind": fixture.kind.value,
            "n": fixture.graph.n,
            "m": fixture.graph.num_edges,
            "seed": seed,
            "tags": list(fixture.tags),
        }
        return result, text
