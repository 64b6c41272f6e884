"""
Corpus benchmark.
Runs enumeration, completion and MWIS on every graph file of a directory and emits one
RunReport per instance, in filename order.
"""

import csv
import json
import time
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from pathlib import Path
from typing import Any, Optional

from core.config import Settings
from core.errors import PmcError
from core.orchestrator import PmcOrchestrator, RunReport
from structure.recognition import is_bipartite, is_pt_free
from utils.logging import get_logger

logger = get_logger(__name__)

DIMACS_SUFFIXES = (".dimacs", ".col")
CSV_COLUMNS = [
    "instance",
    "n",
    "m",
    "separators",
    "pmcs",
    "completion_steps",
    "completed_separators",
    "mwis_weight",
    "parse_ms",
    "enumerate_ms",
    "complete_ms",
    "solve_ms",
    "error",
]


def corpus_files(corpus_dir: str) -> list[Path]:
    root = Path(corpus_dir)
    if not root.is_dir():
        return []
    return sorted((p for p in root.iterdir() if p.is_file()), key=lambda p: p.name)


def _format_for(path: Path) -> str:
    return "dimacs" if path.suffix.lower() in DIMACS_SUFFIXES else "edgelist"


def bench_instance(path: str, settings_data: dict[str, Any]) -> dict[str, Any]:
    """
    One corpus instance in isolation. Returns the RunReport as a dict so it can cross
    a process boundary; a failure becomes an `error` entry of the result.
    """
    orchestrator = PmcOrchestrator(Settings.from_dict(settings_data))
    metrics = orchestrator.metrics
    result: dict[str, Any] = {"instance": Path(path).name}
    input_digest = None
    try:
        parsed, input_digest = orchestrator.load(path, _format_for(Path(path)))
        g = parsed.graph
        result.update(n=g.n, m=g.num_edges)
        enumerated = orchestrator.enumerate(parsed, "separators")
        result["separators"] = enumerated["count"]
        result["pmcs"] = orchestrator.enumerate(parsed, "pmcs")["count"]
        if is_bipartite(g) and is_pt_free(g, 7):
            completion, _ = orchestrator.complete_bipartite(parsed)
            result["completion_steps"] = completion["steps"]
            result["completed_separators"] = completion["final_minsep_count"]
        solved, _ = orchestrator.solve(parsed, "mwis")
        result["mwis_weight"] = solved["weight"]
    except PmcError as e:
        logger.warning(f"bench instance {path} failed: {e}")
        result["error"] = e.to_dict()
    except OSError as e:
        result["error"] = {"kind": "io_error", "message": str(e)}
    timings = metrics.summary()["timings_ms"]
    result["stage_ms"] = {
        "enumerate": round(
            timings.get("enumerate_separators", 0.0) + timings.get("enumerate_pmcs", 0.0), 3
        ),
        "complete": round(timings.get("complete", 0.0) + timings.get("enumerate_completed", 0.0), 3),
        "solve": timings.get("solve", 0.0),
    }
    return orchestrator.report("bench", input_digest, result).to_dict()


def _skipped(path: Path) -> RunReport:
    return RunReport(
        subcommand="bench",
        input_digest=None,
        timing={"parse_ms": 0.0, "wall_ms": 0.0},
        result={"instance": path.name, "error": {"kind": "budget_exhausted", "message": "skipped"}},
    )


def bench(
    corpus_dir: str, budget: Optional[float] = None, settings: Optional[Settings] = None
) -> Iterator[RunReport]:
    """
    Yield one report per corpus file. Instances not started before the budget (seconds)
    runs out are reported as skipped; an empty or missing corpus yields nothing.
    """
    settings = settings or Settings()
    budget = budget if budget is not None else settings.bench.budget_seconds
    files = corpus_files(corpus_dir)
    if not files:
        return
    data = settings.to_dict()
    deadline = time.monotonic() + budget
    logger.info(f"Benchmarking {len(files)} instances from {corpus_dir}")

    if settings.bench.workers <= 1:
        for path in files:
            if time.monotonic() > deadline:
                yield _skipped(path)
                continue
            yield RunReport.from_dict(bench_instance(str(path), data))
        return

    # futures are consumed in submission order so output stays in filename order
    with ProcessPoolExecutor(max_workers=settings.bench.workers) as pool:
        futures = [pool.submit(bench_instance, str(path), data) for path in files]
        for path, future in zip(files, futures):
            remaining = deadline - time.monotonic()
            if remaining <= 0 and not future.done():
                future.cancel()
                yield _skipped(path)
                continue
            try:
                yield RunReport.from_dict(future.result(timeout=max(remaining, 0.0)))
            except FutureTimeout:
                future.cancel()
                yield _skipped(path)


# =============================================================================
# Emitters
# =============================================================================


def csv_row(report: RunReport) -> dict[str, Any]:
    r = report.result
    stages = r.get("stage_ms", {})
    error = r.get("error")
    return {
        "instance": r.get("instance"),
        "n": r.get("n"),
        "m": r.get("m"),
        "separators": r.get("separators"),
        "pmcs": r.get("pmcs"),
        "completion_steps": r.get("completion_steps"),
        "completed_separators": r.get("completed_separators"),
        "mwis_weight": r.get("mwis_weight"),
        "parse_ms": report.timing.get("parse_ms"),
        "enumerate_ms": stages.get("enumerate"),
        "complete_ms": stages.get("complete"),
        "solve_ms": stages.get("solve"),
        "error": error.get("kind") if error else "",
    }


def write_csv(reports: list[RunReport], path: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for report in reports:
            writer.writerow(csv_row(report))


def write_json(reports: list[RunReport], path: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump([r.to_dict() for r in reports], f, indent=2, sort_keys=True)


# =============================================================================
# Report
# =============================================================================


def separator_trend(reports: list[RunReport]) -> Optional[dict[str, Any]]:
    """
    Mean separators/(n+m) per graph size and the max/min ratio across sizes. A bounded
    ratio is consistent with separator counts growing linearly in n+m.
    """
    per_n: dict[int, list[float]] = {}
    for report in reports:
        r = report.result
        if "error" in r or "separators" not in r:
            continue
        size = r["n"] + r["m"]
        if size:
            per_n.setdefault(r["n"], []).append(r["separators"] / size)
    if len(per_n) < 2:
        return None
    means = {n: sum(v) / len(v) for n, v in sorted(per_n.items())}
    low = min(means.values())
    return {
        "per_n": {n: round(m, 4) for n, m in means.items()},
        "ratio": round(max(means.values()) / low, 4) if low else None,
    }


def format_report(reports: list[RunReport], trend_limit: float = 4.0) -> str:
    """Format benchmark results into a readable report."""
    lines = []
    lines.append("=" * 70)
    lines.append("PMC BENCHMARK REPORT")
    lines.append("=" * 70)
    lines.append("")
    failed = [r for r in reports if "error" in r.result]
    lines.append(f"Instances: {len(reports)}  (failed or skipped: {len(failed)})")
    lines.append("")

    lines.append("PER-INSTANCE")
    lines.append("-" * 70)
    lines.append(f"  {'Instance':<24} {'n':>5} {'m':>6} {'minseps':>8} {'pmcs':>8} {'ms':>10}")
    for report in reports:
        r = report.result
        if "error" in r:
            lines.append(f"  {str(r.get('instance')):<24} {r['error'].get('kind', 'error')}")
            continue
        lines.append(
            f"  {r['instance']:<24} {r['n']:>5} {r['m']:>6} {r['separators']:>8} "
            f"{r['pmcs']:>8} {report.timing['wall_ms']:>10.1f}"
        )
    lines.append("")

    trend = separator_trend(reports)
    lines.append("SEPARATOR TREND (minseps / (n+m))")
    lines.append("-" * 40)
    if trend is None:
        lines.append("  fewer than two graph sizes, no trend")
    else:
        for n, mean in trend["per_n"].items():
            lines.append(f"  n={n:<6} {mean:.4f}")
        lines.append(f"  max/min ratio: {trend['ratio']}")
    lines.append("")

    lines.append("=" * 70)
    if trend is not None and trend["ratio"] is not None:
        if trend["ratio"] <= trend_limit:
            lines.append(f"RESULT: PASS - ratio {trend['ratio']} within {trend_limit}")
        else:
            lines.append(f"RESULT: ratio {trend['ratio']} above {trend_limit}")
    else:
        lines.append("RESULT: no trend computed")
    lines.append("=" * 70)
    return "\n".join(lines)
