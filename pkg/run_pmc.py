#!/usr/bin/env python3
"""
pmc-sparse - command-line entry point.
One subcommand per pipeline stage; every run prints a JSON RunReport on stdout.
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Any, Optional

from rich.console import Console
from rich.table import Table

from core.config import Settings, load_config
from core.errors import ContractViolation, DomainError, InvariantViolation
from core.graph_io import FORMATS
from core.orchestrator import BAG_SOURCES, ENUMERATE_TARGETS, PmcOrchestrator, RunReport
from eval.bench import bench, format_report, write_csv, write_json
from eval.fixtures import FixtureKind
from solvers.block_dp import Problem
from utils.logging import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INVARIANT = 2

INPUT_FREE = ("gen", "bench")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph file")
    common.add_argument("--format", choices=FORMATS, default="edgelist")
    common.add_argument("--config", help="alternate YAML settings file")
    common.add_argument("--seed", type=int, default=0)
    output = common.add_mutually_exclusive_group()
    output.add_argument("--json", dest="pretty", action="store_false", help="JSON report (default)")
    output.add_argument("--pretty", dest="pretty", action="store_true", help="rich table")
    common.set_defaults(pretty=False)
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")

    parser = argparse.ArgumentParser(
        prog="pmc-sparse",
        description="Potential maximal clique toolkit for sparse induced subgraphs of P7-free graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", parents=[common], help="class membership and witnesses")
    p.add_argument("--t", type=int, default=7, help="forbidden induced path length")

    p = sub.add_parser("color", parents=[common], help="level coloring of a P_t-free graph")
    p.add_argument("--t", type=int, default=7)

    p = sub.add_parser("enumerate", parents=[common], help="separators, PMCs, covers, structures")
    p.add_argument("--what", choices=ENUMERATE_TARGETS, default="separators")
    p.add_argument("--d", type=int, default=2, help="depth bound for structures")

    p = sub.add_parser("complete-bipartite", parents=[common], help="chordal bipartite completion")
    p.add_argument("--check-invariants", action="store_true")

    p = sub.add_parser("solve", parents=[common], help="max-weight sparse induced subgraph")
    p.add_argument("--problem", choices=[x.value for x in Problem], default=None)
    p.add_argument("--k", type=int, default=None, help="degree bound for maxdeg")
    p.add_argument("--bags", choices=BAG_SOURCES, default="pmcs")
    p.add_argument("--bags-file", help="JSON list of bags for --bags file")
    p.add_argument("--d", type=int, default=None, help="treedepth bound for --bags completed")
    p.add_argument("--state-cap", type=int, default=None)
    p.add_argument("--certify", action="store_true", help="compare with the exhaustive oracle")

    sub.add_parser("params", parents=[common], help="clique number, degeneracy, widths")

    p = sub.add_parser("verify", parents=[common], help="oracle and invariant suites")
    p.add_argument("--d", type=int, default=2)

    p = sub.add_parser("gen", parents=[common], help="seeded fixture")
    p.add_argument("--kind", choices=[k.value for k in FixtureKind], default="p7free_bipartite")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--k", type=int, default=2, help="clique bound for p7free_bounded_omega")
    p.add_argument("--output", help="write the edge list here")

    p = sub.add_parser("bench", parents=[common], help="benchmark a corpus directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--budget", type=float, default=None, help="seconds")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output-dir", default=None)
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = load_config(args.config)
    if args.command == "bench":
        bench_cfg = settings.bench
        if args.workers is not None:
            bench_cfg = dataclasses.replace(bench_cfg, workers=args.workers)
        if args.output_dir is not None:
            bench_cfg = dataclasses.replace(bench_cfg, output_dir=args.output_dir)
        settings = dataclasses.replace(settings, bench=bench_cfg)
    return settings


def run(args: argparse.Namespace, settings: Settings) -> list[RunReport]:
    orchestrator = PmcOrchestrator(settings)
    command = args.command

    if command == "bench":
        reports = list(bench(args.corpus, args.budget, settings))
        out = Path(settings.bench.output_dir)
        write_csv(reports, str(out / "bench.csv"))
        write_json(reports, str(out / "bench.json"))
        return reports

    if command == "gen":
        result, text = orchestrator.gen(args.kind, args.n, args.seed, k=args.k)
        if args.output:
            Path(args.output).write_text(text)
            result["output"] = args.output
        else:
            result["edge_list"] = text
        return [orchestrator.report(command, None, result)]

    if not args.input:
        raise DomainError(f"{command} needs --input PATH")
    parsed, digest = orchestrator.load(args.input, args.format)
    invariants: dict[str, Any] = {}
    if command == "recognize":
        result = orchestrator.recognize(parsed, args.t)
    elif command == "color":
        result = orchestrator.color(parsed, args.t)
    elif command == "enumerate":
        result = orchestrator.enumerate(parsed, args.what, args.d)
    elif command == "complete-bipartite":
        result, invariants = orchestrator.complete_bipartite(parsed, args.check_invariants)
    elif command == "solve":
        solver_cfg = settings.solver
        result, invariants = orchestrator.solve(
            parsed,
            args.problem or solver_cfg.default_problem,
            k=args.k if args.k is not None else solver_cfg.default_k,
            bags=args.bags,
            bags_file=args.bags_file,
            d=args.d,
            state_cap=args.state_cap,
            certify=args.certify,
        )
    elif command == "params":
        result = orchestrator.params(parsed)
    elif command == "verify":
        result = orchestrator.verify(parsed, args.d)
    else:
        raise ContractViolation(f"unknown subcommand {command}")
    return [orchestrator.report(command, digest, result, invariants)]


def _scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def render_pretty(reports: list[RunReport], console: Console) -> None:
    """Rich table of the scalar result fields; nested payloads stay in the JSON output."""
    if reports and reports[0].subcommand == "bench":
        console.print(format_report(reports))
        return
    for report in reports:
        table = Table(title=report.subcommand)
        table.add_column("field")
        table.add_column("value", justify="right")
        for key, value in report.result.items():
            if _scalar(value):
                table.add_row(key, str(value))
        for section, payload in report.invariant_report.items():
            if _scalar(payload):
                table.add_row(section, str(payload))
        table.add_row("wall_ms", f"{report.timing['wall_ms']:.1f}")
        console.print(table)


def _emit_error(error: dict[str, Any]) -> None:
    print(json.dumps({"error": error}, indent=2, sort_keys=True))


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = _settings(args)
    setup_logging(args.log_level or settings.logging.level, settings.logging.file)

    try:
        reports = run(args, settings)
    except InvariantViolation as e:
        logger.error(f"Invariant violated: {e}")
        _emit_error(e.to_dict())
        return EXIT_INVARIANT
    except (DomainError, ContractViolation) as e:
        _emit_error(e.to_dict())
        return EXIT_DOMAIN
    except OSError as e:
        _emit_error({"kind": "io_error", "message": str(e)})
        return EXIT_DOMAIN

    if args.pretty:
        render_pretty(reports, Console())
    elif args.command == "bench":
        print(json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True))
    else:
        print(reports[0].to_json())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
