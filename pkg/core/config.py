"""
Settings loaded from config/defaults.yaml.
"""

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

import yaml

from utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "config" / "defaults.yaml"


@dataclass(frozen=True)
class CapsSettings:
    certify_max_n: int = 14
    params_treedepth_max_n: int = 14
    params_treewidth_max_n: int = 64
    verify_structures_max_n: int = 8


@dataclass(frozen=True)
class PmcSettings:
    cover_cap: int = 8


@dataclass(frozen=True)
class SolverSettings:
    default_problem: str = "mwis"
    default_k: int = 1
    default_d: int = 3
    state_cap: Optional[int] = None


@dataclass(frozen=True)
class GenerationSettings:
    rejection_budget: int = 4000
    random_p: float = 0.3
    bipartite_p: float = 0.35


@dataclass(frozen=True)
class BenchSettings:
    workers: int = 1
    budget_seconds: float = 60.0
    output_dir: str = "bench_results"


@dataclass(frozen=True)
class LoggingSettings:
    level: str = "WARNING"
    file: Optional[str] = None


def _section(cls, data: Any):
    if not isinstance(data, dict):
        return cls()
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        logger.warning(f"Ignoring unknown {cls.__name__} keys: {unknown}")
    return cls(**{k: v for k, v in data.items() if k in known})


@dataclass(frozen=True)
class Settings:
    """All tunables, one frozen dataclass per YAML section."""

    caps: CapsSettings = field(default_factory=CapsSettings)
    pmc: PmcSettings = field(default_factory=PmcSettings)
    solver: SolverSettings = field(default_factory=SolverSettings)
    generation: GenerationSettings = field(default_factory=GenerationSettings)
    bench: BenchSettings = field(default_factory=BenchSettings)
    logging: LoggingSettings = field(default_factory=LoggingSettings)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Settings":
        return cls(
            caps=_section(CapsSettings, data.get("caps")),
            pmc=_section(PmcSettings, data.get("pmc")),
            solver=_section(SolverSettings, data.get("solver")),
            generation=_section(GenerationSettings, data.get("generation")),
            bench=_section(BenchSettings, data.get("bench")),
            logging=_section(LoggingSettings, data.get("logging")),
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def load_config(path: Optional[str] = None) -> Settings:
    """Load settings from YAML; falls back to built-in defaults on any problem."""
    config_file = Path(path) if path else DEFAULT_CONFIG
    if not config_file.exists():
        logger.warning(f"Config file {config_file} not found, using defaults")
        return Settings()
    try:
        with open(config_file) as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError("top level must be a mapping")
        return Settings.from_dict(data)
    except Exception as e:
        logger.warning(f"Failed to load {config_file}: {e}; using defaults")
        return Settings()
