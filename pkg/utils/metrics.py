"""
Metrics Tracker
Aggregates counters and stage timings for one pipeline run.
"""

import time
from collections import defaultdict
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any


class MetricsTracker:
    """
    Centralized tracking of run metrics.

    Counters accumulate (separators found, completion steps, DP blocks ...),
    timings are wall-clock milliseconds per named stage.
    """

    def __init__(self):
        self.counters: dict[str, int] = defaultdict(int)
        self.timings_ms: dict[str, float] = defaultdict(float)
        self.values: dict[str, Any] = {}

    def count(self, name: str, k: int = 1) -> None:
        self.counters[name] += k

    def record(self, name: str, value: Any) -> None:
        self.values[name] = value

    @contextmanager
    def time(self, stage: str) -> Iterator[None]:
        """Accumulate wall time of the enclosed block under `stage`."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings_ms[stage] += (time.perf_counter() - start) * 1000.0

    def total_ms(self, exclude: tuple[str, ...] = ()) -> float:
        return sum(ms for stage, ms in self.timings_ms.items() if stage not in exclude)

    def summary(self) -> dict[str, Any]:
        """Get comprehensive metrics summary."""
        return {
            "counters": dict(sorted(self.counters.items())),
            "timings_ms": {k: round(v, 3) for k, v in sorted(self.timings_ms.items())},
            "values": dict(self.values),
        }
