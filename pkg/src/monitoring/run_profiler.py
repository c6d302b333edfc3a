"""Wall clock and memory accounting for engine runs."""
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import psutil

from src.utils.logging import get_logger

logger = get_logger(__name__)

MB = 1024 * 1024


@dataclass
class RunMetrics:
    """Resource usage of one run."""
    label: str = ""
    wall_clock_s: float = 0.0
    cpu_s: float = 0.0
    rss_mb: float = 0.0
    rss_delta_mb: float = 0.0
    started_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "wall_clock_s": self.wall_clock_s,
            "cpu_s": self.cpu_s,
            "rss_mb": self.rss_mb,
            "rss_delta_mb": self.rss_delta_mb,
            "started_at": self.started_at.isoformat(),
        }


class RunProfiler:
    """Context manager filling a ``RunMetrics`` for the enclosed block.

    Usage:
        with RunProfiler("cell-3") as profiler:
            simulator.run()
        profiler.metrics.wall_clock_s
    """

    def __init__(self, label: str = "", process: Optional[psutil.Process] = None):
        self.metrics = RunMetrics(label=label)
        self._process = process or psutil.Process()
        self._start = 0.0
        self._cpu_start = 0.0
        self._rss_start = 0

    def _cpu(self) -> float:
        times = self._process.cpu_times()
        return times.user + times.system

    def __enter__(self) -> "RunProfiler":
        self._rss_start = self._process.memory_info().rss
        self._cpu_start = self._cpu()
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.metrics.wall_clock_s = time.perf_counter() - self._start
        self.metrics.cpu_s = self._cpu() - self._cpu_start
        rss = self._process.memory_info().rss
        self.metrics.rss_mb = rss / MB
        self.metrics.rss_delta_mb = (rss - self._rss_start) / MB
        logger.debug("Run profiled", extra=self.metrics.to_dict())
