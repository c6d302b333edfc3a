"""Experiment result containers."""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from src.error_handling import AcceptanceMismatch


@dataclass
class ExperimentPoint:
    """One grid point: an analytical prediction against a simulated value."""
    params: Dict[str, Any]
    quantity: str
    simulated: float
    predicted: Optional[float] = None
    tolerance: Optional[float] = None

    @property
    def abs_error(self) -> Optional[float]:
        if self.predicted is None:
            return None
        return abs(self.simulated - self.predicted)

    @property
    def rel_error(self) -> Optional[float]:
        if self.predicted is None or self.predicted == 0:
            return None
        return self.abs_error / abs(self.predicted)

    @property
    def passed(self) -> bool:
        if self.predicted is None or self.tolerance is None:
            return True
        return self.abs_error <= self.tolerance

    def to_row(self) -> Dict[str, Any]:
        return {
            **self.params,
            "quantity": self.quantity,
            "predicted": self.predicted,
            "simulated": self.simulated,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class FactorialCell:
    network: str
    dag: str
    routing: str
    scheduler: str
    interference: str
    makespan: float
    plan: str = ""
    data_size: Optional[float] = None
    mean_hops: Optional[float] = None
    links_used: Optional[int] = None
    error: Optional[str] = None
    wall_clock_s: float = 0.0
    rss_mb: float = 0.0

    @property
    def triple(self):
        return (self.network, self.dag, self.routing)

    def to_row(self, timing: bool = False) -> Dict[str, Any]:
        row = asdict(self)
        if not timing:
            row.pop("wall_clock_s")
            row.pop("rss_mb")
        return row


@dataclass
class ExperimentResult:
    """Points, property checks and optional per-run cells of one experiment."""
    name: str
    points: List[ExperimentPoint] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    cells: List[FactorialCell] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.points) and all(self.checks.values())

    @property
    def failures(self) -> List[str]:
        failed = [f"{p.quantity} at {p.params}" for p in self.points if not p.passed]
        return failed + [name for name, ok in self.checks.items() if not ok]

    def points_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.to_row() for p in self.points])

    def cells_frame(self, timing: bool = False) -> pd.DataFrame:
        return pd.DataFrame([c.to_row(timing) for c in self.cells])

    def point(self, quantity: str, **params) -> ExperimentPoint:
        for p in self.points:
            if p.quantity == quantity and all(p.params.get(k) == v for k, v in params.items()):
                return p
        raise KeyError(f"{quantity} {params}")

    def raise_on_mismatch(self) -> None:
        if not self.passed:
            raise AcceptanceMismatch(
                f"experiment {self.name} missed {len(self.failures)} tolerance(s)",
                details={"experiment": self.name, "failures": self.failures},
            )
