"""Per-run engine records and the metrics they produce."""
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Any, Deque, Dict, List, Optional, Tuple

from src.engine.events import Event
from src.engine.timing import from_micros
from src.models.dag import TaskState
from src.models.network import LinkKey
from src.routing.routes import Route


@dataclass
class TaskRuntime:
    dag: str
    task: str
    node: str
    compute_cost: float
    pending_inputs: int
    state: TaskState = TaskState.PENDING
    ready_us: Optional[int] = None
    start_us: Optional[int] = None
    end_us: Optional[int] = None

    @property
    def qualified(self) -> str:
        return f"{self.dag}/{self.task}"


@dataclass
class NodeRuntime:
    """A node runs one task at a time; ``busy`` is set from reservation to completion."""
    busy: Optional[str] = None
    queue: Deque[str] = field(default_factory=deque)

    @property
    def depth(self) -> int:
        return len(self.queue) + (1 if self.busy else 0)


@dataclass
class RatePhase:
    start_us: int
    end_us: int
    rate: float

    @property
    def duration(self) -> float:
        return from_micros(self.end_us - self.start_us)

    @property
    def delivered(self) -> float:
        return self.rate * self.duration


@dataclass
class TransferRecord:
    """One DAG edge in flight.

    ``transferred`` is frozen whenever the rate changes, using the unrounded
    rate over the elapsed clock; only event times are rounded.
    """
    flow: str
    dag: str
    src_task: str
    dst_task: str
    src_node: str
    dst_node: str
    total: float
    route: Optional[Route] = None
    transferred: float = 0.0
    rate: Optional[float] = None
    since_us: int = 0
    start_us: int = 0
    end_us: Optional[int] = None
    # Clock at which the last byte leaves at the current rate; latency follows.
    data_end_us: Optional[int] = None
    completion: Optional[Event] = None
    phases: List[RatePhase] = field(default_factory=list)

    @property
    def remaining(self) -> float:
        return max(0.0, self.total - self.transferred)

    @property
    def colocated(self) -> bool:
        return self.route is None

    def freeze(self, now_us: int) -> None:
        """Account progress up to ``now_us`` at the current rate and close the phase."""
        if self.rate is None:
            return
        end_us = now_us if self.data_end_us is None else min(now_us, self.data_end_us)
        if end_us > self.since_us:
            self.transferred = min(self.total, self.transferred + self.rate * from_micros(end_us - self.since_us))
            self.phases.append(RatePhase(self.since_us, end_us, self.rate))
        self.since_us = max(self.since_us, now_us)


@dataclass(frozen=True)
class TaskTimeline:
    dag: str
    task: str
    node: str
    ready: float
    start: float
    end: float


@dataclass(frozen=True)
class TransferHistory:
    flow: str
    dag: str
    src_task: str
    dst_task: str
    src_node: str
    dst_node: str
    size: float
    route: Tuple[str, ...]
    start: float
    end: float
    phases: Tuple[Tuple[float, float, float], ...]

    @property
    def colocated(self) -> bool:
        return not self.route

    @property
    def delivered(self) -> float:
        """Bytes accounted over rate phases."""
        return sum(rate * (end - start) for start, end, rate in self.phases)

    @property
    def average_rate(self) -> float:
        elapsed = self.end - self.start
        return self.size / elapsed if elapsed > 0 else float("inf")

    @property
    def hops(self) -> int:
        return max(0, len(self.route) - 1)


@dataclass(frozen=True)
class LinkUsage:
    flows: int
    busy_time: float


@dataclass
class RunResult:
    """Metrics of one engine run."""
    makespan: float
    tasks: List[TaskTimeline]
    transfers: List[TransferHistory]
    link_usage: Dict[LinkKey, LinkUsage]
    plans: Dict[str, Dict[str, str]]
    dag_makespans: Dict[str, float]
    events_processed: int
    stalled: List[str] = field(default_factory=list)

    def task(self, dag: str, task: str) -> TaskTimeline:
        for timeline in self.tasks:
            if timeline.dag == dag and timeline.task == task:
                return timeline
        raise KeyError(f"{dag}/{task}")

    def transfer(self, flow: str) -> TransferHistory:
        for history in self.transfers:
            if history.flow == flow:
                return history
        raise KeyError(flow)

    @property
    def mean_hops(self) -> float:
        routed = [t.hops for t in self.transfers if not t.colocated]
        return sum(routed) / len(routed) if routed else 0.0

    @property
    def links_used(self) -> int:
        return sum(1 for usage in self.link_usage.values() if usage.flows > 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "makespan": self.makespan,
            "dag_makespans": dict(self.dag_makespans),
            "events_processed": self.events_processed,
            "tasks": [asdict(t) for t in self.tasks],
            "transfers": [asdict(t) for t in self.transfers],
            "link_usage": {f"{k[0]}->{k[1]}": asdict(v) for k, v in self.link_usage.items()},
            "plans": {dag: dict(plan) for dag, plan in self.plans.items()},
            "stalled": list(self.stalled),
        }
