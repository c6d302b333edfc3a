"""Engine events and the lazily-cancelling event heap."""
import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple


class EventKind(str, Enum):
    DAG_INJECT = "dag_inject"
    TASK_COMPLETE = "task_complete"
    TRANSFER_COMPLETE = "transfer_complete"
    TASK_READY = "task_ready"
    TASK_START = "task_start"
    TRANSFER_START = "transfer_start"


# Completions before starts at equal time.
PRIORITY = {
    EventKind.DAG_INJECT: 0,
    EventKind.TASK_COMPLETE: 1,
    EventKind.TRANSFER_COMPLETE: 2,
    EventKind.TASK_READY: 3,
    EventKind.TASK_START: 4,
    EventKind.TRANSFER_START: 5,
}


@dataclass
class Event:
    time_us: int
    kind: EventKind
    seq: int
    dag: Optional[str] = None
    task: Optional[str] = None
    flow: Optional[str] = None
    cancelled: bool = False
    order_key: Tuple[str, ...] = field(default=())

    @property
    def sort_key(self) -> Tuple:
        return (self.time_us, PRIORITY[self.kind], self.order_key, self.seq)


class EventQueue:
    """Min-heap ordered by (time, kind priority, order key, sequence)."""

    def __init__(self):
        self._heap: List[Tuple[Tuple, Event]] = []
        self._seq = 0
        self._live = 0

    def push(self, time_us: int, kind: EventKind, **ids) -> Event:
        # Equal-time readiness is ordered by (dag id, task id).
        order_key = (ids.get("dag") or "", ids.get("task") or "") if kind is EventKind.TASK_READY else ()
        event = Event(time_us, kind, self._seq, order_key=order_key, **ids)
        self._seq += 1
        self._live += 1
        heapq.heappush(self._heap, (event.sort_key, event))
        return event

    def cancel(self, event: Event) -> None:
        if not event.cancelled:
            event.cancelled = True
            self._live -= 1

    def pop(self) -> Optional[Event]:
        """Next live event, discarding cancelled ones at the head."""
        while self._heap:
            _, event = heapq.heappop(self._heap)
            if not event.cancelled:
                self._live -= 1
                return event
        return None

    def __len__(self) -> int:
        return self._live
