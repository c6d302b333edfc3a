"""Synchronous publish/subscribe bus for engine trace records."""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from src.utils.logging import get_logger

logger = get_logger(__name__)

ALL_KINDS = "*"

TraceHandler = Callable[["TraceRecord"], None]


@dataclass(frozen=True)
class TraceRecord:
    """One observable engine event.

    ``t_us`` is the simulation clock in integer microseconds. Subject ids
    that do not apply to the kind stay None.
    """
    t_us: int
    kind: str
    dag: Optional[str] = None
    task: Optional[str] = None
    flow: Optional[str] = None
    node: Optional[str] = None
    link: Optional[str] = None
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def t(self) -> float:
        return self.t_us / 1_000_000


class TraceBus:
    """Dispatches trace records to subscribers in subscription order.

    Delivery is synchronous so subscribers observe records in engine order.
    A failing subscriber aborts the run.
    """

    def __init__(self):
        self._handlers: Dict[str, List[TraceHandler]] = {}

    def subscribe(self, kind: str, handler: TraceHandler) -> None:
        """Subscribe to one record kind, or to every kind with ``"*"``."""
        handlers = self._handlers.setdefault(kind, [])
        if handler not in handlers:
            handlers.append(handler)

    def unsubscribe(self, kind: str, handler: TraceHandler) -> None:
        if handler in self._handlers.get(kind, []):
            self._handlers[kind].remove(handler)

    on = subscribe
    off = unsubscribe

    @property
    def has_subscribers(self) -> bool:
        return any(self._handlers.values())

    def emit(self, record: TraceRecord) -> None:
        for handler in self._handlers.get(record.kind, []) + self._handlers.get(ALL_KINDS, []):
            try:
                handler(record)
            except Exception as e:
                logger.error(f"Trace subscriber failed on {record.kind}: {e}")
                raise

    def clear_handlers(self) -> None:
        self._handlers.clear()


class TraceCollector:
    """Keeps every record in memory; used by tests and report rendering."""

    def __init__(self, bus: Optional[TraceBus] = None):
        self.records: List[TraceRecord] = []
        if bus is not None:
            bus.subscribe(ALL_KINDS, self)

    def __call__(self, record: TraceRecord) -> None:
        self.records.append(record)

    def kinds(self) -> List[str]:
        return [r.kind for r in self.records]

    def of_kind(self, kind: str) -> List[TraceRecord]:
        return [r for r in self.records if r.kind == kind]
