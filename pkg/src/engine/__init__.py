from src.engine.events import PRIORITY, Event, EventKind, EventQueue
from src.engine.simulator import Simulator, run_simulation
from src.engine.state import LinkUsage, RunResult, TaskTimeline, TransferHistory, TransferRecord
from src.engine.timing import format_micros, from_micros, round_time, to_micros

__all__ = [
    "PRIORITY",
    "Event",
    "EventKind",
    "EventQueue",
    "LinkUsage",
    "RunResult",
    "Simulator",
    "TaskTimeline",
    "TransferHistory",
    "TransferRecord",
    "format_micros",
    "from_micros",
    "round_time",
    "run_simulation",
    "to_micros",
]
