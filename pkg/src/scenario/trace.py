"""JSONL trace serialization.

Lines are assembled field by field so key order and number formatting are
fixed: times with 6 decimals, other floats rounded to 3.
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

from src.engine.timing import format_micros
from src.error_handling import TraceIoError
from src.events import ALL_KINDS, TraceBus, TraceRecord
from src.utils.logging import get_logger

logger = get_logger(__name__)

SUBJECT_FIELDS = ("dag", "task", "flow", "node", "link")
TIME_KEYS = frozenset({"duration"})


def _fixed(value: Any, key: Optional[str] = None) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return round(value, 6 if key in TIME_KEYS else 3)
    if isinstance(value, dict):
        return {k: _fixed(v, k) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fixed(v, key) for v in value]
    return str(value)


def _dumps(value: Any) -> str:
    return json.dumps(value, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def format_record(record: TraceRecord) -> str:
    parts = [f'"t":{format_micros(record.t_us)}', f'"kind":{_dumps(record.kind)}']
    for name in SUBJECT_FIELDS:
        value = getattr(record, name)
        if value is not None:
            parts.append(f'"{name}":{_dumps(value)}')
    if record.detail:
        parts.append(f'"detail":{_dumps(_fixed(record.detail))}')
    return "{" + ",".join(parts) + "}"


def emit_trace(records: Iterable[TraceRecord]) -> Iterator[str]:
    """One line per record, in engine order, LF-terminated."""
    for record in records:
        yield format_record(record) + "\n"


def format_header(header: Dict[str, Any]) -> str:
    return _dumps(_fixed(header)) + "\n"


class JsonlTraceWriter:
    """Bus subscriber streaming records to a UTF-8 JSONL file.

    Usage:
        with JsonlTraceWriter(path, header) as writer:
            writer.attach(bus)
            ...
    """

    def __init__(self, path: Union[str, Path], header: Optional[Dict[str, Any]] = None):
        self.path = Path(path)
        self.header = header
        self.lines = 0
        self._file = None

    def __enter__(self) -> "JsonlTraceWriter":
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._file = self.path.open("w", encoding="utf-8", newline="\n")
            if self.header is not None:
                self._file.write(format_header(self.header))
        except OSError as e:
            raise TraceIoError(f"cannot open trace {self.path}: {e.strerror}", {"path": str(self.path)}) from None
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None
        logger.debug("Trace closed", extra={"path": str(self.path), "lines": self.lines})

    def attach(self, bus: TraceBus) -> None:
        bus.subscribe(ALL_KINDS, self)

    def __call__(self, record: TraceRecord) -> None:
        try:
            self._file.write(format_record(record) + "\n")
        except (OSError, AttributeError) as e:
            raise TraceIoError(f"cannot write trace {self.path}: {e}", {"path": str(self.path)}) from None
        self.lines += 1


def read_trace(path: Union[str, Path]) -> List[Dict[str, Any]]:
    """Parsed trace lines, header included."""
    try:
        with Path(path).open(encoding="utf-8") as handle:
            return [json.loads(line) for line in handle if line.strip()]
    except OSError as e:
        raise TraceIoError(f"cannot read trace {path}: {e.strerror}", {"path": str(path)}) from None
