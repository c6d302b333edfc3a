"""Error classes for the simulator."""
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

EXIT_PARSE = 2
EXIT_RUNTIME = 3
EXIT_ACCEPTANCE = 4


class NcsimError(Exception):
    """Base class for simulator errors.

    Every error carries a machine-readable ``details`` mapping and the CLI exit
    code it maps to. Callers log at the point where the error is handled.
    """

    exit_code = EXIT_RUNTIME

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error_code: Optional[str] = None,
    ):
        """Initialize simulator error.

        Args:
            message: Error message
            details: Additional error details
            error_code: Optional error code override
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.timestamp = datetime.now(timezone.utc)
        self.error_type = self.__class__.__name__
        self.error_code = error_code or f"ERR_{self.exit_code}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "message": self.message,
            "error_type": self.error_type,
            "error_code": self.error_code,
            "details": self.details,
            "timestamp": self.timestamp.isoformat(),
        }


# Scenario input errors (exit 2)

class ScenarioInputError(NcsimError):
    """Raised when a scenario cannot be accepted as input."""
    exit_code = EXIT_PARSE


class ParseError(ScenarioInputError):
    """Raised when a scenario document is not well-formed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}", details={"line": line, "column": column})


class SchemaError(ScenarioInputError):
    """Raised when a scenario field is missing, unknown or has a bad value."""

    def __init__(self, message: str, key: str, details: Optional[Dict[str, Any]] = None):
        self.key = key
        super().__init__(f"{key}: {message}", details={"key": key, **(details or {})})


class CyclicDag(ScenarioInputError):
    """Raised when a DAG's edge set contains a cycle."""


class UnknownNodeReference(ScenarioInputError):
    """Raised when a link or pin names a node that does not exist."""


class DuplicateId(ScenarioInputError):
    """Raised when node, DAG or task ids collide."""


class MissingPosition(ScenarioInputError):
    """Raised when the RF link model needs a node position that is absent."""


class NonPositiveDistance(ScenarioInputError):
    """Raised when two distinct radios share a position."""


class ScenarioValidationError(ScenarioInputError):
    """Aggregates every violation found by scenario validation."""

    def __init__(self, violations: List[NcsimError]):
        self.violations = violations
        super().__init__(
            f"{len(violations)} scenario violation(s)",
            details={"violations": [v.to_dict() for v in violations]},
        )


# Runtime errors (exit 3)

class IllegalTransition(NcsimError):
    """Raised on a task state change the lifecycle does not allow."""


class UnpinnedTask(NcsimError):
    """Raised when the manual scheduler meets a task without a pin."""


class NoRoute(NcsimError):
    """Raised when no usable path connects two nodes."""


class NoConvergence(NcsimError):
    """Raised when the collision-probability bisection fails."""


class Deadlock(NcsimError):
    """Raised when the event queue drains with tasks still incomplete."""

    def __init__(self, message: str, stuck_tasks: List[str], details: Optional[Dict[str, Any]] = None):
        self.stuck_tasks = stuck_tasks
        super().__init__(message, details={"stuck_tasks": stuck_tasks, **(details or {})})


class NonQuiescent(NcsimError):
    """Raised when a run exceeds its event cap."""


class IncompleteGrid(NcsimError):
    """Raised when regret analysis is given a partial factorial."""


class TraceIoError(NcsimError):
    """Raised when a trace cannot be written."""


# Acceptance errors (exit 4)

class AcceptanceMismatch(NcsimError):
    """Raised when an experiment misses one of its tolerances."""
    exit_code = EXIT_ACCEPTANCE
