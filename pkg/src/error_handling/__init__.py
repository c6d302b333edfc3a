from src.error_handling.errors import (
    EXIT_ACCEPTANCE,
    EXIT_PARSE,
    EXIT_RUNTIME,
    AcceptanceMismatch,
    CyclicDag,
    Deadlock,
    DuplicateId,
    IllegalTransition,
    IncompleteGrid,
    MissingPosition,
    NcsimError,
    NoConvergence,
    NonPositiveDistance,
    NonQuiescent,
    NoRoute,
    ParseError,
    ScenarioInputError,
    ScenarioValidationError,
    SchemaError,
    TraceIoError,
    UnknownNodeReference,
    UnpinnedTask,
)

__all__ = [
    "EXIT_ACCEPTANCE",
    "EXIT_PARSE",
    "EXIT_RUNTIME",
    "AcceptanceMismatch",
    "CyclicDag",
    "Deadlock",
    "DuplicateId",
    "IllegalTransition",
    "IncompleteGrid",
    "MissingPosition",
    "NcsimError",
    "NoConvergence",
    "NonPositiveDistance",
    "NonQuiescent",
    "NoRoute",
    "ParseError",
    "ScenarioInputError",
    "ScenarioValidationError",
    "SchemaError",
    "TraceIoError",
    "UnknownNodeReference",
    "UnpinnedTask",
]
