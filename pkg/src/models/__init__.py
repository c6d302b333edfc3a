from src.models.dag import DagEdge, DagSpec, TaskEvent, TaskSpec, TaskState, transition_task
from src.models.network import LinkKey, LinkSpec, Network, NodeSpec, Position, expand_undirected
from src.models.snapshot import NetworkSnapshot, PlacementPlan
from src.models.validation import ValidatedModel, collect_violations, validate_scenario

__all__ = [
    "DagEdge",
    "DagSpec",
    "LinkKey",
    "LinkSpec",
    "Network",
    "NetworkSnapshot",
    "NodeSpec",
    "PlacementPlan",
    "Position",
    "TaskEvent",
    "TaskSpec",
    "TaskState",
    "ValidatedModel",
    "collect_violations",
    "expand_undirected",
    "transition_task",
    "validate_scenario",
]
