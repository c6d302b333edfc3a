"""Scheduler interface and the two placement rules that need no cost model."""
from abc import ABC, abstractmethod
from itertools import cycle
from typing import Dict, Optional

from src.error_handling import UnpinnedTask
from src.models.dag import DagSpec
from src.models.snapshot import NetworkSnapshot, PlacementPlan
from src.routing.routes import RoutingModel, get_routing_model
from src.utils.logging import get_logger

logger = get_logger(__name__)


class Scheduler(ABC):
    """Maps the tasks of a DAG onto nodes.

    Schedulers only ever see a ``NetworkSnapshot``; conflict graphs and
    interference factors are not part of their input.
    """

    name: str = ""

    def __init__(self, routing: Optional[RoutingModel] = None):
        self.routing = routing or get_routing_model("widest_path")

    @abstractmethod
    def schedule(self, dag: DagSpec, snapshot: NetworkSnapshot) -> PlacementPlan:
        """Return a total placement for ``dag``."""


def schedule_manual(dag: DagSpec, snapshot: NetworkSnapshot) -> PlacementPlan:
    """Place every task on its pinned node."""
    unpinned = [t.id for t in dag.tasks if t.pinned_to is None]
    if unpinned:
        raise UnpinnedTask(
            f"manual scheduling of DAG {dag.id} needs pins for {unpinned}",
            details={"dag": dag.id, "tasks": unpinned},
        )
    return PlacementPlan.from_mapping(dag, {t.id: t.pinned_to for t in dag.tasks})


def schedule_round_robin(dag: DagSpec, snapshot: NetworkSnapshot) -> PlacementPlan:
    """Cycle unpinned tasks over nodes in declaration order; pins do not advance the cycle."""
    nodes = cycle(snapshot.node_ids)
    mapping: Dict[str, str] = {}
    for task in dag.tasks:
        mapping[task.id] = task.pinned_to if task.pinned_to is not None else next(nodes)
    return PlacementPlan.from_mapping(dag, mapping)


class ManualScheduler(Scheduler):
    name = "manual"

    def schedule(self, dag: DagSpec, snapshot: NetworkSnapshot) -> PlacementPlan:
        return schedule_manual(dag, snapshot)


class RoundRobinScheduler(Scheduler):
    name = "round_robin"

    def schedule(self, dag: DagSpec, snapshot: NetworkSnapshot) -> PlacementPlan:
        return schedule_round_robin(dag, snapshot)
