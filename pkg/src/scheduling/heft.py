"""Heterogeneous Earliest Finish Time list scheduling.

Shared machinery for HEFT and CPOP: mean costs over the virtual network,
upward/downward ranks, and insertion-based earliest-finish-time placement.
"""
from bisect import insort
from itertools import permutations
from typing import Dict, List, Mapping, Optional, Tuple

from src.models.dag import DagEdge, DagSpec
from src.models.snapshot import NetworkSnapshot, PlacementPlan
from src.scheduling.base import Scheduler
from src.scheduling.virtual_network import VirtualNetwork, build_virtual_network
from src.utils.logging import get_logger

logger = get_logger(__name__)

TIME_EPSILON = 1e-9


def mean_exec_time(dag: DagSpec, vnet: VirtualNetwork) -> Dict[str, float]:
    return {
        t.id: sum(vnet.exec_time(t.compute_cost, v) for v in vnet.node_ids) / len(vnet.node_ids)
        for t in dag.tasks
    }


def mean_comm_cost(edge: DagEdge, vnet: VirtualNetwork) -> float:
    """Average transfer estimate over all ordered pairs of distinct nodes."""
    pairs = list(permutations(vnet.node_ids, 2))
    if not pairs or edge.data_size == 0:
        return 0.0
    return sum(vnet.comm_cost(edge.data_size, u, v) for u, v in pairs) / len(pairs)


def upward_ranks(dag: DagSpec, vnet: VirtualNetwork) -> Dict[str, float]:
    w = mean_exec_time(dag, vnet)
    ranks: Dict[str, float] = {}
    for task_id in reversed(dag.topological_order()):
        tail = max((mean_comm_cost(e, vnet) + ranks[e.dst_task] for e in dag.out_edges(task_id)), default=0.0)
        ranks[task_id] = w[task_id] + tail
    return ranks


def downward_ranks(dag: DagSpec, vnet: VirtualNetwork) -> Dict[str, float]:
    w = mean_exec_time(dag, vnet)
    ranks: Dict[str, float] = {}
    for task_id in dag.topological_order():
        ranks[task_id] = max(
            (ranks[e.src_task] + w[e.src_task] + mean_comm_cost(e, vnet) for e in dag.in_edges(task_id)),
            default=0.0,
        )
    return ranks


class NodeTimeline:
    """Busy intervals per node, kept sorted by start time."""

    def __init__(self, node_ids):
        self.slots: Dict[str, List[Tuple[float, float, str]]] = {v: [] for v in node_ids}

    def earliest_start(self, node: str, ready: float, duration: float) -> float:
        """First gap on ``node`` at or after ``ready`` that fits ``duration``."""
        prev_end = 0.0
        for start, finish, _ in self.slots[node]:
            candidate = max(prev_end, ready)
            if candidate + duration <= start + TIME_EPSILON:
                return candidate
            prev_end = max(prev_end, finish)
        return max(prev_end, ready)

    def reserve(self, node: str, start: float, finish: float, task_id: str) -> None:
        insort(self.slots[node], (start, finish, task_id))


class ListSchedule:
    """Incremental placement state for one DAG."""

    def __init__(self, dag: DagSpec, vnet: VirtualNetwork):
        self.dag = dag
        self.vnet = vnet
        self.timeline = NodeTimeline(vnet.node_ids)
        self.placement: Dict[str, str] = {}
        self.finish: Dict[str, float] = {}

    def data_ready(self, task_id: str, node: str) -> float:
        return max(
            (
                self.finish[e.src_task] + self.vnet.comm_cost(e.data_size, self.placement[e.src_task], node)
                for e in self.dag.in_edges(task_id)
            ),
            default=0.0,
        )

    def finish_on(self, task_id: str, node: str) -> Tuple[float, float]:
        duration = self.vnet.exec_time(self.dag.task(task_id).compute_cost, node)
        start = self.timeline.earliest_start(node, self.data_ready(task_id, node), duration)
        return start, start + duration

    def place(self, task_id: str, node: Optional[str] = None) -> str:
        """Place on ``node`` or, if None, on the node with the earliest finish.

        Equal finish times keep the earlier-declared node.
        """
        pinned = self.dag.task(task_id).pinned_to
        candidates = [node or pinned] if (node or pinned) else list(self.vnet.node_ids)
        best = None
        for candidate in candidates:
            start, finish = self.finish_on(task_id, candidate)
            if best is None or finish < best[2] - TIME_EPSILON:
                best = (candidate, start, finish)
        chosen, start, finish = best
        self.timeline.reserve(chosen, start, finish, task_id)
        self.placement[task_id] = chosen
        self.finish[task_id] = finish
        return chosen

    @property
    def makespan(self) -> float:
        return max(self.finish.values(), default=0.0)


def schedule_heft(dag: DagSpec, vnet: VirtualNetwork) -> PlacementPlan:
    """HEFT: nonincreasing upward rank, ties by task id, insertion-based EFT."""
    ranks = upward_ranks(dag, vnet)
    order = sorted(dag.task_ids, key=lambda t: (-ranks[t], t))
    state = ListSchedule(dag, vnet)
    for task_id in order:
        state.place(task_id)
    logger.debug("HEFT plan", extra={"dag": dag.id, "estimated_makespan": state.makespan})
    return PlacementPlan.from_mapping(dag, state.placement)


class HeftScheduler(Scheduler):
    name = "heft"

    def schedule(self, dag: DagSpec, snapshot: NetworkSnapshot) -> PlacementPlan:
        return schedule_heft(dag, build_virtual_network(snapshot, self.routing))


def estimate_makespan(dag: DagSpec, vnet: VirtualNetwork, plan: Mapping[str, str]) -> float:
    """List-schedule a fixed placement in upward-rank order and return its estimate."""
    ranks = upward_ranks(dag, vnet)
    state = ListSchedule(dag, vnet)
    for task_id in sorted(dag.task_ids, key=lambda t: (-ranks[t], t)):
        state.place(task_id, plan[task_id])
    return state.makespan
