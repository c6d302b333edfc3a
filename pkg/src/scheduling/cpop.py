"""Critical-Path-on-a-Processor list scheduling."""
import heapq
import math
from typing import Dict, List, Set

from src.models.dag import DagSpec
from src.models.snapshot import NetworkSnapshot, PlacementPlan
from src.scheduling.base import Scheduler
from src.scheduling.heft import ListSchedule, downward_ranks, upward_ranks
from src.scheduling.virtual_network import VirtualNetwork, build_virtual_network
from src.utils.logging import get_logger

logger = get_logger(__name__)


def task_priorities(dag: DagSpec, vnet: VirtualNetwork) -> Dict[str, float]:
    up = upward_ranks(dag, vnet)
    down = downward_ranks(dag, vnet)
    return {t: up[t] + down[t] for t in dag.task_ids}


def critical_path(dag: DagSpec, priorities: Dict[str, float]) -> List[str]:
    """Walk from the highest-priority entry task along successors that keep |CP|."""
    entry = min(dag.entry_tasks, key=lambda t: (-priorities[t], t))
    cp_length = priorities[entry]
    path = [entry]
    current = entry
    while dag.successors(current):
        on_path = sorted(
            s for s in dag.successors(current)
            if math.isclose(priorities[s], cp_length, rel_tol=1e-9, abs_tol=1e-9)
        )
        if not on_path:
            # float drift; fall back to the best successor
            on_path = [min(dag.successors(current), key=lambda s: (-priorities[s], s))]
        current = on_path[0]
        path.append(current)
    return path


def critical_path_node(dag: DagSpec, vnet: VirtualNetwork, path: List[str]) -> str:
    """Node minimising the summed execution time of the critical path."""
    best, best_cost = None, math.inf
    for node in vnet.node_ids:
        cost = sum(vnet.exec_time(dag.task(t).compute_cost, node) for t in path)
        if cost < best_cost - 1e-12:
            best, best_cost = node, cost
    return best


def schedule_cpop(dag: DagSpec, vnet: VirtualNetwork) -> PlacementPlan:
    priorities = task_priorities(dag, vnet)
    path = critical_path(dag, priorities)
    on_path: Set[str] = set(path)
    cp_node = critical_path_node(dag, vnet, path)

    state = ListSchedule(dag, vnet)
    waiting = {t: len(dag.predecessors(t)) for t in dag.task_ids}
    ready = [(-priorities[t], t) for t in dag.entry_tasks]
    heapq.heapify(ready)
    while ready:
        _, task_id = heapq.heappop(ready)
        if task_id in on_path and dag.task(task_id).pinned_to is None:
            state.place(task_id, cp_node)
        else:
            state.place(task_id)
        for succ in dag.successors(task_id):
            waiting[succ] -= 1
            if waiting[succ] == 0:
                heapq.heappush(ready, (-priorities[succ], succ))

    logger.debug(
        "CPOP plan",
        extra={"dag": dag.id, "critical_path": path, "cp_node": cp_node, "estimated_makespan": state.makespan},
    )
    return PlacementPlan.from_mapping(dag, state.placement)


class CpopScheduler(Scheduler):
    name = "cpop"

    def schedule(self, dag: DagSpec, snapshot: NetworkSnapshot) -> PlacementPlan:
        return schedule_cpop(dag, build_virtual_network(snapshot, self.routing))
