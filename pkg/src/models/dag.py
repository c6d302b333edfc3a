"""Workflow DAG domain types and the task lifecycle."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import networkx as nx

from src.error_handling import IllegalTransition


@dataclass(frozen=True)
class TaskSpec:
    """A task with its compute cost in compute units."""
    id: str
    compute_cost: float
    pinned_to: Optional[str] = None


@dataclass(frozen=True)
class DagEdge:
    """A precedence edge carrying ``data_size`` MB from producer to consumer."""
    src_task: str
    dst_task: str
    data_size: float = 0.0


@dataclass(frozen=True)
class DagSpec:
    """A workflow injected at ``inject_at`` simulation seconds."""
    id: str
    tasks: Tuple[TaskSpec, ...]
    edges: Tuple[DagEdge, ...] = ()
    inject_at: float = 0.0
    _tasks_by_id: Dict[str, TaskSpec] = field(init=False, repr=False, compare=False)
    _in_edges: Dict[str, List[DagEdge]] = field(init=False, repr=False, compare=False)
    _out_edges: Dict[str, List[DagEdge]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_tasks_by_id", {t.id: t for t in self.tasks})
        ins: Dict[str, List[DagEdge]] = {t.id: [] for t in self.tasks}
        outs: Dict[str, List[DagEdge]] = {t.id: [] for t in self.tasks}
        for edge in self.edges:
            outs.setdefault(edge.src_task, []).append(edge)
            ins.setdefault(edge.dst_task, []).append(edge)
        object.__setattr__(self, "_in_edges", ins)
        object.__setattr__(self, "_out_edges", outs)

    @property
    def task_ids(self) -> List[str]:
        return [t.id for t in self.tasks]

    def task(self, task_id: str) -> TaskSpec:
        return self._tasks_by_id[task_id]

    def has_task(self, task_id: str) -> bool:
        return task_id in self._tasks_by_id

    def in_edges(self, task_id: str) -> List[DagEdge]:
        return self._in_edges.get(task_id, [])

    def out_edges(self, task_id: str) -> List[DagEdge]:
        return self._out_edges.get(task_id, [])

    def predecessors(self, task_id: str) -> List[str]:
        return [e.src_task for e in self.in_edges(task_id)]

    def successors(self, task_id: str) -> List[str]:
        return [e.dst_task for e in self.out_edges(task_id)]

    @property
    def entry_tasks(self) -> List[str]:
        return [t.id for t in self.tasks if not self.in_edges(t.id)]

    @property
    def exit_tasks(self) -> List[str]:
        return [t.id for t in self.tasks if not self.out_edges(t.id)]

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for task in self.tasks:
            graph.add_node(task.id, weight=task.compute_cost)
        for edge in self.edges:
            graph.add_edge(edge.src_task, edge.dst_task, data_size=edge.data_size)
        return graph

    def topological_order(self) -> List[str]:
        """Deterministic topological order (lexicographic among ready tasks)."""
        return list(nx.lexicographical_topological_sort(self.to_networkx()))

    def qualified(self, task_id: str) -> str:
        """Run-wide task id, namespaced by DAG."""
        return f"{self.id}/{task_id}"

    def with_data_size(self, data_size: float) -> "DagSpec":
        """Copy of this DAG with every edge carrying ``data_size`` MB."""
        edges = tuple(DagEdge(e.src_task, e.dst_task, data_size) for e in self.edges)
        return DagSpec(self.id, self.tasks, edges, self.inject_at)

    def shifted(self, dag_id: str, inject_at: float) -> "DagSpec":
        return DagSpec(dag_id, self.tasks, self.edges, inject_at)


class TaskState(str, Enum):
    PENDING = "pending"
    READY = "ready"
    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED = "completed"


class TaskEvent(str, Enum):
    INPUTS_DELIVERED = "inputs_delivered"
    NODE_IDLE = "node_idle"
    NODE_BUSY = "node_busy"
    FINISHED = "finished"


_TRANSITIONS: Dict[Tuple[TaskState, TaskEvent], TaskState] = {
    (TaskState.PENDING, TaskEvent.INPUTS_DELIVERED): TaskState.READY,
    (TaskState.READY, TaskEvent.NODE_IDLE): TaskState.RUNNING,
    (TaskState.READY, TaskEvent.NODE_BUSY): TaskState.QUEUED,
    (TaskState.QUEUED, TaskEvent.NODE_IDLE): TaskState.RUNNING,
    (TaskState.RUNNING, TaskEvent.FINISHED): TaskState.COMPLETED,
}


def transition_task(state: TaskState, event: TaskEvent) -> TaskState:
    """Advance a task along Pending -> Ready -> (Queued) -> Running -> Completed.

    Raises:
        IllegalTransition: the pair is not part of the lifecycle
    """
    try:
        return _TRANSITIONS[(state, event)]
    except KeyError:
        raise IllegalTransition(
            f"illegal task transition from {state.value} on {event.value}",
            details={"state": state.value, "event": event.value},
        ) from None
