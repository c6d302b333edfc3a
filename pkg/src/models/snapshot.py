"""Scheduler-facing views: network snapshots and placement plans."""
import json
from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Tuple

from src.models.dag import DagSpec
from src.models.network import LinkKey, LinkSpec, Network, NodeSpec


@dataclass(frozen=True)
class NetworkSnapshot:
    """Immutable view of the network handed to a scheduler.

    Carries capacities, link bandwidths/latencies, queue depths and per-link
    transfer counts. Interference state is not part of it.
    """
    nodes: Tuple[NodeSpec, ...]
    links: Tuple[LinkSpec, ...]
    queue_depths: Tuple[Tuple[str, int], ...] = ()
    active_transfers: Tuple[Tuple[LinkKey, int], ...] = ()
    _topology: Network = field(default=None, repr=False, compare=False)

    @classmethod
    def of(
        cls,
        network: Network,
        queue_depths: Mapping[str, int] = None,
        active_transfers: Mapping[LinkKey, int] = None,
    ) -> "NetworkSnapshot":
        queue_depths = queue_depths or {}
        active_transfers = active_transfers or {}
        return cls(
            nodes=network.nodes,
            links=network.links,
            queue_depths=tuple((n.id, int(queue_depths.get(n.id, 0))) for n in network.nodes),
            active_transfers=tuple((l.key, int(active_transfers.get(l.key, 0))) for l in network.links),
            _topology=network,
        )

    @property
    def topology(self) -> Network:
        if self._topology is None:
            object.__setattr__(self, "_topology", Network(self.nodes, self.links))
        return self._topology

    @property
    def node_ids(self) -> Tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def capacity(self, node_id: str) -> float:
        for node in self.nodes:
            if node.id == node_id:
                return node.capacity
        raise KeyError(node_id)

    def to_bytes(self) -> bytes:
        """Canonical serialization, used to compare snapshots across runs."""
        payload = {
            "nodes": [[n.id, repr(n.capacity)] for n in self.nodes],
            "links": [[l.src, l.dst, repr(l.bandwidth), repr(l.latency)] for l in self.links],
            "queue_depths": [list(q) for q in self.queue_depths],
            "active_transfers": [[k[0], k[1], c] for k, c in self.active_transfers],
        }
        return json.dumps(payload, separators=(",", ":")).encode("utf-8")


@dataclass(frozen=True)
class PlacementPlan:
    """Task id -> node id for one DAG, in DAG declaration order."""
    dag_id: str
    assignments: Tuple[Tuple[str, str], ...]

    @classmethod
    def from_mapping(cls, dag: DagSpec, mapping: Mapping[str, str]) -> "PlacementPlan":
        missing = [t for t in dag.task_ids if t not in mapping]
        if missing:
            raise ValueError(f"placement for DAG {dag.id} misses tasks {missing}")
        return cls(dag.id, tuple((t, mapping[t]) for t in dag.task_ids))

    def as_dict(self) -> Dict[str, str]:
        return dict(self.assignments)

    def __getitem__(self, task_id: str) -> str:
        for task, node in self.assignments:
            if task == task_id:
                return node
        raise KeyError(task_id)

    def __len__(self) -> int:
        return len(self.assignments)

    def __iter__(self) -> Iterator[str]:
        return (task for task, _ in self.assignments)
