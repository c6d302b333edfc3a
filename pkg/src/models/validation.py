"""Structural validation of a scenario's network and DAGs."""
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import networkx as nx

from src.error_handling import (
    CyclicDag,
    DuplicateId,
    MissingPosition,
    NcsimError,
    NonPositiveDistance,
    ScenarioValidationError,
    SchemaError,
    UnknownNodeReference,
)
from src.models.dag import DagSpec
from src.models.network import LinkSpec, Network, NodeSpec
from src.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ValidatedModel:
    network: Network
    dags: Tuple[DagSpec, ...]


def collect_violations(
    nodes: Sequence[NodeSpec],
    links: Sequence[LinkSpec],
    dags: Sequence[DagSpec],
    rf_enabled: bool = False,
) -> List[NcsimError]:
    """Return every violation found, in a stable order."""
    violations: List[NcsimError] = []
    node_ids = {n.id for n in nodes}

    for node_id, count in sorted(Counter(n.id for n in nodes).items()):
        if count > 1:
            violations.append(DuplicateId(f"node id {node_id!r} declared {count} times", {"id": node_id}))
    for node in nodes:
        if not node.capacity > 0:
            violations.append(SchemaError("capacity must be > 0", key=f"nodes.{node.id}.capacity"))

    for (src, dst), count in sorted(Counter(l.key for l in links).items()):
        if count > 1:
            violations.append(DuplicateId(f"link {src}->{dst} declared {count} times", {"link": [src, dst]}))
    for link in links:
        where = f"links.{link.src}->{link.dst}"
        for end in (link.src, link.dst):
            if end not in node_ids:
                violations.append(UnknownNodeReference(f"{where} names unknown node {end!r}", {"node": end}))
        if link.src == link.dst:
            violations.append(SchemaError("link endpoints must differ", key=where))
        if link.bandwidth < 0:
            violations.append(SchemaError("bandwidth must be >= 0", key=f"{where}.bandwidth"))
        if link.latency < 0:
            violations.append(SchemaError("latency must be >= 0", key=f"{where}.latency"))

    for dag_id, count in sorted(Counter(d.id for d in dags).items()):
        if count > 1:
            violations.append(DuplicateId(f"DAG id {dag_id!r} declared {count} times", {"id": dag_id}))
    for dag in dags:
        violations.extend(_dag_violations(dag, node_ids))

    if rf_enabled:
        violations.extend(_position_violations(nodes))
    return violations


def _dag_violations(dag: DagSpec, node_ids) -> List[NcsimError]:
    violations: List[NcsimError] = []
    task_ids = set()
    for task in dag.tasks:
        if task.id in task_ids:
            violations.append(DuplicateId(f"task id {task.id!r} repeated in DAG {dag.id}", {"dag": dag.id, "id": task.id}))
        task_ids.add(task.id)
        if not task.compute_cost > 0:
            violations.append(SchemaError("compute_cost must be > 0", key=f"dags.{dag.id}.tasks.{task.id}"))
        if task.pinned_to is not None and task.pinned_to not in node_ids:
            violations.append(UnknownNodeReference(
                f"task {dag.id}/{task.id} pinned to unknown node {task.pinned_to!r}",
                {"dag": dag.id, "task": task.id, "node": task.pinned_to},
            ))

    dangling = False
    for edge in dag.edges:
        for end in (edge.src_task, edge.dst_task):
            if end not in task_ids:
                dangling = True
                violations.append(UnknownNodeReference(
                    f"edge {edge.src_task}->{edge.dst_task} in DAG {dag.id} names unknown task {end!r}",
                    {"dag": dag.id, "task": end},
                ))
        if edge.data_size < 0:
            violations.append(SchemaError("data_size must be >= 0", key=f"dags.{dag.id}.edges"))

    if not dangling:
        graph = dag.to_networkx()
        if not nx.is_directed_acyclic_graph(graph):
            cycle = [u for u, _ in nx.find_cycle(graph)]
            violations.append(CyclicDag(f"DAG {dag.id} contains a cycle through {cycle}", {"dag": dag.id, "cycle": cycle}))
    return violations


def _position_violations(nodes: Sequence[NodeSpec]) -> List[NcsimError]:
    violations: List[NcsimError] = []
    seen = {}
    for node in nodes:
        if node.position is None:
            violations.append(MissingPosition(f"node {node.id} has no position", {"node": node.id}))
            continue
        key = (float(node.position[0]), float(node.position[1]))
        if key in seen:
            violations.append(NonPositiveDistance(
                f"nodes {seen[key]} and {node.id} share position {key}",
                {"nodes": [seen[key], node.id]},
            ))
        else:
            seen[key] = node.id
    return violations


def validate_scenario(
    nodes: Sequence[NodeSpec],
    links: Sequence[LinkSpec],
    dags: Sequence[DagSpec],
    rf_enabled: bool = False,
) -> ValidatedModel:
    """Validate a parsed scenario and return the normalized model.

    A single violation is raised as itself; several are raised together as
    ``ScenarioValidationError``.
    """
    violations = collect_violations(nodes, links, dags, rf_enabled)
    if len(violations) == 1:
        raise violations[0]
    if violations:
        raise ScenarioValidationError(violations)

    logger.debug(
        "Scenario validated",
        extra={"nodes": len(nodes), "links": len(links), "dags": len(dags)},
    )
    return ValidatedModel(Network(tuple(nodes), tuple(links)), tuple(dags))
