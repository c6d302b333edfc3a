"""Topology and DAG generators for the shipped studies."""
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.config import AUTO_LINK_MAX_DISTANCE_M, CAPACITY_RANGE, GRID_SPACING_M, NCSIM_SEED
from src.models.dag import DagEdge, DagSpec, TaskSpec
from src.models.network import LinkSpec, Network, NodeSpec
from src.rf.mcs import DEFAULT_MCS_TABLE, McsTable
from src.rf.phy import RfConfig, link_rate
from src.utils.logging import get_logger

logger = get_logger(__name__)

TEMPLATE_COMPUTE_COST = 500.0
TEMPLATE_DATA_SIZE = 10.0
MAX_RGG_ATTEMPTS = 100


def node_capacity(seed: int, index: int, low: float = CAPACITY_RANGE[0], high: float = CAPACITY_RANGE[1]) -> float:
    """Seeded capacity draw keyed on (seed, node index)."""
    return float(np.random.default_rng([seed, index]).uniform(low, high))


def rf_link(src: NodeSpec, dst: NodeSpec, rf: RfConfig, table: McsTable, latency: float = 0.0) -> LinkSpec:
    """Directed link whose bandwidth is the interference-free MCS rate of its length."""
    d = math.dist(src.position, dst.position)
    return LinkSpec(src.id, dst.id, link_rate(rf, table, d), latency)


def auto_links(
    nodes: Sequence[NodeSpec],
    max_distance: float = AUTO_LINK_MAX_DISTANCE_M,
    rf: Optional[RfConfig] = None,
    table: McsTable = DEFAULT_MCS_TABLE,
    latency: float = 0.0,
) -> List[LinkSpec]:
    """Links in both directions between every node pair within ``max_distance`` meters."""
    rf = rf or RfConfig()
    links: List[LinkSpec] = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if math.dist(a.position, b.position) <= max_distance:
                links.append(rf_link(a, b, rf, table, latency))
                links.append(rf_link(b, a, rf, table, latency))
    return links


def grid_network(
    rows: int,
    cols: int,
    spacing: float = GRID_SPACING_M,
    seed: int = NCSIM_SEED,
    rf: Optional[RfConfig] = None,
    table: McsTable = DEFAULT_MCS_TABLE,
) -> Network:
    """rows x cols grid with links to the 8 surrounding neighbors.

    Node ``n{k}`` sits at row k // cols, column k % cols.
    """
    rf = rf or RfConfig()
    nodes = [
        NodeSpec(f"n{r * cols + c}", node_capacity(seed, r * cols + c), (c * spacing, r * spacing))
        for r in range(rows)
        for c in range(cols)
    ]
    links: List[LinkSpec] = []
    for r in range(rows):
        for c in range(cols):
            a = nodes[r * cols + c]
            # forward half of the neighborhood; the reverse direction is added alongside
            for dr, dc in ((0, 1), (1, -1), (1, 0), (1, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    b = nodes[rr * cols + cc]
                    links.append(rf_link(a, b, rf, table))
                    links.append(rf_link(b, a, rf, table))
    return Network(tuple(nodes), tuple(links))


def rgg_network(
    count: int = 100,
    area: float = 500.0,
    max_distance: float = AUTO_LINK_MAX_DISTANCE_M,
    seed: int = NCSIM_SEED,
    rf: Optional[RfConfig] = None,
    table: McsTable = DEFAULT_MCS_TABLE,
) -> Tuple[Network, int]:
    """Random geometric graph, regenerated with the next seed until connected.

    Returns the network and the seed that produced it.
    """
    for attempt in range(MAX_RGG_ATTEMPTS):
        current = seed + attempt
        points = np.random.default_rng(current).uniform(0.0, area, size=(count, 2))
        nodes = [
            NodeSpec(f"n{i}", node_capacity(current, i), (float(x), float(y)))
            for i, (x, y) in enumerate(points)
        ]
        network = Network(tuple(nodes), tuple(auto_links(nodes, max_distance, rf, table)))
        if is_connected(network):
            return network, current
        logger.warning(
            "Random geometric graph is disconnected; regenerating",
            extra={"seed": current, "next_seed": current + 1},
        )
    raise RuntimeError(f"no connected graph within {MAX_RGG_ATTEMPTS} seeds from {seed}")


def is_connected(network: Network) -> bool:
    graph = nx.Graph()
    graph.add_nodes_from(network.node_ids)
    graph.add_edges_from(l.key for l in network.usable_links())
    return nx.is_connected(graph)


def undirected_link_count(network: Network) -> int:
    return len({frozenset(l.key) for l in network.links})


def average_degree(network: Network) -> float:
    return 2.0 * undirected_link_count(network) / len(network.nodes)


# DAG templates


def _dag(dag_id: str, task_count: int, pairs, compute_cost: float, data_size: float) -> DagSpec:
    tasks = tuple(TaskSpec(f"T{i}", compute_cost) for i in range(task_count))
    edges = tuple(DagEdge(f"T{a}", f"T{b}", data_size) for a, b in pairs)
    return DagSpec(dag_id, tasks, edges)


def fork_join(dag_id: str = "fork_join", compute_cost: float = TEMPLATE_COMPUTE_COST,
              data_size: float = TEMPLATE_DATA_SIZE) -> DagSpec:
    """T0 -> {T1, T2, T3} -> T4."""
    pairs = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]
    return _dag(dag_id, 5, pairs, compute_cost, data_size)


def diamond10(dag_id: str = "diamond10", compute_cost: float = TEMPLATE_COMPUTE_COST,
              data_size: float = TEMPLATE_DATA_SIZE) -> DagSpec:
    """T0 fans out to T1..T4, which cross-link into T5..T8, which join at T9."""
    pairs = [(0, 1), (0, 2), (0, 3), (0, 4)]
    pairs += [(1, 5), (1, 6), (2, 6), (2, 7), (3, 7), (3, 8), (4, 8), (4, 5)]
    pairs += [(5, 9), (6, 9), (7, 9), (8, 9)]
    return _dag(dag_id, 10, pairs, compute_cost, data_size)


def pipeline_layers(size: int) -> List[int]:
    """Layer widths 1, 4, then 6 until at most 6 tasks remain."""
    widths = [1, 4]
    remaining = size - 5
    while remaining > 6:
        widths.append(6)
        remaining -= 6
    if remaining > 0:
        widths.append(remaining)
    return widths


def pipeline(dag_id: str = "pipeline", size: int = 20, compute_cost: float = TEMPLATE_COMPUTE_COST,
             data_size: float = TEMPLATE_DATA_SIZE) -> DagSpec:
    """Layered DAG; task j of a layer feeds tasks j and j+1 (mod width) of the next.

    A task left without a feeder (the next layer is wider) is fed by task
    k mod width of the layer above, so T0 is the only entry task.
    """
    layers: List[List[int]] = []
    index = 0
    for width in pipeline_layers(size):
        layers.append(list(range(index, index + width)))
        index += width
    pairs = []
    for upper, lower in zip(layers, layers[1:]):
        width = len(lower)
        fed = set()
        for j, task in enumerate(upper):
            for k in dict.fromkeys((j % width, (j + 1) % width)):
                pairs.append((task, lower[k]))
                fed.add(k)
        for k in range(width):
            if k not in fed:
                pairs.append((upper[k % len(upper)], lower[k]))
    return _dag(dag_id, size, pairs, compute_cost, data_size)


DAG_TEMPLATES: Dict[str, Callable[..., DagSpec]] = {
    "fork_join": fork_join,
    "diamond10": diamond10,
    "pipeline": pipeline,
}

