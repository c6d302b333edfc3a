"""Fully connected view of the network used by list schedulers."""
import math
from dataclasses import dataclass
from typing import Dict, Tuple

from src.error_handling import NoRoute
from src.models.snapshot import NetworkSnapshot
from src.routing.routes import RoutingModel

UNREACHABLE_BANDWIDTH = 0.001


@dataclass(frozen=True)
class VirtualNetwork:
    """Pairwise end-to-end bandwidth (MB/s) and latency (s) between every node pair."""
    node_ids: Tuple[str, ...]
    capacities: Dict[str, float]
    bandwidths: Dict[Tuple[str, str], float]
    latencies: Dict[Tuple[str, str], float]

    def bandwidth(self, u: str, v: str) -> float:
        if u == v:
            return math.inf
        return self.bandwidths[(u, v)]

    def latency(self, u: str, v: str) -> float:
        if u == v:
            return 0.0
        return self.latencies[(u, v)]

    def exec_time(self, compute_cost: float, node: str) -> float:
        return compute_cost / self.capacities[node]

    def comm_cost(self, data_size: float, u: str, v: str) -> float:
        """Transfer estimate; co-located or empty transfers are free."""
        if u == v or data_size == 0:
            return 0.0
        return data_size / self.bandwidth(u, v) + self.latency(u, v)


def build_virtual_network(snapshot: NetworkSnapshot, routing: RoutingModel) -> VirtualNetwork:
    """Collapse routes into a complete graph, ignoring interference.

    Unreachable pairs get a near-zero bandwidth so schedulers avoid them
    without special cases.
    """
    topology = snapshot.topology
    node_ids = snapshot.node_ids
    bandwidths: Dict[Tuple[str, str], float] = {}
    latencies: Dict[Tuple[str, str], float] = {}
    for u in node_ids:
        for v in node_ids:
            if u == v:
                continue
            try:
                route = routing.route(topology, u, v)
            except NoRoute:
                bandwidths[(u, v)] = UNREACHABLE_BANDWIDTH
                latencies[(u, v)] = 0.0
            else:
                bandwidths[(u, v)] = route.bottleneck
                latencies[(u, v)] = route.latency
    return VirtualNetwork(
        node_ids=node_ids,
        capacities={n.id: n.capacity for n in snapshot.nodes},
        bandwidths=bandwidths,
        latencies=latencies,
    )
