"""Path selection over the usable links of a network.

Tie-breaks are fixed so that routes are reproducible: among optimal paths
the one with fewer hops wins, then the lexicographically smallest node
sequence.
"""
import heapq
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx

from src.error_handling import NoRoute
from src.models.network import LinkKey, LinkSpec, Network

LATENCY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Route:
    """Ordered links from source to destination node."""
    links: Tuple[LinkSpec, ...]

    @property
    def keys(self) -> Tuple[LinkKey, ...]:
        return tuple(l.key for l in self.links)

    @property
    def nodes(self) -> Tuple[str, ...]:
        return (self.links[0].src,) + tuple(l.dst for l in self.links)

    @property
    def src(self) -> str:
        return self.links[0].src

    @property
    def dst(self) -> str:
        return self.links[-1].dst

    @property
    def hops(self) -> int:
        return len(self.links)

    @property
    def latency(self) -> float:
        return sum(l.latency for l in self.links)

    @property
    def bottleneck(self) -> float:
        return min(l.bandwidth for l in self.links)


def _usable_graph(network: Network, min_bandwidth: float = 0.0) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(network.node_ids)
    for link in network.usable_links():
        if link.bandwidth >= min_bandwidth:
            graph.add_edge(link.src, link.dst, link=link)
    return graph


def _route_from_nodes(network: Network, nodes: List[str]) -> Route:
    return Route(tuple(network.link((a, b)) for a, b in zip(nodes, nodes[1:])))


def _smallest_descent(graph: nx.DiGraph, to_dst: Dict[str, int], src: str, dst: str) -> List[str]:
    """Walk fewest hops to ``dst``, always stepping to the smallest node id."""
    path = [src]
    node = src
    while node != dst:
        node = min(v for v in graph.successors(node) if to_dst.get(v) == to_dst[node] - 1)
        path.append(node)
    return path


def max_bottlenecks(network: Network, src: str) -> Dict[str, float]:
    """Widest achievable bottleneck from ``src`` to every reachable node (modified Dijkstra)."""
    best: Dict[str, float] = {src: math.inf}
    done: Dict[str, float] = {}
    heap = [(-math.inf, src)]
    while heap:
        neg_width, node = heapq.heappop(heap)
        if node in done:
            continue
        width = -neg_width
        done[node] = width
        for link in network.out_links(node):
            candidate = min(width, link.bandwidth)
            if link.dst not in done and candidate > best.get(link.dst, -1.0):
                best[link.dst] = candidate
                heapq.heappush(heap, (-candidate, link.dst))
    done.pop(src)
    return done


def max_bottleneck(network: Network, src: str, dst: str) -> Optional[float]:
    return max_bottlenecks(network, src).get(dst)


def _latency_to(network: Network, dst: str) -> Dict[str, Tuple[float, int]]:
    """(latency, hops) of the best path from every node to ``dst``."""
    incoming: Dict[str, List[LinkSpec]] = {}
    for link in network.usable_links():
        incoming.setdefault(link.dst, []).append(link)
    dist: Dict[str, Tuple[float, int]] = {dst: (0.0, 0)}
    heap = [(0.0, 0, dst)]
    while heap:
        latency, hops, node = heapq.heappop(heap)
        if (latency, hops) > dist[node]:
            continue
        for link in incoming.get(node, []):
            candidate = (round(latency + link.latency, 12), hops + 1)
            if link.src not in dist or candidate < dist[link.src]:
                dist[link.src] = candidate
                heapq.heappush(heap, (candidate[0], candidate[1], link.src))
    return dist


class RoutingModel(ABC):
    """Chooses a route for a transfer between two nodes.

    Routes depend only on the static topology, so they are cached per network.
    """

    name: str = ""

    def __init__(self):
        self._network: Optional[Network] = None
        self._cache: Dict[Tuple[str, str], Route] = {}
        self._scratch: Dict = {}

    def route(self, network: Network, src: str, dst: str) -> Route:
        """Route from ``src`` to ``dst``; raises NoRoute when unreachable."""
        if src == dst:
            raise ValueError("route endpoints must differ")
        if network is not self._network:
            self._network = network
            self._cache = {}
            self._scratch = {}
        cached = self._cache.get((src, dst))
        if cached is None:
            cached = self._find(network, src, dst)
            self._cache[(src, dst)] = cached
        return cached

    def _no_route(self, src: str, dst: str, reason: str) -> NoRoute:
        return NoRoute(f"{reason} ({self.name})", {"src": src, "dst": dst, "model": self.name})

    @abstractmethod
    def _find(self, network: Network, src: str, dst: str) -> Route:
        """Compute a route without consulting the route cache."""


class DirectRouting(RoutingModel):
    name = "direct"

    def _find(self, network: Network, src: str, dst: str) -> Route:
        link = network.link((src, dst))
        if link is None or not link.usable:
            raise self._no_route(src, dst, f"no direct link {src}->{dst}")
        return Route((link,))


class WidestPathRouting(RoutingModel):
    name = "widest_path"

    def _find(self, network: Network, src: str, dst: str) -> Route:
        widths = self._scratch.get(("width", src))
        if widths is None:
            widths = max_bottlenecks(network, src)
            self._scratch[("width", src)] = widths
        width = widths.get(dst)
        if width is None:
            raise self._no_route(src, dst, f"{dst} unreachable from {src}")

        graph = self._scratch.get(("graph", width))
        if graph is None:
            graph = _usable_graph(network, width)
            self._scratch[("graph", width)] = graph
        to_dst = self._scratch.get(("hops", width, dst))
        if to_dst is None:
            to_dst = nx.single_source_shortest_path_length(graph.reverse(copy=False), dst)
            self._scratch[("hops", width, dst)] = to_dst
        return _route_from_nodes(network, _smallest_descent(graph, to_dst, src, dst))


class ShortestPathRouting(RoutingModel):
    name = "shortest_path"

    def _find(self, network: Network, src: str, dst: str) -> Route:
        dist = self._scratch.get(("latency", dst))
        if dist is None:
            dist = _latency_to(network, dst)
            self._scratch[("latency", dst)] = dist
        if src not in dist:
            raise self._no_route(src, dst, f"{dst} unreachable from {src}")
        path = [src]
        node = src
        while node != dst:
            latency, hops = dist[node]
            node = min(
                link.dst for link in network.out_links(node)
                if link.dst in dist
                and dist[link.dst][1] == hops - 1
                and math.isclose(dist[link.dst][0] + link.latency, latency, rel_tol=1e-9, abs_tol=LATENCY_TOLERANCE)
            )
            path.append(node)
        return _route_from_nodes(network, path)


ROUTING_MODELS = {
    DirectRouting.name: DirectRouting,
    WidestPathRouting.name: WidestPathRouting,
    ShortestPathRouting.name: ShortestPathRouting,
}

_ALIASES = {"widest": "widest_path", "shortest": "shortest_path"}


def get_routing_model(name: str) -> RoutingModel:
    name = _ALIASES.get(name, name)
    try:
        return ROUTING_MODELS[name]()
    except KeyError:
        raise ValueError(f"unknown routing model {name!r}") from None


def find_route(model: str, src: str, dst: str, network: Network) -> Route:
    """Route between two nodes under the named model (direct, widest, shortest)."""
    return get_routing_model(model).route(network, src, dst)
