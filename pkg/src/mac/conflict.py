"""Conflict graphs over directed links."""
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from src.error_handling import MissingPosition
from src.models.network import LinkKey, Network
from src.utils.logging import get_logger

logger = get_logger(__name__)

CLIQUE_EXACT_LIMIT = 50


@dataclass(frozen=True)
class ActiveSets:
    """Active links that contend with a link, and those hidden from it."""
    contenders: FrozenSet[LinkKey]
    hidden: FrozenSet[LinkKey]


class ConflictGraph:
    """Undirected conflict relation over the directed links of a network."""

    def __init__(self, links: Iterable[LinkKey], edges: Iterable[Tuple[LinkKey, LinkKey]] = ()):
        self._graph = nx.Graph()
        self._graph.add_nodes_from(links)
        for a, b in edges:
            if a != b:
                self._graph.add_edge(a, b)
        self._neighbors: Dict[LinkKey, FrozenSet[LinkKey]] = {
            link: frozenset(self._graph.neighbors(link)) for link in self._graph.nodes
        }

    @property
    def links(self) -> List[LinkKey]:
        return list(self._graph.nodes)

    @property
    def edges(self) -> List[Tuple[LinkKey, LinkKey]]:
        return [tuple(sorted(e)) for e in self._graph.edges]

    @property
    def edge_count(self) -> int:
        return self._graph.number_of_edges()

    def neighbors(self, link: LinkKey) -> FrozenSet[LinkKey]:
        return self._neighbors.get(link, frozenset())

    def conflicts(self, a: LinkKey, b: LinkKey) -> bool:
        return b in self.neighbors(a)

    def active_sets(self, link: LinkKey, active: Iterable[LinkKey]) -> ActiveSets:
        """Split the other active links into contenders and hidden terminals."""
        others = set(active) - {link}
        neighbors = self.neighbors(link)
        contenders = frozenset(others & neighbors)
        return ActiveSets(contenders=contenders, hidden=frozenset(others - contenders))

    def to_networkx(self) -> nx.Graph:
        return self._graph.copy()


def _within(network: Network, a: str, b: str, cs_range: float) -> bool:
    if a == b:
        return True
    return network.distance(a, b) <= cs_range


def links_conflict(network: Network, l1: LinkKey, l2: LinkKey, cs_range: float, rts_cts: bool = False) -> bool:
    """Carrier-sense conflict test between two links.

    Basic access: either transmitter hears the other link's transmitter or
    receiver. RTS/CTS: any endpoint of one is in range of any endpoint of the other.
    """
    (tx1, rx1), (tx2, rx2) = l1, l2
    if rts_cts:
        return any(_within(network, a, b, cs_range) for a in (tx1, rx1) for b in (tx2, rx2))
    return (
        _within(network, tx1, tx2, cs_range)
        or _within(network, tx1, rx2, cs_range)
        or _within(network, tx2, rx1, cs_range)
    )


def build_conflict_graph(
    network: Network,
    cs_range: float,
    rts_cts: bool = False,
    links: Optional[Iterable[LinkKey]] = None,
) -> ConflictGraph:
    """Conflict graph over ``links`` (default: every link of the network)."""
    missing = [n.id for n in network.nodes if n.position is None]
    if missing:
        raise MissingPosition(f"conflict graph needs positions for {missing}", {"nodes": missing})

    keys = list(links) if links is not None else [l.key for l in network.links]
    edges = []
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            if links_conflict(network, a, b, cs_range, rts_cts):
                edges.append((a, b))

    graph = ConflictGraph(keys, edges)
    logger.debug(
        "Built conflict graph",
        extra={"links": len(keys), "conflicts": graph.edge_count, "rts_cts": rts_cts, "cs_range_m": round(cs_range, 3)},
    )
    return graph


def maximal_cliques(graph: ConflictGraph, exact_limit: int = CLIQUE_EXACT_LIMIT) -> List[List[LinkKey]]:
    """Maximal conflict cliques; greedy clique cover above ``exact_limit`` links.

    Diagnostic only: interference factors use neighborhoods, not cliques.
    """
    g = graph.to_networkx()
    if g.number_of_nodes() <= exact_limit:
        cliques = [sorted(c) for c in nx.find_cliques(g)]
        return sorted(cliques, key=lambda c: (-len(c), c))

    cliques: List[Set[LinkKey]] = []
    order = sorted(g.nodes, key=lambda v: (-g.degree(v), v))
    for vertex in order:
        for clique in cliques:
            if all(g.has_edge(vertex, member) for member in clique):
                clique.add(vertex)
                break
        else:
            cliques.append({vertex})
    return sorted((sorted(c) for c in cliques), key=lambda c: (-len(c), c))

