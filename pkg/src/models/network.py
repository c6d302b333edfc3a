"""Network domain types: compute nodes and directed links."""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

LinkKey = Tuple[str, str]
Position = Tuple[float, float]


@dataclass(frozen=True)
class NodeSpec:
    """A compute node.

    ``capacity`` is in compute units per second, ``position`` in meters.
    """
    id: str
    capacity: float
    position: Optional[Position] = None


@dataclass(frozen=True)
class LinkSpec:
    """A directed link. Bandwidth in MB/s, latency in seconds."""
    src: str
    dst: str
    bandwidth: float
    latency: float = 0.0

    @property
    def key(self) -> LinkKey:
        return (self.src, self.dst)

    @property
    def usable(self) -> bool:
        return self.bandwidth > 0.0


@dataclass(frozen=True)
class Network:
    """Immutable node and link set in scenario declaration order."""
    nodes: Tuple[NodeSpec, ...]
    links: Tuple[LinkSpec, ...]
    _nodes_by_id: Dict[str, NodeSpec] = field(init=False, repr=False, compare=False)
    _links_by_key: Dict[LinkKey, LinkSpec] = field(init=False, repr=False, compare=False)
    _out_links: Dict[str, List[LinkSpec]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "_nodes_by_id", {n.id: n for n in self.nodes})
        object.__setattr__(self, "_links_by_key", {l.key: l for l in self.links})
        out: Dict[str, List[LinkSpec]] = {n.id: [] for n in self.nodes}
        for link in self.links:
            out.setdefault(link.src, []).append(link)
        object.__setattr__(self, "_out_links", out)

    @property
    def node_ids(self) -> List[str]:
        return [n.id for n in self.nodes]

    def node(self, node_id: str) -> NodeSpec:
        return self._nodes_by_id[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes_by_id

    def link(self, key: LinkKey) -> Optional[LinkSpec]:
        return self._links_by_key.get(key)

    def out_links(self, node_id: str, usable_only: bool = True) -> List[LinkSpec]:
        links = self._out_links.get(node_id, [])
        return [l for l in links if l.usable] if usable_only else list(links)

    def usable_links(self) -> List[LinkSpec]:
        return [l for l in self.links if l.usable]

    def position(self, node_id: str) -> Optional[Position]:
        return self._nodes_by_id[node_id].position

    def distance(self, a: str, b: str) -> float:
        """Euclidean distance in meters between two positioned nodes."""
        pa, pb = self.position(a), self.position(b)
        if pa is None or pb is None:
            raise ValueError(f"distance needs positions for {a} and {b}")
        return math.hypot(pa[0] - pb[0], pa[1] - pb[1])

    @property
    def positioned(self) -> bool:
        return all(n.position is not None for n in self.nodes)


def expand_undirected(links: Iterable[LinkSpec]) -> List[LinkSpec]:
    """Expand each link into both directions with identical parameters."""
    expanded: List[LinkSpec] = []
    for link in links:
        expanded.append(link)
        expanded.append(LinkSpec(link.dst, link.src, link.bandwidth, link.latency))
    return expanded
