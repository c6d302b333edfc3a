"""Tests for route selection and flow-level link rates"""
import networkx as nx
import numpy as np
import pytest

from src.error_handling import NoRoute
from src.mac import NoInterference
from src.models.network import LinkSpec, Network, NodeSpec
from src.routing import (
    DirectRouting,
    Route,
    ShortestPathRouting,
    WidestPathRouting,
    effective_rate,
    find_route,
    get_routing_model,
    link_share,
    max_bottleneck,
    transfer_duration,
)

NODE_IDS = ["n0", "n1", "n2", "n3", "n4"]


def random_network(seed: int) -> Network:
    """Up to 8 directed links among 5 nodes, some of them unusable"""
    rng = np.random.default_rng(seed)
    pairs = [(a, b) for a in NODE_IDS for b in NODE_IDS if a != b]
    chosen = rng.choice(len(pairs), size=int(rng.integers(3, 9)), replace=False)
    links = tuple(
        LinkSpec(
            pairs[i][0],
            pairs[i][1],
            float(rng.choice([0.0, 1.0, 2.0, 3.0, 5.0])),
            float(rng.choice([0.0, 0.5, 1.0])),
        )
        for i in sorted(chosen)
    )
    return Network(tuple(NodeSpec(n, 1.0) for n in NODE_IDS), links)


def simple_paths(network: Network, src: str, dst: str):
    graph = nx.DiGraph()
    graph.add_nodes_from(network.node_ids)
    graph.add_edges_from(l.key for l in network.usable_links())
    return [Route(tuple(network.link((a, b)) for a, b in zip(p, p[1:]))) for p in nx.all_simple_paths(graph, src, dst)]


def brute_force(network: Network, src: str, dst: str, key):
    candidates = simple_paths(network, src, dst)
    if not candidates:
        return None
    return min(candidates, key=lambda r: (key(r), r.hops, r.nodes)).nodes


@pytest.mark.parametrize("seed", range(40))
def test_widest_path_matches_brute_force(seed):
    """Test widest routing against exhaustive enumeration on small graphs"""
    network = random_network(seed)
    model = WidestPathRouting()
    for src in NODE_IDS:
        for dst in NODE_IDS:
            if src == dst:
                continue
            expected = brute_force(network, src, dst, lambda r: -r.bottleneck)
            if expected is None:
                with pytest.raises(NoRoute):
                    model.route(network, src, dst)
                assert max_bottleneck(network, src, dst) is None
            else:
                route = model.route(network, src, dst)
                assert route.nodes == expected
                assert route.bottleneck == max_bottleneck(network, src, dst)


@pytest.mark.parametrize("seed", range(40))
def test_shortest_path_matches_brute_force(seed):
    """Test latency routing against exhaustive enumeration on small graphs"""
    network = random_network(seed)
    model = ShortestPathRouting()
    for src in NODE_IDS:
        for dst in NODE_IDS:
            if src == dst:
                continue
            expected = brute_force(network, src, dst, lambda r: r.latency)
            if expected is None:
                with pytest.raises(NoRoute):
                    model.route(network, src, dst)
            else:
                assert model.route(network, src, dst).nodes == expected


def test_widest_prefers_fewer_hops_on_equal_width():
    network = Network(
        tuple(NodeSpec(n, 1.0) for n in "abcd"),
        (
            LinkSpec("a", "b", 5.0),
            LinkSpec("b", "d", 5.0),
            LinkSpec("a", "c", 5.0),
            LinkSpec("c", "b", 9.0),
            LinkSpec("a", "d", 1.0),
        ),
    )
    assert find_route("widest", "a", "d", network).nodes == ("a", "b", "d")
    assert find_route("shortest", "a", "d", network).nodes == ("a", "d")


def test_direct_routing(two_node_network):
    route = DirectRouting().route(two_node_network, "n0", "n1")
    assert route.keys == (("n0", "n1"),)
    assert route.hops == 1
    assert route.bottleneck == 10.0


def test_direct_routing_needs_usable_link():
    network = Network(
        tuple(NodeSpec(n, 1.0) for n in "abc"),
        (LinkSpec("a", "b", 1.0), LinkSpec("b", "c", 1.0), LinkSpec("a", "c", 0.0)),
    )
    with pytest.raises(NoRoute):
        DirectRouting().route(network, "a", "c")
    assert WidestPathRouting().route(network, "a", "c").nodes == ("a", "b", "c")


def test_route_rejects_same_endpoints(two_node_network):
    with pytest.raises(ValueError):
        WidestPathRouting().route(two_node_network, "n0", "n0")


def test_unknown_routing_model():
    assert isinstance(get_routing_model("shortest_path"), ShortestPathRouting)
    with pytest.raises(ValueError):
        get_routing_model("teleport")


def test_route_cache_resets_per_network(two_node_network):
    """Test a routing model does not reuse routes across networks"""
    model = DirectRouting()
    first = model.route(two_node_network, "n0", "n1")
    other = Network(two_node_network.nodes, (LinkSpec("n0", "n1", 3.0),))
    assert model.route(other, "n0", "n1").bottleneck == 3.0
    assert first.bottleneck == 10.0


def test_fair_share_and_duration():
    """Test per-flow share and latency charged once per transfer"""
    link = LinkSpec("a", "b", 12.0, 0.25)
    route = Route((link, LinkSpec("b", "c", 6.0, 0.25)))
    assert link_share(link, 3) == 4.0
    assert link_share(link, 0, 0.5) == 6.0
    rate = effective_rate(route, {("a", "b"): 2, ("b", "c"): 1}, NoInterference())
    assert rate == 6.0
    assert transfer_duration(route, 12.0, rate) == pytest.approx(2.5)
