"""Tests for manual, round-robin, HEFT and CPOP placement"""
from itertools import product

import pytest

from src.error_handling import UnpinnedTask
from src.models.dag import DagEdge, DagSpec, TaskSpec
from src.models.network import LinkSpec, Network, NodeSpec
from src.models.snapshot import NetworkSnapshot
from src.routing import get_routing_model
from src.scheduling import (
    UNREACHABLE_BANDWIDTH,
    VirtualNetwork,
    build_virtual_network,
    critical_path,
    estimate_makespan,
    get_scheduler,
    schedule_cpop,
    schedule_heft,
    schedule_manual,
    schedule_round_robin,
)
from src.scheduling.cpop import task_priorities


def two_speed_vnet(bandwidth: float) -> VirtualNetwork:
    """slow (100 units/s) declared before fast (200 units/s)"""
    return VirtualNetwork(
        node_ids=("slow", "fast"),
        capacities={"slow": 100.0, "fast": 200.0},
        bandwidths={("slow", "fast"): bandwidth, ("fast", "slow"): bandwidth},
        latencies={("slow", "fast"): 0.0, ("fast", "slow"): 0.0},
    )


def best_placement(dag: DagSpec, vnet: VirtualNetwork) -> float:
    """Lowest estimated makespan over every placement of ``dag``"""
    return min(
        estimate_makespan(dag, vnet, dict(zip(dag.task_ids, nodes)))
        for nodes in product(vnet.node_ids, repeat=len(dag.task_ids))
    )


def test_manual_uses_pins(two_node_network, chain_dag):
    plan = schedule_manual(chain_dag, NetworkSnapshot.of(two_node_network))
    assert plan.as_dict() == {"produce": "n0", "consume": "n1"}


def test_manual_rejects_unpinned(two_node_network, fork_join_dag):
    with pytest.raises(UnpinnedTask) as exc:
        schedule_manual(fork_join_dag, NetworkSnapshot.of(two_node_network))
    assert exc.value.details["tasks"] == ["T0", "T1", "T2", "T3", "T4"]


def test_round_robin_skips_pinned_tasks(two_node_network):
    """Test pinned tasks keep their node and do not advance the cycle"""
    dag = DagSpec("rr", (TaskSpec("a", 1.0), TaskSpec("b", 1.0, "n0"), TaskSpec("c", 1.0), TaskSpec("d", 1.0)))
    plan = schedule_round_robin(dag, NetworkSnapshot.of(two_node_network))
    assert plan.as_dict() == {"a": "n0", "b": "n0", "c": "n1", "d": "n0"}


def test_heft_fork_join_reaches_optimum(fork_join_dag):
    """Test HEFT spreads the fork over both nodes when data is free"""
    vnet = two_speed_vnet(10.0)
    plan = schedule_heft(fork_join_dag, vnet)
    assert plan.as_dict() == {"T0": "fast", "T1": "fast", "T2": "slow", "T3": "fast", "T4": "fast"}
    assert estimate_makespan(fork_join_dag, vnet, plan.as_dict()) == pytest.approx(10.0)


def test_heft_avoids_unreachable_pairs(fork_join_dag):
    """Test near-zero bandwidth keeps every task on the fastest node"""
    heavy = fork_join_dag.with_data_size(1.0)
    vnet = two_speed_vnet(UNREACHABLE_BANDWIDTH)
    plan = schedule_heft(heavy, vnet)
    assert set(plan.as_dict().values()) == {"fast"}
    assert estimate_makespan(heavy, vnet, plan.as_dict()) == pytest.approx(12.5)


def test_cpop_matches_heft_on_fork_join(fork_join_dag):
    vnet = two_speed_vnet(10.0)
    heft = schedule_heft(fork_join_dag, vnet)
    cpop = schedule_cpop(fork_join_dag, vnet)
    assert cpop.as_dict() == heft.as_dict()
    assert estimate_makespan(fork_join_dag, vnet, cpop.as_dict()) == pytest.approx(10.0)


@pytest.mark.parametrize(
    "data_size,bandwidth,optimum",
    [(0.0, 10.0, 10.0), (1.0, 10.0, 10.2), (5.0, 10.0, 11.0), (10.0, 10.0, 12.0), (1.0, UNREACHABLE_BANDWIDTH, 12.5)],
)
@pytest.mark.parametrize("schedule", [schedule_heft, schedule_cpop])
def test_list_schedulers_match_exhaustive_search(fork_join_dag, schedule, data_size, bandwidth, optimum):
    """Test both list schedulers reach the best of all 32 two-node placements"""
    dag = fork_join_dag.with_data_size(data_size)
    vnet = two_speed_vnet(bandwidth)
    assert best_placement(dag, vnet) == pytest.approx(optimum)
    plan = schedule(dag, vnet)
    assert estimate_makespan(dag, vnet, plan.as_dict()) == pytest.approx(optimum)


@pytest.mark.parametrize("schedule", [schedule_heft, schedule_cpop])
def test_list_schedulers_miss_optimum_when_transfers_match_compute(fork_join_dag, schedule):
    """Test greedy placement offloads T3 although one node alone is faster"""
    dag = fork_join_dag.with_data_size(20.0)
    vnet = two_speed_vnet(10.0)
    plan = schedule(dag, vnet)
    assert plan.as_dict()["T3"] == "slow"
    assert estimate_makespan(dag, vnet, plan.as_dict()) == pytest.approx(14.0)
    assert best_placement(dag, vnet) == pytest.approx(12.5)


def test_critical_path_of_fork_join(fork_join_dag):
    priorities = task_priorities(fork_join_dag, two_speed_vnet(10.0))
    assert all(p == pytest.approx(11.25) for p in priorities.values())
    assert critical_path(fork_join_dag, priorities) == ["T0", "T1", "T4"]


def test_cpop_keeps_chain_on_one_node():
    """Test a costly chain stays on the critical-path node"""
    tasks = tuple(TaskSpec(f"c{i}", 100.0) for i in range(4))
    edges = tuple(DagEdge(f"c{i}", f"c{i + 1}", 5.0) for i in range(3))
    dag = DagSpec("chain", tasks, edges)
    plan = schedule_cpop(dag, two_speed_vnet(1.0))
    assert set(plan.as_dict().values()) == {"fast"}


def test_cpop_puts_zero_data_critical_path_on_fastest_node():
    """Test every critical-path task lands on the fastest node and the side task offloads"""
    tasks = tuple(TaskSpec(f"c{i}", 100.0) for i in range(4)) + (TaskSpec("side", 50.0),)
    edges = tuple(DagEdge(f"c{i}", f"c{i + 1}", 0.0) for i in range(3))
    edges += (DagEdge("c0", "side", 0.0), DagEdge("side", "c3", 0.0))
    dag = DagSpec("chain_side", tasks, edges)
    vnet = two_speed_vnet(10.0)
    path = critical_path(dag, task_priorities(dag, vnet))
    assert path == ["c0", "c1", "c2", "c3"]
    plan = schedule_cpop(dag, vnet).as_dict()
    assert all(plan[t] == "fast" for t in path)
    assert plan["side"] == "slow"
    assert estimate_makespan(dag, vnet, plan) == pytest.approx(2.0)


def test_single_node_schedulers_agree(fork_join_dag):
    network = Network((NodeSpec("only", 50.0),), ())
    snapshot = NetworkSnapshot.of(network)
    plans = {name: get_scheduler(name).schedule(fork_join_dag, snapshot).as_dict() for name in ("heft", "cpop", "round_robin")}
    assert all(set(p.values()) == {"only"} for p in plans.values())


def test_virtual_network_from_routes():
    """Test pairwise bandwidth is the route bottleneck and unreachable pairs get a floor"""
    network = Network(
        (NodeSpec("a", 1.0), NodeSpec("b", 1.0), NodeSpec("c", 1.0)),
        (LinkSpec("a", "b", 4.0, 0.1), LinkSpec("b", "c", 2.0, 0.2)),
    )
    vnet = build_virtual_network(NetworkSnapshot.of(network), get_routing_model("widest_path"))
    assert vnet.bandwidth("a", "c") == 2.0
    assert vnet.latency("a", "c") == pytest.approx(0.3)
    assert vnet.bandwidth("c", "a") == UNREACHABLE_BANDWIDTH
    assert vnet.comm_cost(4.0, "a", "c") == pytest.approx(2.3)
    assert vnet.comm_cost(4.0, "a", "a") == 0.0
    assert vnet.comm_cost(0.0, "a", "c") == 0.0


def test_unknown_scheduler():
    with pytest.raises(ValueError):
        get_scheduler("random")
