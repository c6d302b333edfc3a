"""Tests for the event heap, clock rounding and the simulation loop"""
import pytest

from src.engine import EventKind, EventQueue, format_micros, round_time, run_simulation, to_micros
from src.error_handling import Deadlock, NonQuiescent
from src.events import TraceBus, TraceCollector
from src.mac.interference import CsmaBianchi
from src.models.dag import DagEdge, DagSpec, TaskSpec
from src.models.network import LinkSpec, Network, NodeSpec
from src.routing import DirectRouting, get_routing_model
from src.scenario.generators import diamond10, fork_join, grid_network, pipeline, rgg_network
from src.scenario.trace import emit_trace
from src.scheduling import ManualScheduler, get_scheduler


def run(network, dags, bus=None, **options):
    return run_simulation(network, dags, ManualScheduler(), DirectRouting(), bus=bus, **options)


@pytest.fixture
def staggered_dag() -> DagSpec:
    """Two flows over n0->n1; the second joins while the first is in flight"""
    tasks = (
        TaskSpec("p1", 100.0, "n0"),
        TaskSpec("p2", 200.0, "n0"),
        TaskSpec("c1", 50.0, "n1"),
        TaskSpec("c2", 50.0, "n1"),
    )
    edges = (DagEdge("p1", "c1", 30.0), DagEdge("p2", "c2", 20.0))
    return DagSpec("stag", tasks, edges)


def test_to_micros_rounds_half_up():
    assert to_micros(0.0000005) == 1
    assert to_micros(1.0000004) == 1_000_000
    assert to_micros(2.5) == 2_500_000
    assert round_time(0.1234565) == pytest.approx(0.123457)
    assert format_micros(4_000_000) == "4.000000"
    assert format_micros(1_234_567) == "1.234567"
    with pytest.raises(ValueError):
        to_micros(-1.0)


def test_event_queue_order_and_cancel():
    """Test completions pop before starts at equal time and cancelled events vanish"""
    queue = EventQueue()
    start = queue.push(5, EventKind.TRANSFER_START, flow="f")
    done = queue.push(5, EventKind.TASK_COMPLETE, dag="d", task="t")
    later = queue.push(9, EventKind.TASK_READY, dag="d", task="u")
    early_b = queue.push(1, EventKind.TASK_READY, dag="d", task="b")
    early_a = queue.push(1, EventKind.TASK_READY, dag="d", task="a")
    queue.cancel(later)
    queue.cancel(later)
    assert len(queue) == 4
    assert [queue.pop() for _ in range(4)] == [early_a, early_b, done, start]
    assert queue.pop() is None
    assert len(queue) == 0


def test_two_node_chain_makespan(two_node_network, chain_dag):
    """Test 1 s compute, 2 s transfer at 10 MB/s, then 1 s compute"""
    result = run(two_node_network, [chain_dag])
    assert result.makespan == pytest.approx(4.0)
    assert result.dag_makespans == {"chain": pytest.approx(4.0)}
    transfer = result.transfer("chain/produce->consume")
    assert (transfer.start, transfer.end) == (pytest.approx(1.0), pytest.approx(3.0))
    assert transfer.route == ("n0", "n1")
    assert transfer.average_rate == pytest.approx(10.0)
    assert result.link_usage[("n0", "n1")].busy_time == pytest.approx(2.0)
    assert result.links_used == 1
    assert result.plans == {"chain": {"produce": "n0", "consume": "n1"}}


def test_trace_lifecycle_order(two_node_network, chain_dag, collector):
    bus, records = collector
    run(two_node_network, [chain_dag], bus=bus)
    assert records.kinds() == [
        "dag_inject",
        "task_ready",
        "task_start",
        "task_complete",
        "transfer_start",
        "transfer_complete",
        "task_ready",
        "task_start",
        "task_complete",
    ]
    assert [r.t_us for r in records.records] == [0, 0, 0, 1_000_000, 1_000_000, 3_000_000, 3_000_000, 3_000_000, 4_000_000]
    assert records.of_kind("transfer_start")[0].detail == {"mb": 20.0, "route": ["n0", "n1"]}
    assert records.of_kind("transfer_complete")[0].node == "n1"


def test_runs_are_deterministic(two_node_network, staggered_dag):
    """Test identical inputs give identical trace records"""
    traces = []
    for _ in range(2):
        bus = TraceBus()
        records = TraceCollector(bus)
        run(two_node_network, [staggered_dag], bus=bus)
        traces.append(records.records)
    assert traces[0] == traces[1]


def test_fifo_node_queue(two_node_network):
    """Test a busy node queues ready tasks in readiness order"""
    dag = DagSpec("fifo", (TaskSpec("a", 100.0, "n0"), TaskSpec("b", 100.0, "n0")))
    result = run(two_node_network, [dag])
    b = result.task("fifo", "b")
    assert (b.ready, b.start, b.end) == (0.0, pytest.approx(1.0), pytest.approx(2.0))
    assert result.makespan == pytest.approx(2.0)


def test_flows_share_a_link_fairly(two_node_network):
    tasks = (TaskSpec("src", 100.0, "n0"), TaskSpec("x", 50.0, "n1"), TaskSpec("y", 50.0, "n1"))
    dag = DagSpec("fan", tasks, (DagEdge("src", "x", 10.0), DagEdge("src", "y", 10.0)))
    result = run(two_node_network, [dag])
    for flow in ("fan/src->x", "fan/src->y"):
        assert result.transfer(flow).average_rate == pytest.approx(5.0)
    assert result.link_usage[("n0", "n1")].flows == 2


def test_rate_change_freezes_progress(two_node_network, staggered_dag, collector):
    """Test a joining flow halves the first flow's rate and bytes are conserved"""
    bus, records = collector
    result = run(two_node_network, [staggered_dag], bus=bus)
    first = result.transfer("stag/p1->c1")
    second = result.transfer("stag/p2->c2")
    assert first.end == pytest.approx(5.0)
    assert second.end == pytest.approx(6.0)
    assert result.makespan == pytest.approx(7.0)

    changes = records.of_kind("rate_change")
    assert [(r.flow, r.detail["old"], r.detail["new"]) for r in changes] == [
        ("stag/p1->c1", 10.0, 5.0),
        ("stag/p2->c2", 5.0, 10.0),
    ]
    assert changes[0].detail["remaining"] == pytest.approx(10.0)
    assert changes[0].link == "n0->n1"
    for transfer in (first, second):
        assert transfer.delivered == pytest.approx(transfer.size, abs=1e-6)


def test_colocated_transfer_is_instant(two_node_network, collector):
    bus, records = collector
    tasks = (TaskSpec("a", 100.0, "n0"), TaskSpec("b", 100.0, "n0"))
    dag = DagSpec("local", tasks, (DagEdge("a", "b", 50.0),))
    result = run(two_node_network, [dag], bus=bus)
    assert result.makespan == pytest.approx(2.0)
    assert records.of_kind("transfer_start") == []
    assert records.of_kind("transfer_complete")[0].detail == {"mb": 50.0, "colocated": True}
    assert result.transfer("local/a->b").colocated
    assert result.mean_hops == 0.0


def test_unreachable_transfer_deadlocks(chain_dag):
    """Test a transfer without a route leaves its consumer stuck"""
    network = Network((NodeSpec("n0", 100.0), NodeSpec("n1", 50.0)), ())
    with pytest.raises(Deadlock) as exc:
        run(network, [chain_dag])
    assert exc.value.stuck_tasks == ["chain/consume"]
    assert exc.value.details["stalled_transfers"] == ["chain/produce->consume"]


def test_event_cap(two_node_network, chain_dag):
    with pytest.raises(NonQuiescent):
        run(two_node_network, [chain_dag], event_cap=3)


def test_staggered_injection(two_node_network, chain_dag):
    """Test a later DAG waits for its injection time and shares the nodes"""
    late = chain_dag.shifted("chain_1", 0.5)
    result = run(two_node_network, [chain_dag, late])
    assert result.task("chain_1", "produce").start == pytest.approx(1.0)
    # the two transfers overlap on n0->n1 from t=2 to t=4
    assert result.dag_makespans["chain"] == pytest.approx(5.0)
    assert result.dag_makespans["chain_1"] == pytest.approx(6.0)


GENERATED_SEEDS = range(10)


def generated_scenario(topology: str, seed: int):
    """Seeded network plus one template DAG; template and payload vary with the seed"""
    if topology == "grid":
        network = grid_network(3, 3, seed=seed)
    else:
        network, _ = rgg_network(12, 150.0, seed=seed)
    data_size = 1.0 + seed
    template = (fork_join, diamond10, lambda dag_id, data_size: pipeline(dag_id, 12, data_size=data_size))[seed % 3]
    return network, template(f"{topology}{seed}", data_size=data_size), data_size


def run_generated(network, dag, bus):
    routing = get_routing_model("shortest_path")
    return run_simulation(network, [dag], get_scheduler("heft", routing), routing, CsmaBianchi(network), bus=bus)


@pytest.mark.parametrize("topology", ["grid", "rgg"])
@pytest.mark.parametrize("seed", GENERATED_SEEDS)
def test_generated_runs_repeat_and_conserve_bytes(topology, seed):
    """Test two runs of a generated scenario emit the same trace bytes and deliver every edge in full"""
    network, dag, data_size = generated_scenario(topology, seed)
    traces, results = [], []
    for _ in range(2):
        bus = TraceBus()
        records = TraceCollector(bus)
        results.append(run_generated(network, dag, bus))
        traces.append("".join(emit_trace(records.records)).encode("utf-8"))
    assert traces[0] == traces[1]
    assert results[0].makespan == results[1].makespan

    transfers = results[0].transfers
    assert len(transfers) == len(dag.edges)
    for transfer in transfers:
        assert transfer.size == data_size
        if transfer.colocated:
            assert transfer.phases == ()
        else:
            assert transfer.delivered == pytest.approx(data_size, abs=1e-4)


def test_latency_tail_keeps_link_share():
    """Test a flow holds its share of the link until its completion, latency included"""
    nodes = (NodeSpec("n0", 100.0), NodeSpec("n1", 50.0))
    network = Network(nodes, (LinkSpec("n0", "n1", 10.0, 0.5),))
    tasks = (TaskSpec("p", 100.0, "n0"), TaskSpec("c1", 50.0, "n1"), TaskSpec("c2", 50.0, "n1"))
    dag = DagSpec("tail", tasks, (DagEdge("p", "c1", 10.0), DagEdge("p", "c2", 20.0)))
    bus = TraceBus()
    records = TraceCollector(bus)
    result = run(network, [dag], bus=bus)

    assert result.transfer("tail/p->c1").end == pytest.approx(3.5)
    assert result.transfer("tail/p->c2").end == pytest.approx(4.75)
    changes = records.of_kind("rate_change")
    assert [(r.flow, r.t, r.detail["old"], r.detail["new"]) for r in changes] == [
        ("tail/p->c1", 1.0, 10.0, 5.0),
        ("tail/p->c2", 3.5, 5.0, 10.0),
    ]
    assert changes[1].detail["remaining"] == pytest.approx(7.5)
    assert result.makespan == pytest.approx(5.75)
