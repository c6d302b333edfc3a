"""Tests for network, DAG and snapshot domain types and scenario validation"""
import pytest

from src.error_handling import (
    CyclicDag,
    DuplicateId,
    IllegalTransition,
    MissingPosition,
    NonPositiveDistance,
    ScenarioValidationError,
    UnknownNodeReference,
)
from src.models.dag import DagEdge, DagSpec, TaskEvent, TaskSpec, TaskState, transition_task
from src.models.network import LinkSpec, Network, NodeSpec, expand_undirected
from src.models.snapshot import NetworkSnapshot, PlacementPlan
from src.models.validation import collect_violations, validate_scenario


def test_network_lookups(two_node_network):
    """Test node and link lookups keep declaration order"""
    assert two_node_network.node_ids == ["n0", "n1"]
    assert two_node_network.link(("n0", "n1")).bandwidth == 10.0
    assert two_node_network.link(("n0", "n2")) is None
    assert two_node_network.distance("n0", "n1") == pytest.approx(30.0)
    assert two_node_network.positioned


def test_zero_bandwidth_link_is_unusable():
    """Test that a 0 MB/s link is kept but never offered for routing"""
    network = Network(
        (NodeSpec("a", 1.0), NodeSpec("b", 1.0)),
        (LinkSpec("a", "b", 0.0), LinkSpec("b", "a", 5.0)),
    )
    assert network.usable_links() == [LinkSpec("b", "a", 5.0)]
    assert network.out_links("a") == []
    assert len(network.out_links("a", usable_only=False)) == 1


def test_expand_undirected():
    links = expand_undirected([LinkSpec("a", "b", 3.0, 0.01)])
    assert [l.key for l in links] == [("a", "b"), ("b", "a")]
    assert links[1].latency == 0.01


def test_dag_structure(fork_join_dag):
    """Test entry/exit tasks and adjacency of the fork-join"""
    assert fork_join_dag.entry_tasks == ["T0"]
    assert fork_join_dag.exit_tasks == ["T4"]
    assert fork_join_dag.successors("T0") == ["T1", "T2", "T3"]
    assert fork_join_dag.predecessors("T4") == ["T1", "T2", "T3"]
    assert fork_join_dag.topological_order()[0] == "T0"
    assert fork_join_dag.qualified("T2") == "fj/T2"


def test_dag_copies(fork_join_dag):
    heavier = fork_join_dag.with_data_size(7.0)
    assert all(e.data_size == 7.0 for e in heavier.edges)
    shifted = fork_join_dag.shifted("fj_1", 0.5)
    assert (shifted.id, shifted.inject_at) == ("fj_1", 0.5)
    assert shifted.tasks == fork_join_dag.tasks


@pytest.mark.parametrize(
    "state,event,expected",
    [
        (TaskState.PENDING, TaskEvent.INPUTS_DELIVERED, TaskState.READY),
        (TaskState.READY, TaskEvent.NODE_IDLE, TaskState.RUNNING),
        (TaskState.READY, TaskEvent.NODE_BUSY, TaskState.QUEUED),
        (TaskState.QUEUED, TaskEvent.NODE_IDLE, TaskState.RUNNING),
        (TaskState.RUNNING, TaskEvent.FINISHED, TaskState.COMPLETED),
    ],
)
def test_task_lifecycle(state, event, expected):
    assert transition_task(state, event) is expected


def test_illegal_transition():
    """Test that skipping a lifecycle step raises"""
    with pytest.raises(IllegalTransition):
        transition_task(TaskState.PENDING, TaskEvent.FINISHED)
    with pytest.raises(IllegalTransition):
        transition_task(TaskState.COMPLETED, TaskEvent.NODE_IDLE)


def test_validate_accepts_clean_scenario(two_node_network, chain_dag):
    model = validate_scenario(two_node_network.nodes, two_node_network.links, [chain_dag])
    assert model.network.node_ids == ["n0", "n1"]
    assert model.dags == (chain_dag,)


def test_validate_detects_cycle(two_node_network):
    """Test that a two-task cycle is reported as CyclicDag"""
    dag = DagSpec(
        "loop",
        (TaskSpec("a", 1.0), TaskSpec("b", 1.0)),
        (DagEdge("a", "b"), DagEdge("b", "a")),
    )
    with pytest.raises(CyclicDag):
        validate_scenario(two_node_network.nodes, two_node_network.links, [dag])


def test_validate_detects_unknown_pin(two_node_network):
    dag = DagSpec("d", (TaskSpec("a", 1.0, "n9"),))
    with pytest.raises(UnknownNodeReference):
        validate_scenario(two_node_network.nodes, two_node_network.links, [dag])


def test_validate_detects_duplicate_node():
    nodes = (NodeSpec("n0", 1.0), NodeSpec("n0", 2.0))
    with pytest.raises(DuplicateId):
        validate_scenario(nodes, (), [DagSpec("d", (TaskSpec("a", 1.0),))])


def test_validate_rf_positions():
    """Test that RF mode needs distinct positions on every node"""
    dag = DagSpec("d", (TaskSpec("a", 1.0),))
    with pytest.raises(MissingPosition):
        validate_scenario((NodeSpec("a", 1.0, (0.0, 0.0)), NodeSpec("b", 1.0)), (), [dag], rf_enabled=True)
    with pytest.raises(NonPositiveDistance):
        validate_scenario(
            (NodeSpec("a", 1.0, (1.0, 1.0)), NodeSpec("b", 1.0, (1.0, 1.0))), (), [dag], rf_enabled=True
        )


def test_validate_aggregates_violations():
    """Test that several problems surface together"""
    nodes = (NodeSpec("n0", 1.0), NodeSpec("n0", 1.0))
    links = (LinkSpec("n0", "ghost", 1.0),)
    dag = DagSpec("d", (TaskSpec("a", 1.0, "nowhere"),))
    assert len(collect_violations(nodes, links, [dag])) == 3
    with pytest.raises(ScenarioValidationError) as exc:
        validate_scenario(nodes, links, [dag])
    assert len(exc.value.violations) == 3
    assert exc.value.exit_code == 2


def test_snapshot_serialization_is_stable(two_node_network):
    """Test that equal snapshots serialize to equal bytes"""
    a = NetworkSnapshot.of(two_node_network, {"n0": 1}, {("n0", "n1"): 2})
    b = NetworkSnapshot.of(two_node_network, {"n0": 1}, {("n0", "n1"): 2})
    assert a.to_bytes() == b.to_bytes()
    assert dict(a.queue_depths) == {"n0": 1, "n1": 0}
    assert a.capacity("n1") == 50.0


def test_placement_plan_requires_every_task(chain_dag):
    plan = PlacementPlan.from_mapping(chain_dag, {"produce": "n0", "consume": "n1"})
    assert plan["consume"] == "n1"
    assert list(plan) == ["produce", "consume"]
    with pytest.raises(ValueError):
        PlacementPlan.from_mapping(chain_dag, {"produce": "n0"})
