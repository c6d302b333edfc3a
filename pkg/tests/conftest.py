"""Shared fixtures for the ncsim test suite"""
import textwrap
from pathlib import Path
from typing import Callable

import pytest

from src.events import TraceBus, TraceCollector
from src.models.dag import DagEdge, DagSpec, TaskSpec
from src.models.network import LinkSpec, Network, NodeSpec
from src.rf.mcs import DEFAULT_MCS_TABLE
from src.rf.phy import RfConfig

TWO_NODE_YAML = """
name: two_node
seed: 7
nodes:
  - {id: n0, capacity: 100}
  - {id: n1, capacity: 50}
links:
  - {src: n0, dst: n1, bandwidth: 10.0, bidirectional: true}
routing: direct
scheduler: manual
dags:
  - id: chain
    tasks:
      - {id: produce, compute_cost: 100, pinned_to: n0}
      - {id: consume, compute_cost: 50, pinned_to: n1}
    edges:
      - {src: produce, dst: consume, data_size: 20.0}
"""


@pytest.fixture
def rf() -> RfConfig:
    return RfConfig()


@pytest.fixture
def mcs_table():
    return DEFAULT_MCS_TABLE


@pytest.fixture
def two_node_network() -> Network:
    """n0 (100 units/s) and n1 (50 units/s) joined by 10 MB/s both ways"""
    nodes = (NodeSpec("n0", 100.0, (0.0, 0.0)), NodeSpec("n1", 50.0, (30.0, 0.0)))
    links = (LinkSpec("n0", "n1", 10.0), LinkSpec("n1", "n0", 10.0))
    return Network(nodes, links)


@pytest.fixture
def chain_dag() -> DagSpec:
    tasks = (TaskSpec("produce", 100.0, "n0"), TaskSpec("consume", 50.0, "n1"))
    return DagSpec("chain", tasks, (DagEdge("produce", "consume", 20.0),))


@pytest.fixture
def fork_join_dag() -> DagSpec:
    tasks = tuple(TaskSpec(f"T{i}", 500.0) for i in range(5))
    pairs = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]
    return DagSpec("fj", tasks, tuple(DagEdge(f"T{a}", f"T{b}", 0.0) for a, b in pairs))


@pytest.fixture
def collector():
    """Trace bus with an attached in-memory collector"""
    bus = TraceBus()
    records = TraceCollector()
    bus.subscribe("*", records)
    return bus, records


@pytest.fixture
def write_scenario(tmp_path) -> Callable[[str, str], Path]:
    """Write dedented YAML text to a file under tmp_path"""
    def _write(text: str, name: str = "scenario.yml") -> Path:
        path = tmp_path / name
        path.write_text(textwrap.dedent(text), encoding="utf-8")
        return path
    return _write


@pytest.fixture
def two_node_yaml() -> str:
    return TWO_NODE_YAML
