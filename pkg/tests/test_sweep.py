"""Tests for batch execution and scenario sweeps"""
import operator
from logging import getLogger

import pytest

from src.error_handling import SchemaError
from src.scenario.sweep import load_manifest, run_batch, run_scenario_job, run_sweep


@pytest.fixture
def manifest(write_scenario, two_node_yaml):
    write_scenario(two_node_yaml, "two_node.yml")
    write_scenario("nodes: [\n", "broken.yml")
    return write_scenario(
        """
        workers: 1
        scenarios:
          - two_node.yml
          - path: two_node.yml
            overrides: {scheduler: round_robin, seed: 3}
          - broken.yml
        """,
        "sweep.yml",
    )


@pytest.mark.asyncio
async def test_run_batch_in_process():
    assert await run_batch(operator.add, [(1, 2), (3, 4)], workers=1) == [3, 7]
    assert await run_batch(operator.add, [], workers=4) == []


@pytest.mark.asyncio
async def test_run_batch_process_pool_keeps_order():
    jobs = [(i, i) for i in range(6)]
    assert await run_batch(operator.mul, jobs, workers=2) == [i * i for i in range(6)]


def test_load_manifest_resolves_paths(manifest):
    entries, workers = load_manifest(manifest)
    assert workers == 1
    assert [e[0] for e in entries] == [str(manifest.parent / n) for n in ("two_node.yml", "two_node.yml", "broken.yml")]
    assert entries[1][1] == {"scheduler": "round_robin", "seed": 3}


def test_load_manifest_rejects_unknown_keys(write_scenario):
    path = write_scenario("scenarios: []\nparallel: true\n", "bad.yml")
    with pytest.raises(SchemaError) as exc:
        load_manifest(path)
    assert exc.value.key == "parallel"


def test_run_scenario_job_reports_errors(manifest):
    """Test a failing scenario comes back as a summary rather than an exception"""
    summary = run_scenario_job(str(manifest.parent / "broken.yml"))
    assert summary["status"] == "error"
    assert summary["exit_code"] == 2
    assert summary["error"]["error_type"] == "ParseError"


@pytest.mark.asyncio
async def test_run_sweep(manifest, tmp_path):
    results = await run_sweep(manifest, trace_dir=str(tmp_path / "traces"))
    assert [r["status"] for r in results] == ["ok", "ok", "error"]
    assert results[0]["makespan"] == pytest.approx(4.0)
    assert results[1]["seed"] == 3
    assert results[1]["scheduler"] == "round_robin"
    assert (tmp_path / "traces" / "two_node.jsonl").exists()


def test_sweep_job_tags_engine_records(manifest, caplog):
    """Test engine log records from a sweep job carry the scenario path"""
    path = str(manifest.parent / "two_node.yml")
    with caplog.at_level("INFO", logger="src.engine.simulator"):
        summary = run_scenario_job(path)
    assert summary["status"] == "ok"
    finished = [r for r in caplog.records if r.name == "src.engine.simulator" and r.getMessage() == "Run finished"]
    assert [r.scenario for r in finished] == [path]
    assert getLogger("src.engine.simulator").filters == []
