"""Tests for the ncsim command line"""
import json
from unittest.mock import patch

import pytest

from src.error_handling import NoRoute
from src.experiments.base import ExperimentPoint, ExperimentResult
from src.main import build_parser, main


@pytest.fixture(autouse=True)
def quiet_logging(monkeypatch):
    monkeypatch.setattr("src.main.LOG_FILE", None)


@pytest.fixture
def scenario_path(write_scenario, two_node_yaml):
    return write_scenario(two_node_yaml, "two_node.yml")


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_validate(scenario_path, capsys):
    assert main(["validate", str(scenario_path)]) == 0
    assert capsys.readouterr().out.strip() == "ok two_node: 2 nodes, 2 links, 1 dags"


def test_validate_reports_parse_errors(write_scenario, capsys):
    """Test input errors exit with code 2 and a typed message"""
    path = write_scenario("nodes: [\n", "broken.yml")
    assert main(["validate", str(path)]) == 2
    assert capsys.readouterr().err.startswith("error: ParseError:")


def test_validate_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.yml")]) == 2
    assert "ParseError" in capsys.readouterr().err


def test_run_writes_trace(scenario_path, tmp_path, capsys):
    trace = tmp_path / "out" / "trace.jsonl"
    assert main(["run", str(scenario_path), "--out", str(trace)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "makespan 4.000000 s"
    assert out[1] == "  chain: 4.000000 s"
    assert out[2] == f"trace {trace}"
    header = json.loads(trace.read_text(encoding="utf-8").splitlines()[0])
    assert header["kind"] == "meta"


def test_run_overrides_scheduler(scenario_path, capsys):
    """Test a command-line scheduler replaces the file's"""
    assert main(["run", str(scenario_path), "--scheduler", "round_robin"]) == 0
    assert capsys.readouterr().out.startswith("makespan ")


def test_run_deadlock_exits_3(write_scenario, capsys):
    path = write_scenario(
        """
        nodes:
          - {id: a, capacity: 1}
          - {id: b, capacity: 1}
        routing: direct
        scheduler: manual
        dags:
          - id: d
            tasks:
              - {id: x, compute_cost: 1, pinned_to: a}
              - {id: y, compute_cost: 1, pinned_to: b}
            edges:
              - {src: x, dst: y, data_size: 1}
        """
    )
    assert main(["run", str(path)]) == 3
    assert "Deadlock" in capsys.readouterr().err


def test_experiment_mismatch_exits_4(tmp_path, capsys):
    """Test an experiment outside tolerance is written and then fails the command"""
    result = ExperimentResult(
        "exp1",
        points=[ExperimentPoint({"distance_m": 30.0}, "rate_mb_s", simulated=8.0, predicted=8.6, tolerance=0.001)],
    )
    with patch("src.experiments.run_experiment", return_value=result) as runner:
        code = main(["experiment", "exp1", "--out", str(tmp_path), "--no-chart"])
    runner.assert_called_once_with("exp1", workers=1)
    assert code == 4
    out = capsys.readouterr().out
    assert "exp1: FAIL" in out
    assert "missed: rate_mb_s at {'distance_m': 30.0}" in out
    assert (tmp_path / "exp1" / "points.csv").exists()


def test_experiment_unknown_name(tmp_path, capsys):
    assert main(["experiment", "exp99", "--out", str(tmp_path)]) == 2
    assert "SchemaError" in capsys.readouterr().err


def test_report_missing_directory(tmp_path, capsys):
    assert main(["report", str(tmp_path / "none")]) == 2
    assert "no results directory" in capsys.readouterr().err


def test_errors_do_not_log_when_built(caplog):
    with caplog.at_level("DEBUG"):
        NoRoute("a to b", {"src": "a", "dst": "b"})
    assert caplog.records == []


def test_unhandled_error_is_logged_with_traceback(scenario_path, caplog):
    with patch("src.main.setup_logging"), patch("src.main.cmd_validate", side_effect=RuntimeError("boom")):
        with caplog.at_level("ERROR"):
            assert main(["validate", str(scenario_path)]) == 3
    record = next(r for r in caplog.records if r.getMessage() == "Unhandled error")
    assert record.error_type == "RuntimeError"
    assert record.error_message == "boom"
    assert record.command == "validate"
    assert "RuntimeError: boom" in record.traceback
