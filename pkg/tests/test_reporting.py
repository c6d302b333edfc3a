"""Tests for experiment CSV/Markdown output and the aggregate report"""
import json

import pandas as pd
import pytest

from src.experiments.base import ExperimentPoint, ExperimentResult, FactorialCell
from src.reporting import ReportBuilder, experiment_chart, trace_gantt


@pytest.fixture
def exp1_result():
    points = [
        ExperimentPoint({"distance_m": d}, "rate_mb_s", rate, rate, 0.001)
        for d, rate in ((1.0, 17.925), (30.0, 8.6), (140.0, 0.0))
    ]
    return ExperimentResult("exp1", points=points, checks={"runtime_under_5s": True})


@pytest.fixture
def factorial_result():
    cells = [
        FactorialCell("grid2x2", "fork_join5", "widest_path", "heft", "none", 10.0, wall_clock_s=0.2, rss_mb=80.0),
        FactorialCell("grid2x2", "fork_join5", "widest_path", "heft", "csma_bianchi", 12.5, wall_clock_s=0.3),
    ]
    points = [ExperimentPoint({"network": "grid2x2", "dag": "fork_join5"}, "slowdown", 1.25)]
    return ExperimentResult("factorial", points=points, cells=cells, checks={"all_cells_complete": True},
                            summary={"mean_regret": 1.0})


def test_write_experiment_files(tmp_path, exp1_result):
    """Test the per-experiment directory holds points, summary, result and chart"""
    target = ReportBuilder(tmp_path).write_experiment(exp1_result)
    assert target == tmp_path / "exp1"
    points = pd.read_csv(target / "points.csv")
    assert list(points["distance_m"]) == [1.0, 30.0, 140.0]
    assert points["passed"].all()
    entry = json.loads((target / "result.json").read_text(encoding="utf-8"))
    assert entry["passed"] is True
    assert entry["points_passed"] == 3
    assert entry["checks"] == {"runtime_under_5s": True}
    summary = (target / "summary.md").read_text(encoding="utf-8")
    assert summary.startswith("# Experiment exp1")
    assert "| exp1 | 3 | 3 | 1/1 | PASS |" in summary
    assert (target / "chart.html").exists()
    assert not (target / "cells.csv").exists()


def test_cells_split_from_timing(tmp_path, factorial_result):
    target = ReportBuilder(tmp_path).write_experiment(factorial_result, chart=False)
    cells = pd.read_csv(target / "cells.csv")
    assert "wall_clock_s" not in cells.columns
    assert list(cells["makespan"]) == [10.0, 12.5]
    profile = pd.read_csv(target / "profile.csv")
    assert list(profile["wall_clock_s"]) == [0.2, 0.3]
    assert "- mean_regret: 1" in (target / "summary.md").read_text(encoding="utf-8")


def test_failures_listed(tmp_path):
    result = ExperimentResult("exp2", points=[ExperimentPoint({"separation_m": 75.0}, "rate_mb_s", 3.0, 3.225, 0.001)])
    target = ReportBuilder(tmp_path).write_experiment(result, chart=False)
    summary = (target / "summary.md").read_text(encoding="utf-8")
    assert "FAIL" in summary
    assert "- rate_mb_s at {'separation_m': 75.0}" in summary


def test_build_report(tmp_path, exp1_result, factorial_result):
    """Test the aggregate report lists every experiment and charts every trace"""
    builder = ReportBuilder(tmp_path)
    builder.write_experiment(exp1_result, chart=False)
    builder.write_experiment(factorial_result, chart=False)
    traces = tmp_path / "traces"
    traces.mkdir()
    lines = [
        {"kind": "meta"},
        {"t": 0.0, "kind": "task_start", "dag": "d", "task": "a", "node": "n0"},
        {"t": 1.0, "kind": "task_complete", "dag": "d", "task": "a", "node": "n0"},
    ]
    (traces / "run.jsonl").write_text("".join(json.dumps(l) + "\n" for l in lines), encoding="utf-8")

    report = builder.build_report()
    text = report.read_text(encoding="utf-8")
    assert text.startswith("# Simulation report")
    assert "| exp1 |" in text and "| factorial |" in text
    assert (traces / "run_gantt.html").exists()


def test_trace_gantt_bars():
    records = [
        {"t": 0.0, "kind": "task_start", "dag": "d", "task": "a", "node": "n0"},
        {"t": 2.0, "kind": "task_complete", "dag": "d", "task": "a", "node": "n0"},
        {"t": 0.5, "kind": "task_start", "dag": "e", "task": "b", "node": "n1"},
        {"t": 1.5, "kind": "task_complete", "dag": "e", "task": "b", "node": "n1"},
    ]
    fig = trace_gantt(records)
    assert [trace.name for trace in fig.data] == ["d", "e"]
    assert list(fig.data[0].x) == [2.0]
    assert list(fig.data[1].base) == [0.5]


def test_experiment_chart_selection(exp1_result):
    assert experiment_chart("exp1", exp1_result.points_frame()) is not None
    assert experiment_chart("regret", exp1_result.points_frame()) is None
    assert experiment_chart("exp1", pd.DataFrame()) is None
