"""Tests for the trace bus and JSONL trace files"""
import json
from unittest.mock import Mock

import pytest

from src.error_handling import TraceIoError
from src.events import TraceBus, TraceCollector, TraceRecord
from src.scenario import JsonlTraceWriter, build_scenario, emit_trace, format_record, parse_scenario, read_trace


def test_format_record_fixes_order_and_precision():
    """Test subject fields follow t and kind, times keep 6 decimals, other floats 3"""
    record = TraceRecord(
        t_us=1_500_000,
        kind="task_start",
        dag="d",
        task="t",
        node="n0",
        detail={"duration": 0.1234567, "mb": 20.12345},
    )
    assert format_record(record) == (
        '{"t":1.500000,"kind":"task_start","dag":"d","task":"t","node":"n0",'
        '"detail":{"duration":0.123457,"mb":20.123}}'
    )


def test_format_record_omits_empty_fields():
    line = format_record(TraceRecord(t_us=0, kind="dag_inject", dag="d"))
    assert line == '{"t":0.000000,"kind":"dag_inject","dag":"d"}'
    assert json.loads(line)["t"] == 0.0


def test_emit_trace_terminates_lines():
    records = [TraceRecord(t_us=i, kind="task_ready") for i in range(3)]
    lines = list(emit_trace(records))
    assert len(lines) == 3
    assert all(line.endswith("}\n") for line in lines)


def test_bus_delivers_in_subscription_order():
    bus = TraceBus()
    seen = []
    bus.subscribe("task_start", lambda r: seen.append(("kind", r.kind)))
    bus.subscribe("*", lambda r: seen.append(("all", r.kind)))
    bus.emit(TraceRecord(t_us=0, kind="task_start"))
    bus.emit(TraceRecord(t_us=1, kind="task_complete"))
    assert seen == [("kind", "task_start"), ("all", "task_start"), ("all", "task_complete")]


def test_bus_unsubscribe_and_failure():
    """Test a removed handler stays silent and a failing one propagates"""
    bus = TraceBus()
    handler = Mock()
    bus.subscribe("*", handler)
    bus.subscribe("*", handler)
    bus.emit(TraceRecord(t_us=0, kind="x"))
    assert handler.call_count == 1
    bus.unsubscribe("*", handler)
    assert not bus.has_subscribers

    bus.subscribe("x", Mock(side_effect=RuntimeError("boom")))
    with pytest.raises(RuntimeError):
        bus.emit(TraceRecord(t_us=0, kind="x"))


def test_writer_streams_run(two_node_yaml, tmp_path):
    """Test a full run writes a header plus one line per record"""
    scenario = build_scenario(parse_scenario(two_node_yaml))
    path = tmp_path / "traces" / "two_node.jsonl"
    bus = TraceBus()
    collector = TraceCollector(bus)
    with JsonlTraceWriter(path, scenario.header()) as writer:
        writer.attach(bus)
        scenario.run(bus)
    lines = read_trace(path)
    assert lines[0]["kind"] == "meta"
    assert lines[0]["seed"] == 7
    assert [line["kind"] for line in lines[1:]] == collector.kinds()
    assert writer.lines == len(collector.records)
    assert lines[-1] == {"t": 4.0, "kind": "task_complete", "dag": "chain", "task": "consume", "node": "n1"}
    assert path.read_bytes().endswith(b"\n")


def test_writer_without_records(tmp_path):
    path = tmp_path / "empty.jsonl"
    with JsonlTraceWriter(path, {"kind": "meta"}):
        pass
    assert read_trace(path) == [{"kind": "meta"}]


def test_writer_io_errors(tmp_path):
    with pytest.raises(TraceIoError):
        with JsonlTraceWriter(tmp_path):
            pass
    with pytest.raises(TraceIoError):
        read_trace(tmp_path / "missing.jsonl")
