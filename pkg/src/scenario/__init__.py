from src.scenario.builder import Scenario, build_scenario
from src.scenario.parser import apply_overrides, load_scenario, parse_scenario, scenario_hash, serialize_scenario
from src.scenario.schema import ScenarioModel
from src.scenario.trace import JsonlTraceWriter, emit_trace, format_record, read_trace

__all__ = [
    "JsonlTraceWriter",
    "Scenario",
    "ScenarioModel",
    "apply_overrides",
    "build_scenario",
    "emit_trace",
    "format_record",
    "load_scenario",
    "parse_scenario",
    "read_trace",
    "scenario_hash",
    "serialize_scenario",
]
