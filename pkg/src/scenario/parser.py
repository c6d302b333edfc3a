"""Scenario file parsing, serialization and CLI overrides."""
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import ValidationError

from src.error_handling import ParseError, SchemaError
from src.scenario.schema import ScenarioModel
from src.utils.logging import get_logger

logger = get_logger(__name__)


def _error_key(loc) -> str:
    key = ""
    for part in loc:
        if isinstance(part, int):
            key += f"[{part}]"
        else:
            key += f".{part}" if key else str(part)
    return key or "<root>"


def parse_scenario(text: str) -> ScenarioModel:
    """Parse a YAML scenario document into a typed model.

    Raises:
        ParseError: the document is not well-formed YAML
        SchemaError: a key is unknown, missing or has an invalid value
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        if mark is not None:
            raise ParseError(problem, line=mark.line + 1, column=mark.column + 1) from None
        raise ParseError(problem) from None
    if not isinstance(raw, dict):
        raise SchemaError("scenario must be a mapping", key="<root>")

    try:
        model = ScenarioModel.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaError(
            first["msg"],
            key=_error_key(first["loc"]),
            details={"error_count": e.error_count()},
        ) from None

    _check_link_model(model)
    return model


def _check_link_model(model: ScenarioModel) -> None:
    """Geometry rules that depend on whether bandwidths are derived."""
    needs_positions = model.rf_enabled or model.interference == "csma_bianchi"
    if needs_positions:
        for i, node in enumerate(model.nodes):
            if node.position is None:
                raise SchemaError("required when rf or csma_bianchi is used", key=f"nodes[{i}].position")
    for i, link in enumerate(model.links):
        if model.rf_enabled and link.bandwidth is not None:
            raise SchemaError("derived from geometry when rf is set", key=f"links[{i}].bandwidth")
        if not model.rf_enabled and link.bandwidth is None:
            raise SchemaError("required when rf is not set", key=f"links[{i}].bandwidth")


def load_scenario(path: Union[str, Path]) -> ScenarioModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    model = parse_scenario(text)
    logger.debug("Scenario loaded", extra={"path": str(path), "scenario": model.name})
    return model


def scenario_to_dict(model: ScenarioModel) -> Dict[str, Any]:
    return model.model_dump(mode="json", exclude_none=True)


def serialize_scenario(model: ScenarioModel) -> str:
    """YAML text that parses back to an equal model."""
    return yaml.safe_dump(scenario_to_dict(model), sort_keys=False, default_flow_style=None)


def scenario_hash(model: ScenarioModel) -> str:
    canonical = json.dumps(scenario_to_dict(model), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def apply_overrides(
    model: ScenarioModel,
    interference: Optional[str] = None,
    seed: Optional[int] = None,
    out: Optional[str] = None,
    scheduler: Optional[str] = None,
    routing: Optional[str] = None,
) -> ScenarioModel:
    """Return a copy with command-line values taking precedence over the file."""
    data = scenario_to_dict(model)
    if interference is not None:
        data["interference"] = interference
    if seed is not None:
        data["seed"] = seed
    if scheduler is not None:
        data["scheduler"] = scheduler
    if routing is not None:
        data["routing"] = routing
    if out is not None:
        data.setdefault("output", {})["trace"] = str(out)
    # revalidate so overrides meet the same schema as the file
    return parse_scenario(yaml.safe_dump(data, sort_keys=False))
