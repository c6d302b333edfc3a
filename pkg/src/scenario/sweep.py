"""Batch execution of independent runs, optionally across worker processes."""
import asyncio
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import yaml

from src.config import NCSIM_WORKERS
from src.error_handling import NcsimError, ParseError, SchemaError
from src.events import TraceBus
from src.utils.logging import LogContext, get_logger

logger = get_logger(__name__)
# Engine records from a sweep job carry the scenario path.
engine_logger = get_logger("src.engine.simulator")


async def run_batch(func: Callable[..., Any], jobs: Sequence[Tuple], workers: int = NCSIM_WORKERS) -> List[Any]:
    """Apply ``func`` to every argument tuple; results keep input order.

    With one worker the jobs run in-process one after another; otherwise
    they fan out over a process pool. ``func`` must be importable at module
    level so it can be pickled.
    """
    if workers <= 1 or len(jobs) <= 1:
        return [func(*args) for args in jobs]
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, func, *args) for args in jobs]
        return list(await asyncio.gather(*futures))


def run_scenario_job(path: str, overrides: Optional[Dict[str, Any]] = None,
                     trace_dir: Optional[str] = None) -> Dict[str, Any]:
    """Run one scenario file and summarize it as a plain dict.

    Errors are returned rather than raised so that they cross process
    boundaries intact.
    """
    from src.scenario.builder import build_scenario
    from src.scenario.parser import apply_overrides, load_scenario
    from src.scenario.trace import JsonlTraceWriter

    started = time.perf_counter()
    summary: Dict[str, Any] = {"scenario": path}
    with LogContext(engine_logger, scenario=str(path)):
        try:
            model = apply_overrides(load_scenario(path), **(overrides or {}))
            scenario = build_scenario(model)
            summary.update(
                name=scenario.name,
                seed=scenario.seed,
                interference=model.interference,
                routing=model.routing,
                scheduler=model.scheduler,
            )
            trace_path = model.output.trace
            if trace_dir is not None:
                trace_path = str(Path(trace_dir) / f"{Path(path).stem}.jsonl")
            if trace_path:
                bus = TraceBus()
                with JsonlTraceWriter(trace_path, scenario.header()) as writer:
                    writer.attach(bus)
                    result = scenario.run(bus)
                summary["trace"] = trace_path
            else:
                result = scenario.run()
            summary.update(status="ok", makespan=result.makespan, events=result.events_processed)
        except NcsimError as e:
            summary.update(status="error", error=e.to_dict(), exit_code=e.exit_code)
            logger.warning(
                "Scenario failed",
                extra={"path": str(path), "error_type": e.error_type, "details": e.details},
            )
    summary["wall_clock_s"] = time.perf_counter() - started
    return summary


def load_manifest(path: Union[str, Path]) -> Tuple[List[Tuple[str, Dict[str, Any]]], Optional[int]]:
    """Read a sweep manifest: a ``scenarios`` list of paths or {path, overrides} entries.

    Paths are resolved against the manifest's directory.
    """
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ParseError(
            getattr(e, "problem", None) or str(e),
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        ) from None
    if not isinstance(raw, dict) or not isinstance(raw.get("scenarios"), list):
        raise SchemaError("manifest needs a scenarios list", key="scenarios")
    unknown = set(raw) - {"scenarios", "workers"}
    if unknown:
        raise SchemaError("Extra inputs are not permitted", key=sorted(unknown)[0])

    entries: List[Tuple[str, Dict[str, Any]]] = []
    for i, item in enumerate(raw["scenarios"]):
        if isinstance(item, str):
            item = {"path": item}
        if not isinstance(item, dict) or "path" not in item:
            raise SchemaError("entry needs a path", key=f"scenarios[{i}]")
        entries.append((str(path.parent / item["path"]), dict(item.get("overrides") or {})))
    workers = raw.get("workers")
    return entries, int(workers) if workers is not None else None


async def run_sweep(manifest: Union[str, Path], workers: Optional[int] = None,
                    trace_dir: Optional[str] = None) -> List[Dict[str, Any]]:
    entries, manifest_workers = load_manifest(manifest)
    workers = workers or manifest_workers or NCSIM_WORKERS
    logger.info("Sweep started", extra={"manifest": str(manifest), "runs": len(entries), "workers": workers})
    results = await run_batch(run_scenario_job, [(p, o, trace_dir) for p, o in entries], workers)
    failed = sum(1 for r in results if r["status"] != "ok")
    logger.info("Sweep finished", extra={"runs": len(results), "failed": failed})
    return results
