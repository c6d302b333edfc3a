"""Command-line entry point for ncsim."""
import argparse
import asyncio
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from src.config import LOG_FILE, LOG_FORMAT, LOG_LEVEL, NCSIM_ENV, NCSIM_EVENT_CAP, NCSIM_RESULTS_DIR, NCSIM_WORKERS
from src.engine.timing import format_micros, to_micros
from src.error_handling import EXIT_PARSE, EXIT_RUNTIME, NcsimError, SchemaError
from src.events import TraceBus
from src.utils.logging import get_logger, log_error, setup_logging

logger = get_logger(__name__)

INTERFERENCE_CHOICES = ("none", "csma_bianchi")
ROUTING_CHOICES = ("direct", "widest_path", "shortest_path")
SCHEDULER_CHOICES = ("manual", "round_robin", "heft", "cpop")


def cmd_run(args: argparse.Namespace) -> int:
    from src.scenario import JsonlTraceWriter, apply_overrides, build_scenario, load_scenario

    model = apply_overrides(
        load_scenario(args.scenario),
        interference=args.interference,
        seed=args.seed,
        out=args.out,
        scheduler=args.scheduler,
        routing=args.routing,
    )
    scenario = build_scenario(model)
    trace_path = model.output.trace
    if trace_path:
        bus = TraceBus()
        with JsonlTraceWriter(trace_path, scenario.header()) as writer:
            writer.attach(bus)
            result = scenario.run(bus, event_cap=args.event_cap)
    else:
        result = scenario.run(event_cap=args.event_cap)

    print(f"makespan {format_micros(to_micros(result.makespan))} s")
    for dag, makespan in sorted(result.dag_makespans.items()):
        print(f"  {dag}: {format_micros(to_micros(makespan))} s")
    if trace_path:
        print(f"trace {trace_path}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    from src.scenario.sweep import run_sweep

    results = asyncio.run(run_sweep(args.manifest, args.workers, args.trace_dir))
    frame = pd.json_normalize(results)
    columns = [c for c in ("scenario", "status", "makespan", "events", "error.error_type") if c in frame]
    print(frame[columns].to_string(index=False))
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        frame.drop(columns=[c for c in frame if c == "wall_clock_s" or c.startswith("error.timestamp")]).to_csv(
            args.out, index=False, lineterminator="\n"
        )
    codes = [r.get("exit_code", EXIT_RUNTIME) for r in results if r["status"] != "ok"]
    return max(codes, default=0)


def cmd_validate(args: argparse.Namespace) -> int:
    from src.scenario import build_scenario, load_scenario

    scenario = build_scenario(load_scenario(args.scenario))
    print(
        f"ok {scenario.name}: {len(scenario.network.nodes)} nodes, "
        f"{len(scenario.network.links)} links, {len(scenario.dags)} dags"
    )
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    from src.experiments import EXPERIMENTS, run_experiment
    from src.reporting import ReportBuilder

    if args.name not in EXPERIMENTS:
        raise SchemaError(f"unknown experiment; choose from {', '.join(EXPERIMENTS)}", key="name")
    result = run_experiment(args.name, workers=args.workers)
    target = ReportBuilder(args.out).write_experiment(result, chart=not args.no_chart)
    status = "PASS" if result.passed else "FAIL"
    print(f"{result.name}: {status} ({len(result.points)} points, {len(result.checks)} checks) -> {target}")
    for failure in result.failures:
        print(f"  missed: {failure}")
    result.raise_on_mismatch()
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    from src.reporting import ReportBuilder

    results_dir = Path(args.results_dir)
    if not results_dir.is_dir():
        print(f"error: no results directory at {results_dir}", file=sys.stderr)
        return EXIT_PARSE
    print(ReportBuilder(results_dir).build_report())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncsim", description="Flow-level simulator for DAG workflows on wireless networks")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="logging level (default from LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its trace")
    run.add_argument("scenario")
    run.add_argument("--out", help="trace path, overrides output.trace")
    run.add_argument("--interference", choices=INTERFERENCE_CHOICES)
    run.add_argument("--seed", type=int)
    run.add_argument("--scheduler", choices=SCHEDULER_CHOICES)
    run.add_argument("--routing", choices=ROUTING_CHOICES)
    run.add_argument("--event-cap", type=int, default=NCSIM_EVENT_CAP)
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="run every scenario listed in a manifest")
    sweep.add_argument("manifest")
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--trace-dir")
    sweep.add_argument("--out", help="CSV summary path")
    sweep.set_defaults(func=cmd_sweep)

    validate = sub.add_parser("validate", help="parse and check a scenario without running it")
    validate.add_argument("scenario")
    validate.set_defaults(func=cmd_validate)

    experiment = sub.add_parser("experiment", help="run a named experiment")
    experiment.add_argument("name")
    experiment.add_argument("--out", default=NCSIM_RESULTS_DIR)
    experiment.add_argument("--workers", type=int, default=NCSIM_WORKERS)
    experiment.add_argument("--no-chart", action="store_true")
    experiment.set_defaults(func=cmd_experiment)

    report = sub.add_parser("report", help="aggregate experiment results and traces")
    report.add_argument("results_dir")
    report.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level, log_file=LOG_FILE, format_type=LOG_FORMAT, env=NCSIM_ENV)
    try:
        return args.func(args)
    except NcsimError as e:
        print(f"error: {e.error_type}: {e.message}", file=sys.stderr)
        logger.debug(
            "Command failed",
            extra={"error_type": e.error_type, "error_code": e.error_code, "details": e.details},
        )
        return e.exit_code
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return EXIT_RUNTIME
    except Exception as e:
        log_error(logger, e, "Unhandled error", {"command": args.command})
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
