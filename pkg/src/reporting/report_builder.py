"""CSV, Markdown and chart output for experiments and traces."""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from src.config import TOOL_VERSION
from src.config.paths import TEMPLATES_DIR
from src.error_handling import TraceIoError
from src.experiments.base import ExperimentResult
from src.reporting.charts import experiment_chart, trace_gantt, write_html
from src.scenario.trace import read_trace
from src.utils.logging import get_logger

logger = get_logger(__name__)

RESULT_FILE = "result.json"
SUMMARY_TEMPLATE = "summary.md.j2"
CSV_FLOAT_FORMAT = "%.6f"


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class ReportBuilder:
    """Writes one directory per experiment under ``output_dir``.

    Layout per experiment: points.csv, cells.csv (when the experiment runs
    cells), profile.csv (cell wall clock and memory), result.json,
    summary.md and chart.html.
    """

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.jinja_env = Environment(
            loader=FileSystemLoader(str(TEMPLATES_DIR)),
            autoescape=False,
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.jinja_env.filters["fmt"] = _fmt

    def write_experiment(self, result: ExperimentResult, chart: bool = True) -> Path:
        target = self.output_dir / result.name
        target.mkdir(parents=True, exist_ok=True)
        points = result.points_frame()
        points.to_csv(target / "points.csv", index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        if result.cells:
            # timing columns vary run to run and live apart from the deterministic table
            result.cells_frame().to_csv(target / "cells.csv", index=False, float_format=CSV_FLOAT_FORMAT,
                                        lineterminator="\n")
            result.cells_frame(timing=True)[
                ["network", "dag", "routing", "scheduler", "interference", "wall_clock_s", "rss_mb"]
            ].to_csv(target / "profile.csv", index=False, lineterminator="\n")
        entry = self._entry(result)
        (target / RESULT_FILE).write_text(json.dumps(entry, indent=2, sort_keys=True, default=str) + "\n",
                                          encoding="utf-8")
        (target / "summary.md").write_text(self.render(f"Experiment {result.name}", [entry]), encoding="utf-8")
        if chart:
            fig = experiment_chart(result.name, points)
            if fig is not None:
                write_html(fig, target / "chart.html")
        logger.info(
            "Experiment written",
            extra={"experiment": result.name, "path": str(target), "passed": result.passed},
        )
        return target

    @staticmethod
    def _entry(result: ExperimentResult) -> Dict[str, Any]:
        return {
            "name": result.name,
            "passed": result.passed,
            "points": len(result.points),
            "points_passed": sum(p.passed for p in result.points),
            "checks": dict(result.checks),
            "checks_passed": sum(result.checks.values()),
            "summary": dict(result.summary),
            "failures": result.failures,
        }

    def render(self, title: str, entries: Sequence[Dict[str, Any]]) -> str:
        template = self.jinja_env.get_template(SUMMARY_TEMPLATE)
        return template.render(title=title, experiments=list(entries), tool_version=TOOL_VERSION)

    def build_report(self) -> Path:
        """Aggregate every experiment directory and trace under ``output_dir``.

        Writes report.md plus a Gantt chart next to each ``*.jsonl`` trace.
        """
        entries: List[Dict[str, Any]] = []
        for result_file in sorted(self.output_dir.glob(f"*/{RESULT_FILE}")):
            entries.append(json.loads(result_file.read_text(encoding="utf-8")))
        for trace in sorted(self.output_dir.rglob("*.jsonl")):
            self.write_gantt(trace)
        report = self.output_dir / "report.md"
        report.write_text(self.render("Simulation report", entries), encoding="utf-8")
        logger.info("Report built", extra={"path": str(report), "experiments": len(entries)})
        return report

    def write_gantt(self, trace_path: Union[str, Path], output: Optional[Union[str, Path]] = None) -> Optional[Path]:
        trace_path = Path(trace_path)
        try:
            records = read_trace(trace_path)
        except (TraceIoError, ValueError) as e:
            logger.warning("Skipping unreadable trace", extra={"path": str(trace_path), "error": str(e)})
            return None
        return write_html(trace_gantt(records), output or trace_path.with_name(f"{trace_path.stem}_gantt.html"))
