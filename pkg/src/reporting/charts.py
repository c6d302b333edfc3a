"""Plotly figures for experiment results and traces."""
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

from src.utils.logging import get_logger

logger = get_logger(__name__)

PALETTE = ("#2196f3", "#ff9800", "#4caf50", "#e91e63", "#9c27b0", "#607d8b")


def _lines(frame: pd.DataFrame, x: str, group: Optional[str], title: str, y_title: str) -> go.Figure:
    fig = go.Figure()
    groups = [(None, frame)] if group is None or group not in frame else list(frame.groupby(group, sort=True))
    for i, (name, part) in enumerate(groups):
        part = part.sort_values(x)
        color = PALETTE[i % len(PALETTE)]
        label = "simulated" if name is None else f"{group}={name}"
        fig.add_trace(go.Scatter(x=part[x], y=part["simulated"], name=label, mode="lines+markers",
                                 line=dict(color=color, width=2)))
        if "predicted" in part and part["predicted"].notna().any():
            fig.add_trace(go.Scatter(x=part[x], y=part["predicted"], name=f"{label} predicted", mode="markers",
                                     marker=dict(color=color, symbol="x", size=9)))
    fig.update_layout(title_text=title, xaxis_title=x, yaxis_title=y_title, height=500)
    return fig


def rate_staircase(points: pd.DataFrame) -> go.Figure:
    rates = points[points["quantity"] == "rate_mb_s"]
    return _lines(rates, "distance_m", None, "Link rate against distance", "MB/s")


def separation_sweep(points: pd.DataFrame) -> go.Figure:
    rates = points[points["quantity"] == "rate_mb_s"]
    return _lines(rates, "separation_m", "link", "Per-link rate against separation", "MB/s")


def contention_curve(points: pd.DataFrame) -> go.Figure:
    fig = make_subplots(rows=1, cols=2, subplot_titles=("Per-link rate", "MAC efficiency"))
    rates = points[(points["quantity"] == "rate_mb_s") & (points["link"] == "A")].sort_values("n")
    eta = points[points["quantity"] == "eta"].sort_values("n")
    fig.add_trace(go.Scatter(x=rates["n"], y=rates["simulated"], name="rate", mode="lines+markers"), row=1, col=1)
    fig.add_trace(go.Scatter(x=eta["n"], y=eta["simulated"], name="eta", mode="lines+markers"), row=1, col=2)
    fig.add_trace(go.Scatter(x=eta["n"], y=eta["predicted"], name="eta reference", mode="markers"), row=1, col=2)
    fig.update_layout(title_text="n-way contention", height=500)
    return fig


def bianchi_curves(points: pd.DataFrame) -> go.Figure:
    frame = points.assign(window=points["w_min"].astype(str) + "/" + points["m"].astype(str))
    return _lines(frame, "n", "window", "Saturation throughput", "S")


def slowdown_curves(points: pd.DataFrame, x: str) -> go.Figure:
    slowdowns = points[points["quantity"] == "slowdown"]
    group = "dag" if "dag" in slowdowns and slowdowns["dag"].nunique() > 1 else None
    return _lines(slowdowns, x, group, "Interference slowdown", "makespan ratio")


def trace_gantt(records: Sequence[Dict[str, Any]]) -> go.Figure:
    """Per-node task bars from task_start/task_complete lines of a trace."""
    starts: Dict[tuple, float] = {}
    rows: List[Dict[str, Any]] = []
    for record in records:
        key = (record.get("dag"), record.get("task"))
        if record.get("kind") == "task_start":
            starts[key] = record["t"]
        elif record.get("kind") == "task_complete" and key in starts:
            rows.append({"node": record["node"], "dag": key[0], "task": key[1],
                         "start": starts[key], "end": record["t"]})
    frame = pd.DataFrame(rows, columns=["node", "dag", "task", "start", "end"])
    fig = go.Figure()
    for i, (dag, part) in enumerate(frame.groupby("dag", sort=True)):
        fig.add_trace(go.Bar(
            y=part["node"],
            x=part["end"] - part["start"],
            base=part["start"],
            orientation="h",
            name=str(dag),
            text=part["task"],
            marker_color=PALETTE[i % len(PALETTE)],
        ))
    fig.update_layout(title_text="Task timeline per node", xaxis_title="seconds", barmode="overlay", height=600)
    fig.update_yaxes(categoryorder="category ascending")
    return fig


def experiment_chart(name: str, points: pd.DataFrame) -> Optional[go.Figure]:
    """The chart matching an experiment's point layout, if any."""
    if points.empty:
        return None
    if name == "exp1":
        return rate_staircase(points)
    if name in ("exp2", "exp4"):
        return separation_sweep(points)
    if name == "exp7":
        return contention_curve(points)
    if name == "bianchi":
        return bianchi_curves(points[points["n"] >= 5])
    if name == "ccr":
        return slowdown_curves(points, "data_size_mb")
    if name == "multidag":
        return slowdown_curves(points, "k")
    return None


def write_html(fig: go.Figure, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.write_html(str(path), include_plotlyjs="cdn", full_html=True)
    logger.debug("Chart written", extra={"path": str(path)})
    return path
