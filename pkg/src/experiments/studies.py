"""Evaluation studies over generated grids and random geometric graphs.

Every study is a grid of independent engine runs (cells). Cells run through
``run_batch`` so they can fan out over worker processes; results are sorted
back into grid order before aggregation.
"""
import asyncio
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.config import NCSIM_SEED, NCSIM_WORKERS
from src.engine.simulator import Simulator
from src.error_handling import IncompleteGrid, NcsimError
from src.experiments.base import ExperimentPoint, ExperimentResult, FactorialCell
from src.mac.conflict import ConflictGraph, build_conflict_graph
from src.mac.interference import CsmaBianchi, InterferenceModel, NoInterference
from src.models.dag import DagSpec
from src.models.network import Network
from src.monitoring import RunProfiler
from src.rf.phy import RfConfig, carrier_sense_range
from src.routing.routes import get_routing_model
from src.scenario.generators import (
    average_degree,
    diamond10,
    fork_join,
    grid_network,
    pipeline,
    rgg_network,
    undirected_link_count,
)
from src.scenario.sweep import run_batch
from src.scheduling import get_scheduler
from src.utils.logging import LogContext, get_logger

logger = get_logger(__name__)
engine_logger = get_logger("src.engine.simulator")

GRIDS = {"grid2x2": (2, 2), "grid3x3": (3, 3), "grid4x4": (4, 4)}
RGG_NETWORK = "rgg100"
STUDY_DAGS = ("fork_join5", "diamond10", "pipeline20")
RGG_DAGS = ("pipeline30", "pipeline40", "pipeline50")
# Tie order when two schedulers reach the same makespan.
SCHEDULER_ORDER = ("heft", "cpop", "round_robin")
ROUTINGS = ("widest_path", "shortest_path")
INTERFERENCE_MODELS = ("none", "csma_bianchi")

CCR_DATA_SIZES_MB = (0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)
MULTIDAG_COUNTS = (1, 2, 3, 4, 5)
MULTIDAG_STAGGER_S = 0.5
# At 10 MB per edge HEFT keeps a fork-join on one node and the copies never share the air.
MULTIDAG_DATA_SIZE_MB = 5.0
CELL_BUDGET_S = 2.0
RGG_BUDGET_S = 600.0
RGG_LINK_BAND = (250, 400)
RGG_DEGREE_BAND = (5.0, 8.0)
MAKESPAN_TOLERANCE = 1e-9


@lru_cache(maxsize=None)
def study_network(name: str, seed: int = NCSIM_SEED) -> Network:
    if name in GRIDS:
        rows, cols = GRIDS[name]
        return grid_network(rows, cols, seed=seed)
    if name == RGG_NETWORK:
        network, _ = rgg_network(100, 500.0, seed=seed)
        return network
    raise ValueError(f"unknown study network {name!r}")


@lru_cache(maxsize=None)
def study_conflict_graph(name: str, seed: int = NCSIM_SEED) -> ConflictGraph:
    network = study_network(name, seed)
    return build_conflict_graph(network, carrier_sense_range(RfConfig()))


def study_dag(name: str, data_size: Optional[float] = None) -> DagSpec:
    if name == "fork_join5":
        dag = fork_join(name)
    elif name == "diamond10":
        dag = diamond10(name)
    elif name.startswith("pipeline"):
        dag = pipeline(name, int(name[len("pipeline"):]))
    else:
        raise ValueError(f"unknown study DAG {name!r}")
    return dag.with_data_size(data_size) if data_size is not None else dag


def study_workload(name: str, data_size: Optional[float] = None, count: int = 1,
                   stagger: float = MULTIDAG_STAGGER_S) -> List[DagSpec]:
    """``count`` copies of one DAG injected ``stagger`` seconds apart."""
    dag = study_dag(name, data_size)
    if count == 1:
        return [dag]
    return [dag.shifted(f"{name}_{i}", i * stagger) for i in range(count)]


def _interference(network_name: str, seed: int, name: str) -> InterferenceModel:
    if name == "none":
        return NoInterference()
    return CsmaBianchi(
        study_network(network_name, seed),
        conflict_graph=study_conflict_graph(network_name, seed),
    )


def _plan_label(plans: Dict[str, Dict[str, str]]) -> str:
    return ";".join(
        f"{dag}:" + ",".join(f"{task}@{node}" for task, node in plan.items())
        for dag, plan in sorted(plans.items())
    )


def run_cell(
    network_name: str,
    dag_name: str,
    routing: str,
    scheduler: str,
    interference: str,
    data_size: Optional[float] = None,
    dag_count: int = 1,
    seed: int = NCSIM_SEED,
) -> FactorialCell:
    """One engine run; errors are recorded on the cell."""
    label = dag_name if dag_count == 1 else f"{dag_name}x{dag_count}"
    cell = FactorialCell(network_name, label, routing, scheduler, interference, math.nan, data_size=data_size)
    profiler = RunProfiler(f"{network_name}/{label}/{routing}/{scheduler}/{interference}")
    try:
        network = study_network(network_name, seed)
        dags = study_workload(dag_name, data_size, dag_count)
        model = _interference(network_name, seed, interference)
        routing_model = get_routing_model(routing)
        with profiler, LogContext(engine_logger, cell=profiler.metrics.label):
            result = Simulator(network, dags, get_scheduler(scheduler, routing_model), routing_model, model,
                               seed=seed).run()
    except NcsimError as e:
        cell.error = f"{e.error_type}: {e.message}"
        logger.warning("Cell failed", extra={"cell": profiler.metrics.label, "error_type": e.error_type})
        return cell
    cell.makespan = result.makespan
    cell.plan = _plan_label(result.plans)
    cell.mean_hops = result.mean_hops
    cell.links_used = result.links_used
    cell.wall_clock_s = profiler.metrics.wall_clock_s
    cell.rss_mb = profiler.metrics.rss_mb
    logger.debug("Cell done", extra={"cell": profiler.metrics.label, "makespan": cell.makespan})
    return cell


def run_cells(jobs: Sequence[Tuple], workers: int = NCSIM_WORKERS) -> List[FactorialCell]:
    return asyncio.run(run_batch(run_cell, list(jobs), workers))


def _index(cells: Sequence[FactorialCell]) -> Dict[Tuple[str, str, str, str, str], FactorialCell]:
    return {(c.network, c.dag, c.routing, c.scheduler, c.interference): c for c in cells}


def _slowdown(none: FactorialCell, csma: FactorialCell) -> float:
    if none.makespan == 0:
        return 1.0
    return csma.makespan / none.makespan


def _slowdown_points(cells: Sequence[FactorialCell]) -> List[ExperimentPoint]:
    index = _index(cells)
    points = []
    for cell in cells:
        if cell.interference != "none" or cell.error:
            continue
        other = index.get((cell.network, cell.dag, cell.routing, cell.scheduler, "csma_bianchi"))
        if other is None or other.error:
            continue
        params = {"network": cell.network, "dag": cell.dag, "routing": cell.routing, "scheduler": cell.scheduler}
        points.append(ExperimentPoint(params, "slowdown", _slowdown(cell, other)))
    return points


def _never_faster_with_interference(cells: Sequence[FactorialCell]) -> bool:
    index = _index(cells)
    for cell in cells:
        if cell.interference != "none" or cell.error:
            continue
        other = index.get((cell.network, cell.dag, cell.routing, cell.scheduler, "csma_bianchi"))
        if other is not None and not other.error and other.makespan < cell.makespan - MAKESPAN_TOLERANCE:
            return False
    return True


def factorial_jobs(networks: Sequence[str] = tuple(GRIDS), dags: Sequence[str] = STUDY_DAGS) -> List[Tuple]:
    return [
        (network, dag, routing, scheduler, interference)
        for network, dag, routing, scheduler, interference in product(
            networks, dags, ROUTINGS, SCHEDULER_ORDER, INTERFERENCE_MODELS
        )
    ]


def factorial_study(workers: int = NCSIM_WORKERS) -> ExperimentResult:
    """3 grids x 3 DAGs x 2 routings x 3 schedulers x 2 interference models."""
    cells = run_cells(factorial_jobs(), workers)
    result = ExperimentResult("factorial", cells=cells)
    result.points = _slowdown_points(cells)
    result.checks["all_cells_complete"] = all(c.error is None for c in cells)
    result.checks["interference_never_faster"] = _never_faster_with_interference(cells)
    result.checks["cells_under_2s"] = all(c.wall_clock_s < CELL_BUDGET_S for c in cells)

    index = _index(cells)
    identical = [
        index[(n, "fork_join5", r, "heft", i)].plan == index[(n, "fork_join5", r, "cpop", i)].plan
        for n, r, i in product(GRIDS, ROUTINGS, INTERFERENCE_MODELS)
    ]
    result.checks["heft_cpop_identical_on_fork_join"] = all(identical)
    if result.checks["all_cells_complete"]:
        records, summary = regret_analysis(cells)
        result.summary.update(summary)
        result.checks["rank_inversion_present"] = summary["inversions"] > 0
    return result


@dataclass(frozen=True)
class RegretRecord:
    network: str
    dag: str
    routing: str
    winner_none: str
    winner_interference: str
    inversion: bool
    regret: float

    def to_row(self) -> Dict[str, Any]:
        return {
            "network": self.network,
            "dag": self.dag,
            "routing": self.routing,
            "winner_none": self.winner_none,
            "winner_interference": self.winner_interference,
            "inversion": self.inversion,
            "regret": self.regret,
        }


def _winner(cells: Dict[str, FactorialCell]) -> str:
    return min(cells, key=lambda s: (cells[s].makespan, SCHEDULER_ORDER.index(s)))


def regret_analysis(cells: Sequence[FactorialCell]) -> Tuple[List[RegretRecord], Dict[str, Any]]:
    """Rank inversions and scheduling regret per (network, dag, routing) triple.

    Raises:
        IncompleteGrid: a triple lacks a scheduler/model combination or holds a failed cell
    """
    grouped: Dict[Tuple[str, str, str], Dict[str, Dict[str, FactorialCell]]] = {}
    for cell in cells:
        grouped.setdefault(cell.triple, {}).setdefault(cell.interference, {})[cell.scheduler] = cell

    records: List[RegretRecord] = []
    for triple in sorted(grouped):
        by_model = grouped[triple]
        for model in INTERFERENCE_MODELS:
            present = by_model.get(model, {})
            missing = [s for s in SCHEDULER_ORDER if s not in present or present[s].error]
            if missing:
                raise IncompleteGrid(
                    f"triple {triple} under {model} lacks {missing}",
                    {"triple": list(triple), "interference": model, "missing": missing},
                )
        none_cells, csma_cells = by_model["none"], by_model["csma_bianchi"]
        winner_none, winner_csma = _winner(none_cells), _winner(csma_cells)
        best = csma_cells[winner_csma].makespan
        regret = csma_cells[winner_none].makespan / best if best > 0 else 1.0
        records.append(RegretRecord(*triple, winner_none, winner_csma, winner_none != winner_csma, regret))

    inversions = sum(r.inversion for r in records)
    summary = {
        "triples": len(records),
        "inversions": inversions,
        "inversion_rate": inversions / len(records) if records else 0.0,
        "mean_regret": sum(r.regret for r in records) / len(records) if records else 1.0,
        "max_regret": max((r.regret for r in records), default=1.0),
    }
    logger.info("Regret analysis", extra=summary)
    return records, summary


def regret_study(workers: int = NCSIM_WORKERS) -> ExperimentResult:
    """Factorial grid followed by inversion and regret analytics."""
    cells = run_cells(factorial_jobs(), workers)
    records, summary = regret_analysis(cells)
    result = ExperimentResult("regret", cells=cells, summary=summary)
    for r in records:
        result.points.append(
            ExperimentPoint({"network": r.network, "dag": r.dag, "routing": r.routing,
                             "winner_none": r.winner_none, "winner_interference": r.winner_interference},
                            "regret", r.regret)
        )
    result.checks["regret_at_least_one"] = all(r.regret >= 1.0 for r in records)
    result.checks["inversion_iff_winner_changes"] = all(
        r.inversion == (r.winner_none != r.winner_interference) for r in records
    )
    return result


def _paired_slowdowns(cells: Sequence[FactorialCell]) -> Dict[Tuple[str, Optional[float]], float]:
    none = {(c.dag, c.data_size): c for c in cells if c.interference == "none"}
    csma = {(c.dag, c.data_size): c for c in cells if c.interference == "csma_bianchi"}
    return {key: _slowdown(none[key], csma[key]) for key in none if key in csma}


def ccr_sweep(data_sizes: Sequence[float] = CCR_DATA_SIZES_MB, workers: int = NCSIM_WORKERS) -> ExperimentResult:
    """Interference slowdown as edge payloads grow, 3x3 grid, HEFT with shortest paths."""
    jobs = [
        ("grid3x3", dag, "shortest_path", "heft", interference, size)
        for dag, size, interference in product(STUDY_DAGS, data_sizes, INTERFERENCE_MODELS)
    ]
    cells = run_cells(jobs, workers)
    result = ExperimentResult("ccr", cells=cells)
    result.checks["all_cells_complete"] = all(c.error is None for c in cells)
    if not result.checks["all_cells_complete"]:
        return result
    slowdowns = _paired_slowdowns(cells)
    for (dag, size), value in sorted(slowdowns.items()):
        result.points.append(ExperimentPoint({"dag": dag, "data_size_mb": size}, "slowdown", value))
    if 0.0 in data_sizes:
        result.checks["no_slowdown_without_data"] = all(
            abs(slowdowns[(dag, 0.0)] - 1.0) <= MAKESPAN_TOLERANCE for dag in STUDY_DAGS
        )
    for dag in STUDY_DAGS:
        curve = [(size, slowdowns[(dag, size)]) for size in data_sizes if size > 0]
        if curve:
            peak = max(curve, key=lambda p: p[1])[0]
            result.summary[f"{dag}_peak_mb"] = peak
            if dag == "pipeline20":
                result.checks["pipeline20_interior_peak"] = peak not in (curve[0][0], curve[-1][0])
    return result


def multidag_sweep(
    counts: Sequence[int] = MULTIDAG_COUNTS,
    workers: int = NCSIM_WORKERS,
    data_size: float = MULTIDAG_DATA_SIZE_MB,
) -> ExperimentResult:
    """k staggered fork-join copies sharing the 3x3 grid.

    Each copy is planned by HEFT on its own, blind to the others' transfers.
    """
    grid = list(product(counts, INTERFERENCE_MODELS))
    jobs = [("grid3x3", "fork_join5", "shortest_path", "heft", interference, data_size, k) for k, interference in grid]
    jobs += [
        ("grid3x3", "fork_join5", "shortest_path", "heft", interference, data_size)
        for interference in INTERFERENCE_MODELS
    ]
    cells = run_cells(jobs, workers)
    baseline = {c.interference: c for c in cells[len(grid):]}
    cells = cells[: len(grid)]
    result = ExperimentResult("multidag", cells=cells)
    result.checks["all_cells_complete"] = all(c.error is None for c in cells + list(baseline.values()))
    if not result.checks["all_cells_complete"]:
        return result

    by_k = {key: cell for key, cell in zip(grid, cells)}
    slowdowns, none_makespans = [], []
    for k in counts:
        none, csma = by_k[(k, "none")], by_k[(k, "csma_bianchi")]
        slowdowns.append(_slowdown(none, csma))
        none_makespans.append(none.makespan)
        result.points.append(ExperimentPoint({"k": k, "model": "none"}, "makespan", none.makespan))
        result.points.append(ExperimentPoint({"k": k, "model": "csma_bianchi"}, "makespan", csma.makespan))
        result.points.append(ExperimentPoint({"k": k, "model": ""}, "slowdown", slowdowns[-1]))
    result.checks["slowdown_strictly_increasing"] = all(a < b for a, b in zip(slowdowns, slowdowns[1:]))
    result.checks["none_makespan_nondecreasing"] = all(
        a <= b + MAKESPAN_TOLERANCE for a, b in zip(none_makespans, none_makespans[1:])
    )
    if 1 in counts:
        result.checks["single_copy_matches_baseline"] = all(
            abs(by_k[(1, model)].makespan - baseline[model].makespan) <= MAKESPAN_TOLERANCE
            for model in INTERFERENCE_MODELS
        )
    return result


def rgg_scalability(workers: int = NCSIM_WORKERS, seed: int = NCSIM_SEED) -> ExperimentResult:
    """100-node random geometric graph with 30-, 40- and 50-task pipelines."""
    network = study_network(RGG_NETWORK, seed)
    links, degree = undirected_link_count(network), average_degree(network)
    jobs = [
        (RGG_NETWORK, dag, routing, scheduler, interference, None, 1, seed)
        for dag, routing, scheduler, interference in product(RGG_DAGS, ROUTINGS, SCHEDULER_ORDER, INTERFERENCE_MODELS)
    ]
    cells = run_cells(jobs, workers)
    result = ExperimentResult("rgg", cells=cells)
    result.points = _slowdown_points(cells)
    result.summary.update(undirected_links=links, average_degree=degree,
                          total_wall_clock_s=sum(c.wall_clock_s for c in cells))
    result.checks["link_count_in_band"] = RGG_LINK_BAND[0] <= links <= RGG_LINK_BAND[1]
    result.checks["average_degree_in_band"] = RGG_DEGREE_BAND[0] <= degree <= RGG_DEGREE_BAND[1]
    result.checks["all_cells_complete"] = all(c.error is None for c in cells)
    result.checks["interference_always_slower"] = bool(result.points) and all(p.simulated > 1.0 for p in result.points)
    result.checks["total_under_10min"] = result.summary["total_wall_clock_s"] < RGG_BUDGET_S
    return result


def routing_comparison(workers: int = NCSIM_WORKERS) -> ExperimentResult:
    """Widest against shortest path under HEFT with interference."""
    jobs = [
        (network, dag, routing, "heft", "csma_bianchi")
        for network, dag, routing in product(GRIDS, STUDY_DAGS, ROUTINGS)
    ]
    cells = run_cells(jobs, workers)
    result = ExperimentResult("routing", cells=cells)
    result.checks["all_cells_complete"] = all(c.error is None for c in cells)
    for cell in cells:
        params = {"network": cell.network, "dag": cell.dag, "routing": cell.routing}
        result.points.append(ExperimentPoint(params, "makespan", cell.makespan))
        result.points.append(ExperimentPoint(params, "mean_hops", cell.mean_hops or 0.0))
        result.points.append(ExperimentPoint(params, "links_used", float(cell.links_used or 0)))
    for routing in ROUTINGS:
        hops = [c.mean_hops for c in cells if c.routing == routing and c.mean_hops is not None]
        result.summary[f"{routing}_mean_hops"] = sum(hops) / len(hops) if hops else 0.0
    return result
