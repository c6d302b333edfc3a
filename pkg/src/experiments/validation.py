"""Validation ladder: single links, parallel links, n-way contention, Bianchi.

Each experiment runs the engine on small radio geometries and compares the
per-flow average rate with the closed-form predictor.
"""
import time
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

from src.engine.simulator import Simulator
from src.engine.state import TransferHistory
from src.error_handling import Deadlock
from src.experiments.base import ExperimentPoint, ExperimentResult
from src.experiments.predictors import (
    FluidFlow,
    RadioLink,
    RatePredictor,
    contention_rate,
    parallel_links,
)
from src.mac.bianchi import (
    BianchiParams,
    fixed_point_residual,
    load_profile,
    mac_efficiency,
    saturation_throughput,
)
from src.mac.interference import CsmaBianchi, NoInterference
from src.models.dag import DagEdge, DagSpec, TaskSpec
from src.models.network import LinkSpec, Network, NodeSpec
from src.rf.mcs import DEFAULT_MCS_TABLE, McsTable
from src.rf.phy import RfConfig, link_rate, snr_at_distance
from src.routing.routes import DirectRouting
from src.scheduling.base import ManualScheduler
from src.utils.logging import get_logger

logger = get_logger(__name__)

RATE_TOLERANCE = 0.001
SNR_TOLERANCE = 0.05
ETA_TOLERANCE = 0.02
BIANCHI_TOLERANCE = 1e-4
TRANSFER_MB = 10.0
# Tasks take one microsecond so transfers start together.
FAST_CAPACITY = 1.0e6
TASK_COST = 1.0

DISTANCES_M = (1.0, 12.0, 30.0, 50.0, 75.0, 105.0, 140.0)
REFERENCE_SNR_DB = {1.0: 68.58, 12.0: 36.20, 30.0: 24.27, 50.0: 17.61, 75.0: 12.33, 105.0: 7.94, 140.0: 4.19}
TWO_LINK_SEPARATIONS_M = (5.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 75.0, 80.0, 90.0, 100.0, 110.0, 130.0, 150.0)
THREE_LINK_SEPARATIONS_M = (10.0, 35.0, 40.0, 50.0, 70.0, 75.0, 100.0, 150.0)
NWAY_COUNTS = tuple(range(1, 9))
NWAY_SEPARATION_M = 5.0
BASE_RATE_MB_S = 8.6
# Published MAC efficiency column. The n = 8 entry sits 0.05 below the solver's
# curve, which no timing for W = 16, m = 6 reaches, so that point fails.
REFERENCE_ETA = {2: 0.881, 3: 0.859, 4: 0.837, 5: 0.818, 6: 0.802, 7: 0.788, 8: 0.726}
REFERENCE_THROUGHPUT = {2: 0.847311, 3: 0.836828}
BIANCHI_CURVES = ((32, 5), (128, 3))
CURVE_STATIONS = tuple(range(5, 51))


def run_radio_flows(
    links: Sequence[RadioLink],
    flows: Sequence[FluidFlow],
    interference: str = "csma_bianchi",
    cfg: Optional[RfConfig] = None,
    table: McsTable = DEFAULT_MCS_TABLE,
    params: Optional[BianchiParams] = None,
) -> Dict[str, Optional[TransferHistory]]:
    """Run ``flows`` through the engine over direct RF links.

    Flows on the same link with the same start share one producer task, so
    they leave the transmitter together. Returns None for a flow whose
    transfer never completes.
    """
    cfg = cfg or RfConfig()
    nodes: Dict[str, NodeSpec] = {}
    net_links: List[LinkSpec] = []
    for link in links:
        nodes.setdefault(link.tx, NodeSpec(link.tx, FAST_CAPACITY, link.tx_pos))
        nodes.setdefault(link.rx, NodeSpec(link.rx, FAST_CAPACITY, link.rx_pos))
        net_links.append(LinkSpec(link.tx, link.rx, link_rate(cfg, table, link.length)))
    network = Network(tuple(nodes.values()), tuple(net_links))
    by_name = {l.name: l for l in links}

    groups: Dict[Tuple[str, float], List[FluidFlow]] = defaultdict(list)
    for flow in flows:
        groups[(flow.link, flow.start)].append(flow)
    dags: List[DagSpec] = []
    flow_ids: Dict[str, str] = {}
    for (link_name, start), members in sorted(groups.items()):
        link = by_name[link_name]
        dag_id = f"{link_name}@{start:g}"
        tasks = [TaskSpec("src", TASK_COST, link.tx)]
        edges = []
        for i, flow in enumerate(members):
            tasks.append(TaskSpec(f"dst{i}", TASK_COST, link.rx))
            edges.append(DagEdge("src", f"dst{i}", flow.size))
            flow_ids[flow.name] = f"{dag_id}/src->dst{i}"
        dags.append(DagSpec(dag_id, tuple(tasks), tuple(edges), start))

    model = (
        CsmaBianchi(network, cfg, table, params or load_profile())
        if interference == "csma_bianchi"
        else NoInterference()
    )
    try:
        result = Simulator(network, dags, ManualScheduler(), DirectRouting(), model).run()
    except Deadlock:
        return {flow.name: None for flow in flows}
    return {name: result.transfer(flow_id) for name, flow_id in flow_ids.items()}


def _simulated_rates(histories: Dict[str, Optional[TransferHistory]]) -> Dict[str, float]:
    return {name: (h.average_rate if h is not None else 0.0) for name, h in histories.items()}


def exp_distance_sweep(distances: Sequence[float] = DISTANCES_M) -> ExperimentResult:
    """Single link at increasing distance: rate follows the MCS staircase."""
    started = time.perf_counter()
    cfg = RfConfig()
    result = ExperimentResult("exp1")
    for d in distances:
        link = RadioLink("A", "tx", "rx", (0.0, 0.0), (d, 0.0))
        predictor = RatePredictor([link], cfg)
        simulated = _simulated_rates(run_radio_flows([link], [FluidFlow("A", "A", TRANSFER_MB)], cfg=cfg))["A"]
        result.points.append(ExperimentPoint({"distance_m": d}, "rate_mb_s", simulated, predictor.base_rate("A"), RATE_TOLERANCE))
        result.points.append(
            ExperimentPoint({"distance_m": d}, "snr_db", snr_at_distance(cfg, d), REFERENCE_SNR_DB.get(d), SNR_TOLERANCE)
        )
    result.checks["runtime_under_5s"] = time.perf_counter() - started < 5.0
    return result


def _parallel_result(name: str, count: int, separations: Sequence[float]) -> ExperimentResult:
    result = ExperimentResult(name)
    for s in separations:
        links = parallel_links(count, s)
        flows = [FluidFlow(l.name, l.name, TRANSFER_MB) for l in links]
        predicted = RatePredictor(links).average_rates(flows)
        simulated = _simulated_rates(run_radio_flows(links, flows))
        for link in links:
            result.points.append(
                ExperimentPoint(
                    {"separation_m": s, "link": link.name},
                    "rate_mb_s",
                    simulated[link.name],
                    predicted[link.name],
                    RATE_TOLERANCE,
                )
            )
        logger.debug("Separation point done", extra={"experiment": name, "separation_m": s})
    return result


def exp_parallel_separation(link_count: int = 2, separations: Optional[Sequence[float]] = None) -> ExperimentResult:
    """Two or three parallel 30 m links at varying separation.

    Regimes move from contention through mixed contention/hidden to fully
    hidden as the links spread apart.
    """
    if link_count not in (2, 3):
        raise ValueError("link_count must be 2 or 3")
    if link_count == 2:
        result = _parallel_result("exp2", 2, separations or TWO_LINK_SEPARATIONS_M)
        rates = {p.params["separation_m"]: p.simulated for p in result.points if p.params["link"] == "A"}
        if 70.0 in rates and 75.0 in rates:
            result.checks["dip_at_carrier_sense_edge"] = rates[75.0] < rates[70.0]
        return result
    result = _parallel_result("exp4", 3, separations or THREE_LINK_SEPARATIONS_M)
    at_70 = {p.params["link"]: p.simulated for p in result.points if p.params["separation_m"] == 70.0}
    if at_70:
        result.checks["outer_links_overtake_middle_at_70m"] = at_70["A"] > at_70["B"]
    return result


def exp_nway_contention(counts: Sequence[int] = NWAY_COUNTS) -> ExperimentResult:
    """n parallel links inside one carrier-sense domain share the channel by eta(n)/n."""
    params = load_profile()
    result = ExperimentResult("exp7")
    for n in counts:
        links = parallel_links(n, NWAY_SEPARATION_M)
        flows = [FluidFlow(l.name, l.name, TRANSFER_MB) for l in links]
        simulated = _simulated_rates(run_radio_flows(links, flows, params=params))
        for link in links:
            result.points.append(
                ExperimentPoint({"n": n, "link": link.name}, "rate_mb_s", simulated[link.name],
                                contention_rate(n, params=params), RATE_TOLERANCE)
            )
        if n in REFERENCE_ETA:
            result.points.append(
                ExperimentPoint({"n": n, "link": ""}, "eta", mac_efficiency(params, n), REFERENCE_ETA[n], ETA_TOLERANCE)
            )
            # engine rate against the published column, eta tolerance scaled to MB/s
            published = BASE_RATE_MB_S * REFERENCE_ETA[n] / n
            for link in links:
                result.points.append(
                    ExperimentPoint({"n": n, "link": link.name}, "reference_rate_mb_s", simulated[link.name],
                                    published, BASE_RATE_MB_S * ETA_TOLERANCE / n)
                )
    result.summary["eta_outside_tolerance"] = [
        p.params["n"] for p in result.points if p.quantity == "eta" and not p.passed
    ]
    return result


def bianchi_reproduction() -> ExperimentResult:
    """Saturation throughput of the original FHSS parameter set."""
    base = load_profile("bianchi-fhss-1997")
    result = ExperimentResult("bianchi")
    worst_residual = 0.0
    max_iterations = 0
    for n, reference in REFERENCE_THROUGHPUT.items():
        solution = saturation_throughput(base, n)
        result.points.append(
            ExperimentPoint({"w_min": base.w_min, "m": base.max_backoff_stage, "n": n}, "throughput",
                            solution.s, reference, BIANCHI_TOLERANCE)
        )
    for w_min, m in BIANCHI_CURVES:
        params = base.with_window(w_min, m)
        curve = []
        for n in CURVE_STATIONS:
            solution = saturation_throughput(params, n)
            curve.append(solution.s)
            worst_residual = max(worst_residual, abs(fixed_point_residual(solution.p, n, w_min, m)))
            max_iterations = max(max_iterations, solution.iterations)
            result.points.append(ExperimentPoint({"w_min": w_min, "m": m, "n": n}, "throughput", solution.s))
        if (w_min, m) == (32, 5):
            result.checks["w32_m5_strictly_decreasing"] = all(a > b for a, b in zip(curve, curve[1:]))
        if (w_min, m) == (128, 3):
            head = curve[: CURVE_STATIONS.index(10) + 1]
            diffs = [b - a for a, b in zip(head, head[1:])]
            result.checks["w128_m3_non_monotonic_5_to_10"] = any(d > 0 for d in diffs) and any(d < 0 for d in diffs)
    for n in range(1, 65):
        solution = saturation_throughput(base, n)
        worst_residual = max(worst_residual, abs(fixed_point_residual(solution.p, n, base.w_min, base.max_backoff_stage)))
        max_iterations = max(max_iterations, solution.iterations)
    result.checks["residual_below_1e-10"] = worst_residual <= 1e-10
    result.checks["at_most_40_iterations"] = max_iterations <= 40
    result.summary = {"worst_residual": worst_residual, "max_iterations": max_iterations}
    return result


def _validation_cases() -> List[Tuple[str, List[RadioLink], List[FluidFlow]]]:
    shared_rx = [
        RadioLink("A", "txA", "rx", (0.0, 0.0), (30.0, 0.0)),
        RadioLink("B", "txB", "rx", (60.0, 0.0), (30.0, 0.0)),
    ]
    pair_close = parallel_links(2, NWAY_SEPARATION_M)
    single = parallel_links(1, 0.0)
    cascade = parallel_links(5, 100.0)
    pair_far = parallel_links(2, 100.0)
    return [
        ("shared_receiver", shared_rx, [FluidFlow("A", "A", TRANSFER_MB), FluidFlow("B", "B", TRANSFER_MB)]),
        ("staggered_start", pair_close, [FluidFlow("A", "A", TRANSFER_MB), FluidFlow("B", "B", TRANSFER_MB, 1.0)]),
        ("multi_flow_link", single, [FluidFlow(f"A{i}", "A", TRANSFER_MB) for i in range(3)]),
        ("hidden_cascade", cascade,
         [FluidFlow(l.name, l.name, 2.0 * (i + 1)) for i, l in enumerate(cascade)]),
        ("sharing_plus_hidden", pair_far,
         [FluidFlow("A0", "A", TRANSFER_MB), FluidFlow("A1", "A", TRANSFER_MB), FluidFlow("B", "B", TRANSFER_MB)]),
    ]


def validation_suite() -> ExperimentResult:
    """Shared receivers, staggered starts, multi-flow links and hidden cascades."""
    result = ExperimentResult("validation")
    for case, links, flows in _validation_cases():
        predicted = RatePredictor(links).average_rates(flows)
        histories = run_radio_flows(links, flows)
        simulated = _simulated_rates(histories)
        for flow in flows:
            result.points.append(
                ExperimentPoint({"case": case, "flow": flow.name}, "rate_mb_s", simulated[flow.name],
                                predicted[flow.name], RATE_TOLERANCE)
            )
        conserved = all(h is not None and abs(h.delivered - h.size) <= 1e-3 for h in histories.values())
        result.checks[f"{case}_bytes_conserved"] = conserved
    return result
