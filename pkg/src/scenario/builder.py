"""Turn a parsed scenario into a runnable network, DAG set and model stack."""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.config import NCSIM_EVENT_CAP, NCSIM_MCS_TABLE, NCSIM_SEED, TOOL_VERSION
from src.engine.simulator import Simulator
from src.engine.state import RunResult
from src.events import TraceBus
from src.mac.bianchi import BianchiParams, load_profile
from src.mac.interference import InterferenceModel, build_interference_model
from src.models.dag import DagEdge, DagSpec, TaskSpec
from src.models.network import LinkSpec, Network, NodeSpec, expand_undirected
from src.models.validation import validate_scenario
from src.rf.mcs import McsTable, load_mcs_table
from src.rf.phy import RfConfig
from src.routing.routes import RoutingModel, get_routing_model
from src.scenario.generators import DAG_TEMPLATES, auto_links, grid_network, rf_link, rgg_network
from src.scenario.parser import scenario_hash, scenario_to_dict
from src.scenario.schema import DagModel, ScenarioModel
from src.scheduling import Scheduler, get_scheduler
from src.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class Scenario:
    """A validated scenario ready to run."""
    model: ScenarioModel
    network: Network
    dags: Tuple[DagSpec, ...]
    seed: int
    rf: Optional[RfConfig] = None
    mcs_table: Optional[McsTable] = None
    bianchi: Optional[BianchiParams] = None
    _interference: Optional[InterferenceModel] = field(default=None, repr=False)

    @property
    def name(self) -> str:
        return self.model.name

    def interference_model(self) -> InterferenceModel:
        if self._interference is None:
            options: Dict[str, Any] = {}
            if self.model.interference == "csma_bianchi":
                mac = self.model.mac
                options = dict(
                    rf=self.rf,
                    mcs_table=self.mcs_table,
                    params=self.bianchi,
                    rts_cts=mac.rts_cts,
                    binary_capture=mac.binary_capture,
                    solo_mac_overhead=mac.solo_mac_overhead,
                )
            self._interference = build_interference_model(self.model.interference, self.network, **options)
        return self._interference

    def routing_model(self) -> RoutingModel:
        return get_routing_model(self.model.routing)

    def scheduler(self, routing: Optional[RoutingModel] = None) -> Scheduler:
        return get_scheduler(self.model.scheduler, routing or self.routing_model())

    def header(self) -> Dict[str, Any]:
        """Self-describing first line of a trace."""
        return {
            "kind": "meta",
            "scenario": self.name,
            "scenario_hash": scenario_hash(self.model),
            "seed": self.seed,
            "interference": self.model.interference,
            "routing": self.model.routing,
            "scheduler": self.model.scheduler,
            "version": TOOL_VERSION,
            "config": scenario_to_dict(self.model),
        }

    def run(self, bus: Optional[TraceBus] = None, event_cap: int = NCSIM_EVENT_CAP) -> RunResult:
        routing = self.routing_model()
        simulator = Simulator(
            self.network,
            self.dags,
            self.scheduler(routing),
            routing,
            self.interference_model(),
            seed=self.seed,
            event_cap=event_cap,
            bus=bus,
        )
        return simulator.run()


def _dag_from_model(dag: DagModel) -> DagSpec:
    if dag.template is not None:
        builder = DAG_TEMPLATES[dag.template]
        kwargs: Dict[str, Any] = {}
        if dag.size is not None and dag.template == "pipeline":
            kwargs["size"] = dag.size
        if dag.compute_cost is not None:
            kwargs["compute_cost"] = dag.compute_cost
        if dag.data_size is not None:
            kwargs["data_size"] = dag.data_size
        return builder(dag.id, **kwargs).shifted(dag.id, dag.inject_at)
    spec = DagSpec(
        dag.id,
        tuple(TaskSpec(t.id, t.compute_cost, t.pinned_to) for t in dag.tasks),
        tuple(DagEdge(e.src, e.dst, e.data_size) for e in dag.edges),
        dag.inject_at,
    )
    return spec.with_data_size(dag.data_size) if dag.data_size is not None else spec


def _network_from_model(model: ScenarioModel, seed: int, rf: Optional[RfConfig], table: Optional[McsTable]) -> Network:
    topo = model.topology
    if topo is not None:
        topo_seed = topo.seed if topo.seed is not None else seed
        if topo.kind == "grid":
            return grid_network(topo.rows, topo.cols, topo.spacing_m, topo_seed, rf, table)
        network, _ = rgg_network(topo.count, topo.area_m, topo.max_distance_m, topo_seed, rf, table)
        return network

    nodes = [NodeSpec(n.id, n.capacity, n.position) for n in model.nodes]
    by_id = {n.id: n for n in nodes}
    links: List[LinkSpec] = []
    for link in model.links:
        if model.rf_enabled and link.src in by_id and link.dst in by_id and link.src != link.dst:
            derived = rf_link(by_id[link.src], by_id[link.dst], rf, table, link.latency)
        else:
            derived = LinkSpec(link.src, link.dst, link.bandwidth or 0.0, link.latency)
        links.extend(expand_undirected([derived]) if link.bidirectional else [derived])
    if model.auto_link is not None:
        known = {l.key for l in links}
        links.extend(
            l for l in auto_links(nodes, model.auto_link.max_distance_m, rf, table, model.auto_link.latency)
            if l.key not in known
        )
    return Network(tuple(nodes), tuple(links))


def build_scenario(model: ScenarioModel) -> Scenario:
    """Derive links, expand templates and validate.

    Raises:
        ScenarioInputError: any validation violation
    """
    seed = model.seed if model.seed is not None else NCSIM_SEED
    rf = table = None
    if model.rf_enabled or model.interference == "csma_bianchi":
        values = model.rf.model_dump(exclude={"mcs_table"}) if model.rf is not None else {}
        rf = RfConfig.from_dict(values)
        table = load_mcs_table(model.rf.mcs_table if model.rf is not None else NCSIM_MCS_TABLE)
    bianchi = load_profile(model.mac.profile)
    if model.mac.w_min is not None or model.mac.max_backoff_stage is not None:
        bianchi = bianchi.with_window(
            model.mac.w_min if model.mac.w_min is not None else bianchi.w_min,
            model.mac.max_backoff_stage if model.mac.max_backoff_stage is not None else bianchi.max_backoff_stage,
        )

    network = _network_from_model(model, seed, rf, table)
    dags = [_dag_from_model(d) for d in model.dags]
    validated = validate_scenario(
        network.nodes, network.links, dags, rf_enabled=model.rf_enabled or model.interference == "csma_bianchi"
    )
    logger.info(
        "Scenario built",
        extra={
            "scenario": model.name,
            "nodes": len(validated.network.nodes),
            "links": len(validated.network.links),
            "dags": len(validated.dags),
        },
    )
    return Scenario(model, validated.network, tuple(validated.dags), seed, rf, table, bianchi)
