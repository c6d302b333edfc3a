"""Pydantic schema of scenario files.

Unknown keys are rejected at every level.
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.config import (
    AUTO_LINK_MAX_DISTANCE_M,
    GRID_SPACING_M,
    NCSIM_BIANCHI_PROFILE,
    NCSIM_MCS_TABLE,
    RF_DEFAULTS,
)

InterferenceName = Literal["none", "csma_bianchi"]
RoutingName = Literal["direct", "widest_path", "shortest_path"]
SchedulerName = Literal["manual", "round_robin", "heft", "cpop"]
DagTemplateName = Literal["fork_join", "diamond10", "pipeline"]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class NodeModel(StrictModel):
    id: str = Field(..., min_length=1)
    capacity: float = Field(..., gt=0, description="Compute units per second")
    position: Optional[Tuple[float, float]] = Field(None, description="(x, y) in meters")


class LinkModel(StrictModel):
    src: str
    dst: str
    bandwidth: Optional[float] = Field(None, ge=0, description="MB/s; derived from geometry in RF mode")
    latency: float = Field(0.0, ge=0, description="Seconds")
    bidirectional: bool = False


class AutoLinkModel(StrictModel):
    max_distance_m: float = Field(AUTO_LINK_MAX_DISTANCE_M, gt=0)
    latency: float = Field(0.0, ge=0)


class TopologyModel(StrictModel):
    """Generated node set: a grid with 8-neighbor links or a random geometric graph."""
    kind: Literal["grid", "rgg"]
    rows: int = Field(3, ge=1)
    cols: int = Field(3, ge=1)
    spacing_m: float = Field(GRID_SPACING_M, gt=0)
    count: int = Field(100, ge=2)
    area_m: float = Field(500.0, gt=0)
    max_distance_m: float = Field(AUTO_LINK_MAX_DISTANCE_M, gt=0)
    seed: Optional[int] = None


class RfModel(StrictModel):
    tx_power_dbm: float = RF_DEFAULTS["tx_power_dbm"]
    frequency_hz: float = Field(RF_DEFAULTS["frequency_hz"], gt=0)
    path_loss_exponent: float = Field(RF_DEFAULTS["path_loss_exponent"], ge=2)
    reference_distance_m: float = Field(RF_DEFAULTS["reference_distance_m"], gt=0)
    noise_floor_dbm: float = RF_DEFAULTS["noise_floor_dbm"]
    cca_threshold_dbm: float = RF_DEFAULTS["cca_threshold_dbm"]
    capture_margin_db: float = Field(RF_DEFAULTS["capture_margin_db"], ge=0)
    channel_width_mhz: int = RF_DEFAULTS["channel_width_mhz"]
    standard: Literal["11n", "11ac", "11ax"] = RF_DEFAULTS["standard"]
    mcs_table: str = NCSIM_MCS_TABLE


class MacModel(StrictModel):
    profile: str = NCSIM_BIANCHI_PROFILE
    w_min: Optional[int] = Field(None, ge=1)
    max_backoff_stage: Optional[int] = Field(None, ge=0)
    rts_cts: bool = False
    binary_capture: bool = False
    solo_mac_overhead: bool = False


class TaskModel(StrictModel):
    id: str = Field(..., min_length=1)
    compute_cost: float = Field(..., gt=0)
    pinned_to: Optional[str] = None


class EdgeModel(StrictModel):
    src: str
    dst: str
    data_size: float = Field(0.0, ge=0, description="MB")


class DagModel(StrictModel):
    """Either an explicit task/edge list or a named template."""
    id: str = Field(..., min_length=1)
    inject_at: float = Field(0.0, ge=0)
    tasks: List[TaskModel] = Field(default_factory=list)
    edges: List[EdgeModel] = Field(default_factory=list)
    template: Optional[DagTemplateName] = None
    size: Optional[int] = Field(None, ge=6, description="Task count for the pipeline template")
    data_size: Optional[float] = Field(None, ge=0, description="Overrides every edge payload")
    compute_cost: Optional[float] = Field(None, gt=0, description="Template compute cost")

    @model_validator(mode="after")
    def check_source(self):
        if self.template is None and not self.tasks:
            raise ValueError("either tasks or template is required")
        if self.template is not None and (self.tasks or self.edges):
            raise ValueError("template and explicit tasks/edges are exclusive")
        return self


class OutputModel(StrictModel):
    trace: Optional[str] = None


class ScenarioModel(StrictModel):
    name: str = "scenario"
    seed: Optional[int] = None
    nodes: List[NodeModel] = Field(default_factory=list)
    links: List[LinkModel] = Field(default_factory=list)
    auto_link: Optional[AutoLinkModel] = None
    topology: Optional[TopologyModel] = None
    rf: Optional[RfModel] = None
    mac: MacModel = Field(default_factory=MacModel)
    interference: InterferenceName = "none"
    routing: RoutingName = "widest_path"
    scheduler: SchedulerName = "heft"
    dags: List[DagModel] = Field(..., min_length=1)
    output: OutputModel = Field(default_factory=OutputModel)

    @model_validator(mode="after")
    def check_node_source(self):
        if self.topology is not None and (self.nodes or self.links or self.auto_link):
            raise ValueError("topology excludes nodes, links and auto_link")
        if self.topology is None and not self.nodes:
            raise ValueError("nodes or topology is required")
        return self

    @property
    def rf_enabled(self) -> bool:
        """Link bandwidths come from geometry rather than the file."""
        return self.rf is not None or self.auto_link is not None or self.topology is not None
