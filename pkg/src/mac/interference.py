"""Interference factors: hidden-terminal SINR, Bianchi contention and their product."""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Set, Tuple

from src.error_handling import MissingPosition
from src.mac.bianchi import BianchiParams, contention_factor, load_profile, mac_efficiency
from src.mac.conflict import ConflictGraph, build_conflict_graph
from src.models.network import LinkKey, Network
from src.rf.mcs import DEFAULT_MCS_TABLE, McsTable, select_rate
from src.rf.phy import RfConfig, carrier_sense_range, dbm_to_mw, received_power_dbm, snr_at_distance
from src.utils.logging import get_logger

logger = get_logger(__name__)

FACTOR_FLOOR = 0.01
FACTOR_CEIL = 1.0


def clamp_factor(value: float) -> float:
    return min(FACTOR_CEIL, max(FACTOR_FLOOR, value))


@dataclass(frozen=True)
class LinkFactor:
    """Interference factor of one active link and its components."""
    f: float
    f_ht: float = 1.0
    eta: float = 1.0
    n: int = 1
    sinr_db: Optional[float] = None

    @classmethod
    def unity(cls) -> "LinkFactor":
        return cls(f=1.0)


def _interferers(link: LinkKey, hidden: Iterable[LinkKey]) -> Set[str]:
    # A node transmitting on several hidden links radiates once.
    tx, rx = link
    return {h[0] for h in hidden if h[0] not in (tx, rx)}


def sinr(network: Network, link: LinkKey, hidden: Iterable[LinkKey], cfg: RfConfig) -> float:
    """SINR in dB at the receiver of ``link`` with every hidden transmitter on air."""
    tx, rx = link
    signal_mw = dbm_to_mw(received_power_dbm(cfg, network.distance(tx, rx)))
    noise_mw = dbm_to_mw(cfg.noise_floor_dbm)
    interference_mw = sum(
        dbm_to_mw(received_power_dbm(cfg, network.distance(source, rx)))
        for source in sorted(_interferers(link, hidden))
    )
    return 10.0 * math.log10(signal_mw / (noise_mw + interference_mw))


def hidden_factor(
    network: Network,
    link: LinkKey,
    hidden: Iterable[LinkKey],
    cfg: RfConfig,
    mcs_table: McsTable = DEFAULT_MCS_TABLE,
    binary_capture: bool = False,
) -> float:
    """Rate loss from hidden terminals, in [0.01, 1].

    Default mode re-selects the MCS from the SINR. Binary-capture mode keeps
    the base MCS when the SINR clears its threshold minus the capture margin
    and fails the frame otherwise.
    """
    hidden = list(hidden)
    if not hidden:
        return FACTOR_CEIL
    tx, rx = link
    base = select_rate(mcs_table, snr_at_distance(cfg, network.distance(tx, rx)))
    if base is None:
        return FACTOR_CEIL
    level = sinr(network, link, hidden, cfg)
    if binary_capture:
        return FACTOR_CEIL if level >= base.min_snr_db - cfg.capture_margin_db else FACTOR_FLOOR
    effective = select_rate(mcs_table, level)
    if effective is None:
        return FACTOR_FLOOR
    return clamp_factor(effective.rate / base.rate)


def combined_factor(
    network: Network,
    link: LinkKey,
    active: Iterable[LinkKey],
    graph: ConflictGraph,
    cfg: RfConfig,
    mcs_table: McsTable = DEFAULT_MCS_TABLE,
    params: Optional[BianchiParams] = None,
    binary_capture: bool = False,
    solo_mac_overhead: bool = False,
) -> float:
    """f = f_HT * contention share, clamped to [0.01, 1]."""
    sets = graph.active_sets(link, active)
    f_ht = hidden_factor(network, link, sets.hidden, cfg, mcs_table, binary_capture)
    return clamp_factor(f_ht * contention_factor(1 + len(sets.contenders), params, solo_mac_overhead))


class InterferenceModel(ABC):
    """Maps the set of active links to a per-link rate factor."""

    name: str = ""

    @abstractmethod
    def link_factor(self, link: LinkKey, active: FrozenSet[LinkKey]) -> LinkFactor:
        """Factor applied to the bandwidth of ``link`` while ``active`` transmit."""

    @abstractmethod
    def affected_links(self, changed: Set[LinkKey], active: Set[LinkKey]) -> Set[LinkKey]:
        """Links whose factor may move when ``changed`` switch on or off."""


class NoInterference(InterferenceModel):
    """Links share bandwidth only among flows on the same link."""

    name = "none"

    def link_factor(self, link: LinkKey, active: FrozenSet[LinkKey]) -> LinkFactor:
        return LinkFactor.unity()

    def affected_links(self, changed: Set[LinkKey], active: Set[LinkKey]) -> Set[LinkKey]:
        return set(changed)


class CsmaBianchi(InterferenceModel):
    """CSMA/CA contention via Bianchi plus hidden-terminal SINR degradation."""

    name = "csma_bianchi"

    def __init__(
        self,
        network: Network,
        rf: Optional[RfConfig] = None,
        mcs_table: McsTable = DEFAULT_MCS_TABLE,
        params: Optional[BianchiParams] = None,
        rts_cts: bool = False,
        binary_capture: bool = False,
        solo_mac_overhead: bool = False,
        conflict_graph: Optional[ConflictGraph] = None,
    ):
        if not network.positioned:
            missing = [n.id for n in network.nodes if n.position is None]
            raise MissingPosition(f"csma_bianchi needs node positions, missing {missing}", {"nodes": missing})
        self.network = network
        self.rf = rf or RfConfig()
        self.mcs_table = mcs_table
        self.params = params or load_profile()
        self.binary_capture = binary_capture
        self.solo_mac_overhead = solo_mac_overhead
        self.cs_range = carrier_sense_range(self.rf)
        self.graph = conflict_graph or build_conflict_graph(network, self.cs_range, rts_cts)
        self._memo: Dict[Tuple[LinkKey, FrozenSet[LinkKey]], LinkFactor] = {}

    def link_factor(self, link: LinkKey, active: FrozenSet[LinkKey]) -> LinkFactor:
        key = (link, active)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        f = combined_factor(
            self.network,
            link,
            active,
            self.graph,
            self.rf,
            self.mcs_table,
            self.params,
            self.binary_capture,
            self.solo_mac_overhead,
        )
        # components are kept for rate_change traces
        sets = self.graph.active_sets(link, active)
        n = 1 + len(sets.contenders)
        f_ht = hidden_factor(self.network, link, sets.hidden, self.rf, self.mcs_table, self.binary_capture)
        factor = LinkFactor(
            f=f,
            f_ht=f_ht,
            eta=mac_efficiency(self.params, n) if n > 1 or self.solo_mac_overhead else 1.0,
            n=n,
            sinr_db=sinr(self.network, link, sets.hidden, self.rf) if sets.hidden else None,
        )
        if len(self._memo) > 100_000:
            self._memo.clear()
        self._memo[key] = factor
        return factor

    def affected_links(self, changed: Set[LinkKey], active: Set[LinkKey]) -> Set[LinkKey]:
        # Contenders sit in the conflict neighborhood; hidden terminals have no
        # range cutoff, so every other active link sees its SINR move too.
        affected = set(changed)
        for link in changed:
            affected |= self.graph.neighbors(link) & active
        return affected | set(active)


def build_interference_model(name: str, network: Network, **options) -> InterferenceModel:
    if name == NoInterference.name:
        return NoInterference()
    if name == CsmaBianchi.name:
        return CsmaBianchi(network, **options)
    raise ValueError(f"unknown interference model {name!r}")
