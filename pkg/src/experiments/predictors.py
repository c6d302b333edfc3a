"""Closed-form rate predictions used to check the engine.

Only the PHY formulas, the MCS table and the Bianchi solver are shared with
the engine. Routing and interference models are not used here: regimes are read straight off the link geometry and phases are
integrated as a plain fluid model without event rounding.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.mac.bianchi import BianchiParams, load_profile, mac_efficiency
from src.rf.mcs import DEFAULT_MCS_TABLE, McsTable, select_rate
from src.rf.phy import RfConfig, carrier_sense_range, snr_at_distance

LINK_LENGTH_M = 30.0
EPSILON = 1e-12


@dataclass(frozen=True)
class RadioLink:
    name: str
    tx: str
    rx: str
    tx_pos: Tuple[float, float]
    rx_pos: Tuple[float, float]

    @property
    def length(self) -> float:
        return math.dist(self.tx_pos, self.rx_pos)


@dataclass(frozen=True)
class FluidFlow:
    name: str
    link: str
    size: float
    start: float = 0.0


def link_names(count: int) -> List[str]:
    return [chr(ord("A") + i) for i in range(count)]


def parallel_links(count: int, separation: float, length: float = LINK_LENGTH_M) -> List[RadioLink]:
    """Links stacked ``separation`` meters apart, all transmitting left to right."""
    return [
        RadioLink(name, f"tx{name}", f"rx{name}", (0.0, i * separation), (length, i * separation))
        for i, name in enumerate(link_names(count))
    ]


def _rx_power_mw(cfg: RfConfig, d: float) -> float:
    loss = cfg.reference_loss_db + 10.0 * cfg.path_loss_exponent * math.log10(d / cfg.reference_distance_m)
    return 10.0 ** ((cfg.tx_power_dbm - loss) / 10.0)


def _senses(a: RadioLink, b: RadioLink, cs_range: float) -> bool:
    if {a.tx, a.rx} & {b.tx, b.rx}:
        return True
    return (
        math.dist(a.tx_pos, b.tx_pos) <= cs_range
        or math.dist(a.tx_pos, b.rx_pos) <= cs_range
        or math.dist(b.tx_pos, a.rx_pos) <= cs_range
    )


class RatePredictor:
    """Per-link rate from geometry, contention share and hidden-terminal SINR."""

    def __init__(
        self,
        links: Sequence[RadioLink],
        cfg: Optional[RfConfig] = None,
        table: McsTable = DEFAULT_MCS_TABLE,
        params: Optional[BianchiParams] = None,
    ):
        self.links = {l.name: l for l in links}
        self.cfg = cfg or RfConfig()
        self.table = table
        self.params = params or load_profile()
        self.cs_range = carrier_sense_range(self.cfg)

    def base_rate(self, name: str) -> float:
        entry = select_rate(self.table, snr_at_distance(self.cfg, self.links[name].length))
        return entry.rate if entry is not None else 0.0

    def regime(self, name: str, active: Set[str]) -> Tuple[List[str], List[str]]:
        """(contending, hidden) links among ``active``."""
        me = self.links[name]
        others = sorted(active - {name})
        contending = [o for o in others if _senses(me, self.links[o], self.cs_range)]
        hidden = [o for o in others if o not in contending]
        return contending, hidden

    def sinr_db(self, name: str, hidden: Sequence[str]) -> float:
        me = self.links[name]
        noise = 10.0 ** (self.cfg.noise_floor_dbm / 10.0)
        transmitters = {self.links[h].tx: self.links[h].tx_pos for h in hidden}
        interference = sum(_rx_power_mw(self.cfg, math.dist(p, me.rx_pos)) for p in transmitters.values())
        return 10.0 * math.log10(_rx_power_mw(self.cfg, me.length) / (noise + interference))

    def link_rate(self, name: str, active: Set[str]) -> float:
        base = self.base_rate(name)
        if base == 0:
            return 0.0
        contending, hidden = self.regime(name, active)
        n = 1 + len(contending)
        share = 1.0 if n == 1 else mac_efficiency(self.params, n) / n
        f_ht = 1.0
        if hidden:
            entry = select_rate(self.table, self.sinr_db(name, hidden))
            f_ht = entry.rate / base if entry is not None else 0.01
        return base * min(1.0, max(0.01, f_ht * share))

    def completion_times(self, flows: Sequence[FluidFlow]) -> Dict[str, Tuple[float, float]]:
        """Integrate piecewise-constant rates; returns flow -> (start, end)."""
        remaining = {f.name: f.size for f in flows}
        ends: Dict[str, float] = {}
        t = 0.0
        while len(ends) < len(flows):
            running = [f for f in flows if f.start <= t + EPSILON and f.name not in ends]
            pending = [f.start for f in flows if f.start > t + EPSILON]
            if not running:
                if not pending:
                    break
                t = min(pending)
                continue
            active = {f.link for f in running}
            counts: Dict[str, int] = {}
            for f in running:
                counts[f.link] = counts.get(f.link, 0) + 1
            rates = {f.name: self.link_rate(f.link, active) / counts[f.link] for f in running}
            if all(r == 0 for r in rates.values()) and not pending:
                break
            step = min((remaining[f.name] / rates[f.name] for f in running if rates[f.name] > 0), default=math.inf)
            if pending:
                step = min(step, min(pending) - t)
            for f in running:
                remaining[f.name] -= rates[f.name] * step
            t += step
            for f in running:
                if remaining[f.name] <= 1e-9:
                    ends[f.name] = t
        return {f.name: (f.start, ends.get(f.name, math.inf)) for f in flows}

    def average_rates(self, flows: Sequence[FluidFlow]) -> Dict[str, float]:
        times = self.completion_times(flows)
        return {
            f.name: (f.size / (times[f.name][1] - f.start)) if math.isfinite(times[f.name][1]) else 0.0
            for f in flows
        }


def contention_rate(n: int, base: float = 8.6, params: Optional[BianchiParams] = None) -> float:
    """Per-link rate of n mutually sensing saturated links."""
    if n <= 1:
        return base
    return base * mac_efficiency(params or load_profile(), n) / n
