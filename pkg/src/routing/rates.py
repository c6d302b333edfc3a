"""Flow-level rate of a route under fair sharing and interference."""
from typing import Dict, FrozenSet, Mapping, Optional

from src.mac.interference import InterferenceModel, LinkFactor, NoInterference
from src.models.network import LinkKey, LinkSpec
from src.routing.routes import Route


def link_share(link: LinkSpec, flows: int, factor: float = 1.0) -> float:
    """Per-flow share of a link: bandwidth * f / N."""
    return link.bandwidth * factor / max(1, flows)


def effective_rate(
    route: Route,
    flow_counts: Mapping[LinkKey, int],
    model: Optional[InterferenceModel] = None,
    active: Optional[FrozenSet[LinkKey]] = None,
    factors: Optional[Dict[LinkKey, LinkFactor]] = None,
) -> float:
    """Bottleneck per-flow rate (MB/s) along ``route``.

    ``flow_counts`` must already include the flow being rated. ``factors`` is
    an optional per-call memo of link factors for the same active set.
    """
    model = model or NoInterference()
    if active is None:
        active = frozenset(k for k, n in flow_counts.items() if n > 0)
    rate = None
    for link in route.links:
        factor = factors.get(link.key) if factors is not None else None
        if factor is None:
            factor = model.link_factor(link.key, active)
            if factors is not None:
                factors[link.key] = factor
        share = link_share(link, flow_counts.get(link.key, 0), factor.f)
        rate = share if rate is None else min(rate, share)
    return rate


def transfer_duration(route: Route, remaining: float, rate: float) -> float:
    """Seconds to move ``remaining`` MB at ``rate``, with route latency charged once."""
    return route.latency + remaining / rate
