from src.routing.rates import effective_rate, link_share, transfer_duration
from src.routing.routes import (
    ROUTING_MODELS,
    DirectRouting,
    Route,
    RoutingModel,
    ShortestPathRouting,
    WidestPathRouting,
    find_route,
    get_routing_model,
    max_bottleneck,
)

__all__ = [
    "ROUTING_MODELS",
    "DirectRouting",
    "Route",
    "RoutingModel",
    "ShortestPathRouting",
    "WidestPathRouting",
    "effective_rate",
    "find_route",
    "get_routing_model",
    "link_share",
    "max_bottleneck",
    "transfer_duration",
]
