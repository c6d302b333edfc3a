"""Scheduler registry."""
from typing import Dict, Optional, Type

from src.routing.routes import RoutingModel
from src.scheduling.base import (
    ManualScheduler,
    RoundRobinScheduler,
    Scheduler,
    schedule_manual,
    schedule_round_robin,
)
from src.scheduling.cpop import CpopScheduler, critical_path, schedule_cpop
from src.scheduling.heft import HeftScheduler, estimate_makespan, schedule_heft, upward_ranks
from src.scheduling.virtual_network import UNREACHABLE_BANDWIDTH, VirtualNetwork, build_virtual_network

SCHEDULERS: Dict[str, Type[Scheduler]] = {
    cls.name: cls for cls in (ManualScheduler, RoundRobinScheduler, HeftScheduler, CpopScheduler)
}


def get_scheduler(name: str, routing: Optional[RoutingModel] = None) -> Scheduler:
    try:
        return SCHEDULERS[name](routing)
    except KeyError:
        raise ValueError(f"unknown scheduler {name!r}; expected one of {sorted(SCHEDULERS)}") from None


__all__ = [
    "SCHEDULERS",
    "UNREACHABLE_BANDWIDTH",
    "CpopScheduler",
    "HeftScheduler",
    "ManualScheduler",
    "RoundRobinScheduler",
    "Scheduler",
    "VirtualNetwork",
    "build_virtual_network",
    "critical_path",
    "estimate_makespan",
    "get_scheduler",
    "schedule_cpop",
    "schedule_heft",
    "schedule_manual",
    "schedule_round_robin",
    "upward_ranks",
]
