from src.mac.bianchi import (
    BianchiParams,
    BianchiSolution,
    contention_factor,
    load_profile,
    mac_efficiency,
    saturation_throughput,
    solve_bianchi,
)
from src.mac.conflict import ActiveSets, ConflictGraph, build_conflict_graph, links_conflict, maximal_cliques
from src.mac.interference import (
    FACTOR_CEIL,
    FACTOR_FLOOR,
    CsmaBianchi,
    InterferenceModel,
    LinkFactor,
    NoInterference,
    build_interference_model,
    combined_factor,
    hidden_factor,
    sinr,
)

__all__ = [
    "FACTOR_CEIL",
    "FACTOR_FLOOR",
    "ActiveSets",
    "BianchiParams",
    "BianchiSolution",
    "ConflictGraph",
    "CsmaBianchi",
    "InterferenceModel",
    "LinkFactor",
    "NoInterference",
    "build_conflict_graph",
    "build_interference_model",
    "combined_factor",
    "contention_factor",
    "hidden_factor",
    "links_conflict",
    "load_profile",
    "mac_efficiency",
    "maximal_cliques",
    "saturation_throughput",
    "sinr",
    "solve_bianchi",
]
