from functools import partial
from typing import Callable, Dict

from src.experiments.base import ExperimentPoint, ExperimentResult, FactorialCell
from src.experiments.studies import (
    RegretRecord,
    ccr_sweep,
    factorial_study,
    multidag_sweep,
    regret_analysis,
    regret_study,
    rgg_scalability,
    routing_comparison,
    run_cell,
)
from src.experiments.validation import (
    bianchi_reproduction,
    exp_distance_sweep,
    exp_nway_contention,
    exp_parallel_separation,
    run_radio_flows,
    validation_suite,
)

# Experiments fanning cells over workers accept a ``workers`` keyword.
EXPERIMENTS: Dict[str, Callable[..., ExperimentResult]] = {
    "exp1": exp_distance_sweep,
    "exp2": partial(exp_parallel_separation, 2),
    "exp4": partial(exp_parallel_separation, 3),
    "exp7": exp_nway_contention,
    "bianchi": bianchi_reproduction,
    "validation": validation_suite,
    "factorial": factorial_study,
    "regret": regret_study,
    "ccr": ccr_sweep,
    "multidag": multidag_sweep,
    "rgg": rgg_scalability,
    "routing": routing_comparison,
}
PARALLEL_EXPERIMENTS = frozenset({"factorial", "regret", "ccr", "multidag", "rgg", "routing"})


def run_experiment(name: str, workers: int = 1) -> ExperimentResult:
    try:
        func = EXPERIMENTS[name]
    except KeyError:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}") from None
    if name in PARALLEL_EXPERIMENTS:
        return func(workers=workers)
    return func()


__all__ = [
    "EXPERIMENTS",
    "ExperimentPoint",
    "ExperimentResult",
    "FactorialCell",
    "RegretRecord",
    "bianchi_reproduction",
    "ccr_sweep",
    "exp_distance_sweep",
    "exp_nway_contention",
    "exp_parallel_separation",
    "factorial_study",
    "multidag_sweep",
    "regret_analysis",
    "regret_study",
    "rgg_scalability",
    "routing_comparison",
    "run_cell",
    "run_experiment",
    "run_radio_flows",
    "validation_suite",
]
