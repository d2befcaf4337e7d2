"""Dominance regions for simple-motion pursuit-evasion, with simulation and checks."""

from ._core import (
    DominanceRegion,
    DomainError,
    NonDifferentiable,
    OutsideWorld,
    ParseError,
    PursuitError,
    StrategyInapplicable,
    World,
    defense_decision,
    eta_m,
    metric_gradients,
    parse_scenario,
    run_suite,
    shortest_distance,
    shortest_path,
    simulate,
    suite_names,
)

__all__ = [
    "DominanceRegion",
    "DomainError",
    "NonDifferentiable",
    "OutsideWorld",
    "ParseError",
    "PursuitError",
    "StrategyInapplicable",
    "World",
    "defense_decision",
    "eta_m",
    "metric_gradients",
    "parse_scenario",
    "run_suite",
    "shortest_distance",
    "shortest_path",
    "simulate",
    "suite_names",
]
