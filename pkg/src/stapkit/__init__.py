"""Approximation algorithms and exact oracles for Steiner tree augmentation."""

from .greedy import GreedyParams, StapSolution, epsilon_to_params, local_greedy
from .instance import (
    BudgetExceeded,
    InfeasibleInstance,
    InvalidInstance,
    Link,
    StapError,
    StapInstance,
    make_instance,
    validate,
)
from .io import format_instance, parse_instance, read_instance
from .nwgreedy import NwSolution, greedy_nwstap
from .oracles import check_feasible_nwstap, check_feasible_stap, exact_nwstap, exact_stap

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "GreedyParams",
    "InfeasibleInstance",
    "InvalidInstance",
    "Link",
    "NwSolution",
    "StapError",
    "StapInstance",
    "StapSolution",
    "check_feasible_nwstap",
    "check_feasible_stap",
    "epsilon_to_params",
    "exact_nwstap",
    "exact_stap",
    "format_instance",
    "greedy_nwstap",
    "local_greedy",
    "make_instance",
    "parse_instance",
    "read_instance",
    "validate",
]
