"""Reference dynamic programs recorded with DPArray, each paired with a
brute-force oracle."""

from .edit_distance import (
    DEFAULT_COSTS,
    EditCosts,
    EditResult,
    brute_force_edit_distance,
    solve_edit_distance,
)
from .generate import random_edit_pair, random_time_allocation, random_wis_instance
from .instances import load_instance, parse_instance
from .time_allocation import (
    TimeAllocInstance,
    TimeAllocResult,
    brute_force_time_allocation,
    solve_time_allocation,
)
from .wis import Interval, WISInstance, WISResult, brute_force_wis, predecessors, solve_wis

__all__ = [
    "DEFAULT_COSTS",
    "EditCosts",
    "EditResult",
    "Interval",
    "TimeAllocInstance",
    "TimeAllocResult",
    "WISInstance",
    "WISResult",
    "brute_force_edit_distance",
    "brute_force_time_allocation",
    "brute_force_wis",
    "load_instance",
    "parse_instance",
    "predecessors",
    "random_edit_pair",
    "random_time_allocation",
    "random_wis_instance",
    "solve_edit_distance",
    "solve_time_allocation",
    "solve_wis",
]
