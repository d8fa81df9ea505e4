"""Random instance generators, sized for the brute-force oracles."""

from __future__ import annotations

import random

from .time_allocation import TimeAllocInstance
from .wis import WISInstance


def random_wis_instance(rng: random.Random, n: int, max_weight: int = 10) -> WISInstance:
    intervals = []
    for _ in range(n):
        start = rng.randint(0, 50)
        intervals.append((start, start + rng.randint(1, 10), rng.randint(1, max_weight)))
    return WISInstance(intervals)


def random_edit_pair(rng: random.Random, max_len: int = 6, alphabet: str = "abc") -> tuple[str, str]:
    def word() -> str:
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))

    return word(), word()


def random_time_allocation(rng: random.Random, n: int, hours: int) -> TimeAllocInstance:
    grades = [[round(rng.uniform(0, 4), 2) for _ in range(hours + 1)] for _ in range(n)]
    return TimeAllocInstance(hours, grades)
