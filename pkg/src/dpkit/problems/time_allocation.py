"""Split a fixed budget of study hours across classes to maximize GPA.

Each class i comes with a table g_i[h] of the grade earned after h hours of
study; the GPA is the mean grade over all classes, and hours may be left
unused.
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Sequence

from ..array import DPArray, Term
from ..trace import Trace, build_trace

BRUTE_FORCE_MAX_STATES = 10**6


class TimeAllocInstance:
    """H total hours and one grade table of length H+1 per class."""

    def __init__(self, hours: int, grades: Sequence[Sequence[float]]):
        if isinstance(hours, bool) or not isinstance(hours, int) or hours < 0:
            raise ValueError(f"hours must be a non-negative integer, got {hours!r}")
        rows = [tuple(row) for row in grades]
        if not rows:
            raise ValueError("at least one class is required")
        for i, row in enumerate(rows):
            if len(row) != hours + 1:
                raise ValueError(f"grades[{i}] must have {hours + 1} entries (one per hour count), got {len(row)}")
            for value in row:
                if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                    raise ValueError(f"grades[{i}] entries must be finite numbers, got {value!r}")
        self.hours = hours
        self.grades: tuple[tuple[float, ...], ...] = tuple(rows)

    @property
    def n(self) -> int:
        return len(self.grades)

    def __repr__(self) -> str:
        return f"TimeAllocInstance(n={self.n}, hours={self.hours})"


class TimeAllocResult(NamedTuple):
    gpa: float
    trace: Trace


def solve_time_allocation(instance: TimeAllocInstance) -> TimeAllocResult:
    """Best achievable GPA via the table best[i][h] = top total grade using
    the first i classes and at most h hours."""
    n, H = instance.n, instance.hours
    arr = DPArray((n + 1, H + 1), name="best")
    for h in range(H + 1):
        arr[0, h] = 0
    for i in range(1, n + 1):
        g = instance.grades[i - 1]
        for h in range(H + 1):
            arr[i, h] = arr.max([Term((i - 1, h - k), g[k]) for k in range(h + 1)])
    total = arr[n, H]
    trace = build_trace(
        arr,
        labels={
            "rows": ["no classes"] + [f"class {i}" for i in range(1, n + 1)],
            "cols": [f"{h}h" for h in range(H + 1)],
        },
    )
    return TimeAllocResult(gpa=total / n, trace=trace)


def brute_force_time_allocation(instance: TimeAllocInstance) -> float:
    """Try every hour split with sum <= H; the oracle."""
    n, H = instance.n, instance.hours
    if (H + 1) ** n > BRUTE_FORCE_MAX_STATES:
        raise ValueError(f"brute force is limited to (H+1)^n <= {BRUTE_FORCE_MAX_STATES}")
    best = None
    for combo in itertools.product(range(H + 1), repeat=n):
        if sum(combo) > H:
            continue
        total = 0
        for i, h in enumerate(combo):
            total = total + instance.grades[i][h]
        if best is None or total > best:
            best = total
    return best / n
