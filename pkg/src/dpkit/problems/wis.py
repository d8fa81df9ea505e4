"""Weighted interval scheduling: pick non-overlapping intervals of maximum
total weight.

Intervals are normalized to non-decreasing finish order. Two intervals are
compatible only if one starts strictly after the other finishes, so touching
endpoints count as overlapping; consistently, interval i's predecessor is the
latest interval finishing strictly before i starts.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from ..array import DPArray, Term
from ..trace import Trace, add_traceback_path, build_trace

BRUTE_FORCE_MAX_N = 20


@dataclass(frozen=True)
class Interval:
    start: float
    finish: float
    weight: float

    def __post_init__(self):
        for field_name, value in (("start", self.start), ("finish", self.finish), ("weight", self.weight)):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"interval {field_name} must be a finite number, got {value!r}")
        if self.finish <= self.start:
            raise ValueError(f"interval must finish after it starts, got ({self.start}, {self.finish})")
        if self.weight <= 0:
            raise ValueError(f"interval weight must be positive, got {self.weight}")

    def overlaps(self, other: "Interval") -> bool:
        return not (self.start > other.finish or other.start > self.finish)


def _as_interval(item) -> Interval:
    if isinstance(item, Interval):
        return item
    return Interval(*item)


def predecessors(intervals: Iterable[Interval]) -> list[int]:
    """p_i = the largest j with f_j < s_i, or 0 when none (1-based ids).

    Input must already be sorted by non-decreasing finish time.
    """
    intervals = [_as_interval(iv) for iv in intervals]
    finishes = [iv.finish for iv in intervals]
    if any(a > b for a, b in zip(finishes, finishes[1:])):
        raise ValueError("intervals must be sorted by non-decreasing finish time")
    # count of finishes strictly below the start == latest such 1-based id
    return [bisect_left(finishes, iv.start) for iv in intervals]


class WISInstance:
    """Intervals sorted by (finish, start, input position) plus predecessors."""

    def __init__(self, intervals: Iterable):
        items = [_as_interval(iv) for iv in intervals]
        order = sorted(range(len(items)), key=lambda k: (items[k].finish, items[k].start, k))
        self.intervals: tuple[Interval, ...] = tuple(items[k] for k in order)
        self.predecessors: tuple[int, ...] = tuple(predecessors(self.intervals))

    @property
    def n(self) -> int:
        return len(self.intervals)

    def __repr__(self) -> str:
        return f"WISInstance(n={self.n})"


class WISResult(NamedTuple):
    value: float
    chosen: frozenset[int]
    trace: Trace


def solve_wis(instance: WISInstance) -> WISResult:
    """Fill the OPT table, trace back the chosen set, and record it all.

    OPT(0) = 0 and OPT(i) = max(OPT(i-1), w_i + OPT(p_i)); the chosen ids are
    1-based positions in the instance's sorted order and the recorded
    traceback path visits their cells from the last interval backwards.
    """
    if not isinstance(instance, WISInstance):
        raise TypeError("solve_wis takes a WISInstance")
    n = instance.n
    p = instance.predecessors
    arr = DPArray(n + 1, name="OPT")
    arr[0] = 0
    for i in range(1, n + 1):
        arr[i] = arr.max([Term(i - 1), Term(p[i - 1], instance.intervals[i - 1].weight)])

    value = arr[n]
    chosen = []
    i = n
    while i > 0:
        if arr[i] == arr[i - 1]:
            i -= 1
        else:
            chosen.append(i)
            i = p[i - 1]

    annotations = {1: "base case: OPT(0) = 0"}
    for i in range(1, n + 1):
        annotations[i + 1] = f"OPT({i}) = max(OPT({i - 1}), w_{i} + OPT({p[i - 1]}))"
    annotations[n + 2] = "traceback: keep interval i unless OPT(i) = OPT(i-1)"
    trace = build_trace(arr, labels=[f"OPT({i})" for i in range(n + 1)], annotations=annotations)
    trace = add_traceback_path(trace, chosen)
    return WISResult(value=value, chosen=frozenset(chosen), trace=trace)


def brute_force_wis(instance: WISInstance) -> float:
    """Exact optimum by trying every subset; the oracle for solve_wis."""
    if not isinstance(instance, WISInstance):
        raise TypeError("brute_force_wis takes a WISInstance")
    n = instance.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got n = {n}")
    items = instance.intervals
    best = 0
    for mask in range(1 << n):
        picked = [items[i] for i in range(n) if mask >> i & 1]
        ok = all(not a.overlaps(b) for k, a in enumerate(picked) for b in picked[k + 1 :])
        if ok:
            best = max(best, sum(iv.weight for iv in picked))
    return best
