"""Edit distance with configurable insert/delete/replace costs.

Rows index the source string x, columns the target y: deleting removes a
character from x, inserting adds one toward y. The default costs (insert 10,
delete 12, replace 7) match the bundled exercises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from ..array import DPArray, Term
from ..trace import Trace, build_trace

BRUTE_FORCE_MAX_LEN = 8


@dataclass(frozen=True)
class EditCosts:
    insert: float = 10
    delete: float = 12
    replace: float = 7

    def __post_init__(self):
        for name, value in (("insert", self.insert), ("delete", self.delete), ("replace", self.replace)):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{name} cost must be a finite number, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} cost must be non-negative, got {value}")


DEFAULT_COSTS = EditCosts()


class EditResult(NamedTuple):
    cost: float
    trace: Trace


def solve_edit_distance(x: str, y: str, costs: EditCosts = DEFAULT_COSTS) -> EditResult:
    """Minimum cost to turn x into y, with the full table recorded.

    Base row/column hold cumulative insert/delete costs; each interior cell
    is a three-way min over delete (above), insert (left), and replace-or-keep
    (diagonal), so the argmin cell is marked in every interior frame.
    """
    m, n = len(x), len(y)
    arr = DPArray((m + 1, n + 1), name="edit")
    for j in range(n + 1):
        arr[0, j] = j * costs.insert
    for i in range(1, m + 1):
        arr[i, 0] = i * costs.delete
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            swap = 0 if x[i - 1] == y[j - 1] else costs.replace
            arr[i, j] = arr.min(
                [
                    Term((i - 1, j), costs.delete),
                    Term((i, j - 1), costs.insert),
                    Term((i - 1, j - 1), swap),
                ]
            )
    cost = arr[m, n]
    trace = build_trace(
        arr,
        labels={"rows": ["ε"] + list(x), "cols": ["ε"] + list(y)},
    )
    return EditResult(cost=cost, trace=trace)


def brute_force_edit_distance(x: str, y: str, costs: EditCosts = DEFAULT_COSTS) -> float:
    """Plain exponential recursion over edit scripts; the oracle."""
    if len(x) > BRUTE_FORCE_MAX_LEN or len(y) > BRUTE_FORCE_MAX_LEN:
        raise ValueError(f"brute force is limited to strings of length <= {BRUTE_FORCE_MAX_LEN}")

    def go(a: str, b: str) -> float:
        if not a:
            return len(b) * costs.insert
        if not b:
            return len(a) * costs.delete
        swap = 0 if a[0] == b[0] else costs.replace
        return min(
            costs.delete + go(a[1:], b),
            costs.insert + go(a, b[1:]),
            swap + go(a[1:], b[1:]),
        )

    return go(x, y)
