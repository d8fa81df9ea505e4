"""Load problem instances from JSON files.

The format is a single object with a "problem" tag and fields mirroring the
instance types:

    {"problem": "wis", "intervals": [{"start": 1, "finish": 3, "weight": 2}, ...]}
    {"problem": "edit_distance", "x": "kitten", "y": "sitting",
     "costs": {"insert": 10, "delete": 12, "replace": 7}}
    {"problem": "time_allocation", "hours": 2, "grades": [[0, 1, 4], [0, 3, 5]]}

Interval entries may also be [start, finish, weight] triples.
"""

from __future__ import annotations

import json
from pathlib import Path

from .edit_distance import DEFAULT_COSTS, EditCosts
from .time_allocation import TimeAllocInstance
from .wis import WISInstance

PROBLEMS = ("wis", "edit_distance", "time_allocation")


def parse_instance(doc: dict) -> tuple[str, object]:
    """Return (problem name, instance payload) for a parsed document.

    The edit-distance payload is an (x, y, costs) triple; the others are the
    instance objects themselves.
    """
    if not isinstance(doc, dict):
        raise ValueError("instance document must be a JSON object")
    problem = doc.get("problem")
    if problem == "wis":
        raw = doc.get("intervals")
        if not isinstance(raw, list):
            raise ValueError("wis instance needs an 'intervals' list")
        intervals = []
        for item in raw:
            if isinstance(item, dict):
                intervals.append((item.get("start"), item.get("finish"), item.get("weight")))
            else:
                intervals.append(tuple(item))
        return problem, WISInstance(intervals)
    if problem == "edit_distance":
        x, y = doc.get("x"), doc.get("y")
        if not isinstance(x, str) or not isinstance(y, str):
            raise ValueError("edit_distance instance needs string fields 'x' and 'y'")
        costs = DEFAULT_COSTS
        if "costs" in doc:
            raw = doc["costs"]
            if not isinstance(raw, dict) or not set(raw) <= {"insert", "delete", "replace"}:
                raise ValueError("edit_distance 'costs' must be an object with insert/delete/replace")
            costs = EditCosts(
                insert=raw.get("insert", DEFAULT_COSTS.insert),
                delete=raw.get("delete", DEFAULT_COSTS.delete),
                replace=raw.get("replace", DEFAULT_COSTS.replace),
            )
        return problem, (x, y, costs)
    if problem == "time_allocation":
        return problem, TimeAllocInstance(doc.get("hours"), doc.get("grades") or [])
    raise ValueError(f"unknown problem {problem!r}; expected one of {', '.join(PROBLEMS)}")


def load_instance(path) -> tuple[str, object]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}: not valid JSON ({err.msg})")
    return parse_instance(doc)
