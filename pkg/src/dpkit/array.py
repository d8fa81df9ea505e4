"""Drop-in subproblem array that records every access made through it.

A ``DPArray`` behaves like an ordinary 1D list or 2D table: ``arr[i]`` reads a
cell, ``arr[i] = v`` writes one, ``arr[i, j]`` does the same in two dimensions.
Every access is appended to an operation log that downstream code turns into
an animation. Selections that should highlight the argmax/argmin go through
the dedicated ``max``/``min`` methods; plain built-in ``max`` over already-read
values still works, it just leaves no argmax marker in the log.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

Number = Union[int, float]
Index = tuple[int, ...]


class OpKind(enum.Enum):
    """The three recorded operation categories."""

    READ = "READ"
    WRITE = "WRITE"
    MAXMIN = "MAXMIN"


class EvaluationOrderError(LookupError):
    """A cell was read before anything was written to it.

    This almost always means the recurrence is being evaluated in the wrong
    order (a subproblem was needed before it was solved), so it is a hard
    error rather than a default value.
    """


class WriteConflictError(ValueError):
    """A set cell was re-written while the array is in write-once mode."""


@dataclass(frozen=True)
class OpRecord:
    """One logged operation.

    ``value`` is the value written for WRITE, the value observed for READ,
    and ``None`` for MAXMIN (the marker only identifies the winning index).
    """

    seq: int
    kind: OpKind
    index: Index
    value: Number | None = None


@dataclass(frozen=True)
class Term:
    """One candidate in a max/min selection: value(term) = cell + addend."""

    index: int | tuple[int, ...]
    addend: Number = 0


def _normalize_shape(shape) -> tuple[int, ...]:
    if isinstance(shape, int):
        shape = (shape,)
    try:
        dims = tuple(shape)
    except TypeError:
        raise TypeError(f"shape must be an int or a tuple of ints, got {shape!r}")
    if len(dims) not in (1, 2):
        raise ValueError(f"only 1D and 2D arrays are supported, got {len(dims)} dimensions")
    for extent in dims:
        if isinstance(extent, bool) or not isinstance(extent, int):
            raise TypeError(f"extents must be integers, got {extent!r}")
        if extent < 1:
            raise ValueError(f"extents must be positive, got {extent}")
    return dims


def _check_value(value) -> Number:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"cell values must be int or float, got {type(value).__name__}")
    if not math.isfinite(value):
        raise ValueError(f"cell values must be finite, got {value!r}")
    return value


class DPArray:
    """Instrumented 1D/2D subproblem array.

    Cells start unset; a cell becomes set by its first write and always holds
    the most recently written value. Reading an unset cell raises
    ``EvaluationOrderError``. Recording is single-threaded; once the program
    finishes, the log and snapshots are immutable data safe to share.
    """

    def __init__(self, shape, name: str = "dp", write_once: bool = False):
        self._shape = _normalize_shape(shape)
        self.name = str(name)
        self._write_once = bool(write_once)
        self._cells: dict[Index, Number] = {}
        self._log: list[OpRecord] = []

    @property
    def shape(self) -> tuple[int, ...]:
        return self._shape

    @property
    def ndim(self) -> int:
        return len(self._shape)

    @property
    def log(self) -> tuple[OpRecord, ...]:
        return tuple(self._log)

    def __len__(self) -> int:
        return self._shape[0]

    def __repr__(self) -> str:
        return f"DPArray(shape={self._shape}, name={self.name!r}, ops={len(self._log)})"

    def _normalize_index(self, key) -> Index:
        if isinstance(key, slice) or (isinstance(key, tuple) and any(isinstance(k, slice) for k in key)):
            raise TypeError("slice indexing is not supported; access cells one at a time")
        if self.ndim == 1:
            if isinstance(key, tuple):
                if len(key) != 1:
                    raise IndexError(f"1D array takes a single index, got {key!r}")
                key = key[0]
            idx = (key,)
        else:
            if not isinstance(key, tuple) or len(key) != 2:
                raise IndexError(f"2D array takes an (row, col) index pair, got {key!r}")
            idx = key
        for coord, extent in zip(idx, self._shape):
            if isinstance(coord, bool) or not isinstance(coord, int):
                raise TypeError(f"indices must be integers, got {coord!r}")
            if not 0 <= coord < extent:
                raise IndexError(f"index {idx} out of bounds for shape {self._shape}")
        return idx

    def _record(self, kind: OpKind, index: Index, value: Number | None) -> None:
        self._log.append(OpRecord(seq=len(self._log), kind=kind, index=index, value=value))

    # -- reads and writes ---------------------------------------------------

    def write(self, key, value) -> None:
        """Set a cell and log a WRITE."""
        idx = self._normalize_index(key)
        value = _check_value(value)
        if self._write_once and idx in self._cells:
            raise WriteConflictError(f"cell {idx} already written and write_once is enabled")
        self._cells[idx] = value
        self._record(OpKind.WRITE, idx, value)

    def read(self, key) -> Number:
        """Return a cell's value and log a READ."""
        idx = self._normalize_index(key)
        if idx not in self._cells:
            raise EvaluationOrderError(
                f"cell {idx} was read before it was written (after {len(self._log)} "
                f"operations); the subproblems are being evaluated out of order"
            )
        value = self._cells[idx]
        self._record(OpKind.READ, idx, value)
        return value

    def __getitem__(self, key) -> Number:
        return self.read(key)

    def __setitem__(self, key, value) -> None:
        self.write(key, value)

    def is_set(self, key) -> bool:
        """True if the cell has been written. Does not log."""
        return self._normalize_index(key) in self._cells

    def snapshot(self):
        """Current cell states as (nested) lists with None for unset cells.

        Pure observation: nothing is logged.
        """
        if self.ndim == 1:
            return [self._cells.get((i,)) for i in range(self._shape[0])]
        rows, cols = self._shape
        return [[self._cells.get((i, j)) for j in range(cols)] for i in range(rows)]

    # -- argmax / argmin selections -----------------------------------------

    def _select(self, terms: Iterable[Term | int | tuple], pick_max: bool) -> Number:
        terms = [t if isinstance(t, Term) else Term(t) for t in terms]
        if not terms:
            raise ValueError("max/min needs at least one term")
        best_pos = 0
        values = []
        for term in terms:
            idx = self._normalize_index(term.index)
            addend = _check_value(term.addend)
            values.append(self.read(idx) + addend)
        for pos in range(1, len(terms)):
            # strict comparison keeps the earliest term on ties
            if (values[pos] > values[best_pos]) if pick_max else (values[pos] < values[best_pos]):
                best_pos = pos
        self._record(OpKind.MAXMIN, self._normalize_index(terms[best_pos].index), None)
        return values[best_pos]

    def max(self, terms: Sequence[Term | int | tuple]) -> Number:
        """Maximum of cell+addend over the terms; logs a READ per term plus a
        MAXMIN marker at the winning term's index (earliest term wins ties)."""
        return self._select(terms, pick_max=True)

    def min(self, terms: Sequence[Term | int | tuple]) -> Number:
        """Mirror of :meth:`max` for minimization."""
        return self._select(terms, pick_max=False)
