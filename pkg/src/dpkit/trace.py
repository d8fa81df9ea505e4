"""Turn an operation log into animation frames and a portable trace document.

Frames follow one rule: a frame is the maximal run of operations ending at a
WRITE, because a write means a subproblem's answer just landed. Operations
after the last write (a traceback loop, a final read of the answer) are kept
as a single trailing "terminal" frame so nothing recorded ever disappears
from the animation.

Traces serialize to a canonical JSON document (schema version 1) that is
byte-stable: equal traces always produce identical bytes.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .array import DPArray, Index, Number, OpKind, OpRecord

SCHEMA_VERSION = 1

_HEX_COLOR = re.compile(r"^[0-9a-fA-F]{6}$")


class TraceParseError(ValueError):
    """A trace document is malformed; the message names the offending field."""


@dataclass(frozen=True)
class ColorMap:
    """Hex RGB (no '#') for each operation kind."""

    read: str = "B7609A"
    write: str = "5C53A5"
    maxmin: str = "EB7F86"

    def __post_init__(self):
        for kind, value in (("READ", self.read), ("WRITE", self.write), ("MAXMIN", self.maxmin)):
            if not isinstance(value, str) or not _HEX_COLOR.match(value):
                raise ValueError(f"color for {kind} must be a 6-hex-digit string, got {value!r}")

    @classmethod
    def of(cls, value) -> "ColorMap":
        if value is None:
            return DEFAULT_COLORS
        if isinstance(value, ColorMap):
            return value
        if isinstance(value, Mapping):
            return cls(
                read=value.get("READ", DEFAULT_COLORS.read),
                write=value.get("WRITE", DEFAULT_COLORS.write),
                maxmin=value.get("MAXMIN", DEFAULT_COLORS.maxmin),
            )
        raise TypeError(f"colors must be a ColorMap or a kind->hex mapping, got {value!r}")

    def as_dict(self) -> dict[str, str]:
        return {"READ": self.read, "WRITE": self.write, "MAXMIN": self.maxmin}


DEFAULT_COLORS = ColorMap()


@dataclass(frozen=True)
class Frame:
    """One animation step: an op slice plus what it highlights and changes."""

    t: int
    ops: tuple[OpRecord, ...]
    written: frozenset[Index]
    read: frozenset[Index]
    maxmin: frozenset[Index]
    deltas: tuple[tuple[Index, Number], ...]
    terminal: bool = False
    annotation: str | None = None


@dataclass(frozen=True)
class Trace:
    """Ordered frames plus the metadata needed to draw them."""

    name: str
    shape: tuple[int, ...]
    frames: tuple[Frame, ...]
    colors: ColorMap = DEFAULT_COLORS
    row_labels: tuple[str, ...] | None = None
    col_labels: tuple[str, ...] | None = None
    traceback: tuple[Index, ...] | None = None

    @property
    def frame_count(self) -> int:
        return len(self.frames)


def segment(log: Sequence[OpRecord]) -> list[Frame]:
    """Partition a log into frames, each ending at its WRITE.

    Trailing non-WRITE ops form one terminal frame. Highlight sets are
    deduplicated per frame; concatenating the frames' ops reproduces the log.
    """
    frames: list[Frame] = []
    pending: list[OpRecord] = []

    def close(ops: list[OpRecord], terminal: bool) -> None:
        frames.append(
            Frame(
                t=len(frames) + 1,
                ops=tuple(ops),
                written=frozenset(op.index for op in ops if op.kind is OpKind.WRITE),
                read=frozenset(op.index for op in ops if op.kind is OpKind.READ),
                maxmin=frozenset(op.index for op in ops if op.kind is OpKind.MAXMIN),
                deltas=tuple((op.index, op.value) for op in ops if op.kind is OpKind.WRITE),
                terminal=terminal,
            )
        )

    for op in log:
        pending.append(op)
        if op.kind is OpKind.WRITE:
            close(pending, terminal=False)
            pending = []
    if pending:
        close(pending, terminal=True)
    return frames


def _normalize_cell(key, shape: tuple[int, ...], *, field: str = "index") -> Index:
    if isinstance(key, int) and not isinstance(key, bool):
        key = (key,)
    if not isinstance(key, tuple):
        try:
            key = tuple(key)
        except TypeError:
            raise ValueError(f"{field}: expected a cell index, got {key!r}")
    if len(key) != len(shape):
        raise ValueError(f"{field}: index {key!r} does not match shape {shape}")
    for coord, extent in zip(key, shape):
        if isinstance(coord, bool) or not isinstance(coord, int):
            raise ValueError(f"{field}: coordinates must be integers, got {coord!r}")
        if not 0 <= coord < extent:
            raise ValueError(f"{field}: index {key} out of bounds for shape {shape}")
    return key


def _empty_grid(shape: tuple[int, ...]):
    if len(shape) == 1:
        return [None] * shape[0]
    return [[None] * shape[1] for _ in range(shape[0])]


def _apply_delta(grid, index: Index, value: Number) -> None:
    if len(index) == 1:
        grid[index[0]] = value
    else:
        grid[index[0]][index[1]] = value


def _grid_get(grid, index: Index):
    if len(index) == 1:
        return grid[index[0]]
    return grid[index[0]][index[1]]


def final_snapshot(trace: Trace):
    """Array state after every frame, as (nested) lists with None for unset."""
    grid = _empty_grid(trace.shape)
    for frame in trace.frames:
        for index, value in frame.deltas:
            _apply_delta(grid, index, value)
    return grid


def frame_snapshot(trace: Trace, t: int):
    """Array state after frames 1..t, reconstructed from the frames' deltas."""
    if not isinstance(t, int) or isinstance(t, bool) or not 1 <= t <= len(trace.frames):
        raise IndexError(f"frame number {t!r} out of range 1..{len(trace.frames)}")
    grid = _empty_grid(trace.shape)
    for frame in trace.frames[:t]:
        for index, value in frame.deltas:
            _apply_delta(grid, index, value)
    return grid


def _normalize_labels(labels, shape: tuple[int, ...]):
    if labels is None:
        return None, None
    if isinstance(labels, (list, tuple)):
        if len(shape) != 1:
            raise ValueError("labels: a bare list of labels is only valid for 1D arrays; pass {'rows': ..., 'cols': ...}")
        labels = {"cols": labels}
    if not isinstance(labels, Mapping):
        raise ValueError(f"labels: expected a mapping with 'rows'/'cols', got {labels!r}")
    unknown = set(labels) - {"rows", "cols"}
    if unknown:
        raise ValueError(f"labels: unknown keys {sorted(unknown)}")
    rows = labels.get("rows")
    cols = labels.get("cols")
    for axis, value in (("rows", rows), ("cols", cols)):
        if value is not None and not isinstance(value, (list, tuple)):
            raise ValueError(f"labels.{axis}: expected a list of strings, got {value!r}")
    if rows is not None:
        if len(shape) == 1:
            raise ValueError("labels.rows: 1D arrays only take column labels")
        if len(rows) != shape[0]:
            raise ValueError(f"labels.rows: expected {shape[0]} labels, got {len(rows)}")
        rows = tuple(str(s) for s in rows)
    if cols is not None:
        want = shape[-1]
        if len(cols) != want:
            raise ValueError(f"labels.cols: expected {want} labels, got {len(cols)}")
        cols = tuple(str(s) for s in cols)
    return rows, cols


def build_trace(
    arr: DPArray,
    labels=None,
    annotations: Mapping[int, str] | None = None,
    colors=None,
) -> Trace:
    """Segment a finished recording into a Trace.

    ``labels`` is a list (1D) or a ``{"rows": [...], "cols": [...]}`` mapping
    whose arities must match the array shape. ``annotations`` maps frame
    numbers to caption strings shown with that frame.
    """
    frames = segment(arr.log)
    row_labels, col_labels = _normalize_labels(labels, arr.shape)
    if annotations:
        by_t = {}
        for t, text in annotations.items():
            if not isinstance(t, int) or isinstance(t, bool) or not 1 <= t <= len(frames):
                raise ValueError(f"annotations: frame number {t!r} out of range 1..{len(frames)}")
            by_t[t] = str(text)
        frames = [replace(f, annotation=by_t.get(f.t, f.annotation)) for f in frames]
    return Trace(
        name=arr.name,
        shape=arr.shape,
        frames=tuple(frames),
        colors=ColorMap.of(colors),
        row_labels=row_labels,
        col_labels=col_labels,
    )


def add_traceback_path(trace: Trace, path: Iterable) -> Trace:
    """Attach the cells visited by a traceback walk; shown after the last frame.

    Every path index must be in bounds and set once all frames have played.
    An explicit empty path is kept (distinct from "no traceback").
    """
    grid = final_snapshot(trace)
    normalized = []
    for cell in path:
        idx = _normalize_cell(cell, trace.shape, field="traceback")
        if _grid_get(grid, idx) is None:
            raise ValueError(f"traceback: cell {idx} is never written in this trace")
        normalized.append(idx)
    return replace(trace, traceback=tuple(normalized))


# -- canonical JSON ---------------------------------------------------------


def _json_num(value: Number) -> Number:
    # integral floats serialize without a fractional part
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _sorted_cells(cells: frozenset[Index]) -> list[list[int]]:
    return [list(idx) for idx in sorted(cells)]


def frame_to_doc(frame: Frame) -> dict:
    doc = {
        "t": frame.t,
        "ops": [
            {
                "seq": op.seq,
                "kind": op.kind.value,
                "index": list(op.index),
                **({} if op.value is None else {"value": _json_num(op.value)}),
            }
            for op in frame.ops
        ],
        "written": _sorted_cells(frame.written),
        "read": _sorted_cells(frame.read),
        "maxmin": _sorted_cells(frame.maxmin),
        "deltas": [[list(idx), _json_num(v)] for idx, v in frame.deltas],
        "terminal": frame.terminal,
    }
    if frame.annotation is not None:
        doc["annotation"] = frame.annotation
    return doc


def trace_to_doc(trace: Trace) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "name": trace.name,
        "shape": list(trace.shape),
        "colors": trace.colors.as_dict(),
        "frames": [frame_to_doc(f) for f in trace.frames],
    }
    labels = {}
    if trace.row_labels is not None:
        labels["rows"] = list(trace.row_labels)
    if trace.col_labels is not None:
        labels["cols"] = list(trace.col_labels)
    if labels:
        doc["labels"] = labels
    if trace.traceback is not None:
        doc["traceback"] = [list(idx) for idx in trace.traceback]
    return doc


def dumps_doc(doc) -> bytes:
    # "<" is escaped so the document can sit verbatim inside a <script> tag
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True, allow_nan=False)
    return text.replace("<", "\\u003c").encode("ascii")


def serialize_trace(trace: Trace) -> bytes:
    """Canonical JSON bytes; equal traces serialize to identical bytes."""
    return dumps_doc(trace_to_doc(trace))


def _reject_constant(name: str):
    raise TraceParseError(f"value: non-finite number {name} is not allowed")


def _parse_index(raw, shape: tuple[int, ...], field: str) -> Index:
    if not isinstance(raw, list) or len(raw) != len(shape):
        raise TraceParseError(f"{field}: expected a {len(shape)}-coordinate index array, got {raw!r}")
    idx = []
    for coord, extent in zip(raw, shape):
        if isinstance(coord, bool) or not isinstance(coord, int):
            raise TraceParseError(f"{field}: coordinates must be integers, got {coord!r}")
        if not 0 <= coord < extent:
            raise TraceParseError(f"{field}: index {raw} out of bounds for shape {shape}")
        idx.append(coord)
    return tuple(idx)


def _parse_value(raw, field: str) -> Number:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise TraceParseError(f"{field}: expected a number, got {raw!r}")
    if not math.isfinite(raw):
        raise TraceParseError(f"{field}: values must be finite")
    return raw


def _parse_cell_list(raw, shape, field: str) -> frozenset[Index]:
    if not isinstance(raw, list):
        raise TraceParseError(f"{field}: expected a list of indices")
    return frozenset(_parse_index(item, shape, f"{field}[{k}]") for k, item in enumerate(raw))


def deserialize_trace(data: bytes | str) -> Trace:
    """Parse and fully validate a trace document.

    Raises :class:`TraceParseError` naming the first offending field when the
    document is malformed or violates a structural invariant.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data, parse_constant=_reject_constant)
    except json.JSONDecodeError as err:
        raise TraceParseError(f"document: not valid JSON ({err.msg} at position {err.pos})")
    if not isinstance(doc, dict):
        raise TraceParseError("document: top level must be an object")
    if doc.get("schema") != SCHEMA_VERSION:
        raise TraceParseError(f"schema: unsupported version {doc.get('schema')!r} (expected {SCHEMA_VERSION})")

    name = doc.get("name")
    if not isinstance(name, str):
        raise TraceParseError(f"name: expected a string, got {name!r}")

    raw_shape = doc.get("shape")
    if (
        not isinstance(raw_shape, list)
        or len(raw_shape) not in (1, 2)
        or any(isinstance(e, bool) or not isinstance(e, int) or e < 1 for e in raw_shape)
    ):
        raise TraceParseError(f"shape: expected one or two positive integer extents, got {raw_shape!r}")
    shape = tuple(raw_shape)

    raw_colors = doc.get("colors")
    if not isinstance(raw_colors, dict) or set(raw_colors) != {"READ", "WRITE", "MAXMIN"}:
        raise TraceParseError("colors: expected exactly the keys READ, WRITE, MAXMIN")
    for kind, value in raw_colors.items():
        if not isinstance(value, str) or not _HEX_COLOR.match(value):
            raise TraceParseError(f"colors.{kind}: expected a 6-hex-digit string, got {value!r}")
    colors = ColorMap(read=raw_colors["READ"], write=raw_colors["WRITE"], maxmin=raw_colors["MAXMIN"])

    row_labels = col_labels = None
    if "labels" in doc:
        raw_labels = doc["labels"]
        if not isinstance(raw_labels, dict) or not set(raw_labels) <= {"rows", "cols"}:
            raise TraceParseError("labels: expected an object with only 'rows'/'cols'")
        for axis in ("rows", "cols"):
            entries = raw_labels.get(axis)
            if entries is not None and (
                not isinstance(entries, list) or not all(isinstance(s, str) for s in entries)
            ):
                raise TraceParseError(f"labels.{axis}: expected a list of strings")
        try:
            row_labels, col_labels = _normalize_labels(raw_labels, shape)
        except ValueError as err:
            raise TraceParseError(str(err))

    raw_frames = doc.get("frames")
    if not isinstance(raw_frames, list):
        raise TraceParseError("frames: expected a list")

    frames: list[Frame] = []
    grid = _empty_grid(shape)
    next_seq = 0
    for pos, raw_frame in enumerate(raw_frames):
        where = f"frames[{pos}]"
        if not isinstance(raw_frame, dict):
            raise TraceParseError(f"{where}: expected an object")
        missing = {"t", "ops", "written", "read", "maxmin", "deltas", "terminal"} - set(raw_frame)
        if missing:
            raise TraceParseError(f"{where}.{sorted(missing)[0]}: missing required field")
        if raw_frame["t"] != pos + 1:
            raise TraceParseError(f"{where}.t: expected {pos + 1}, got {raw_frame['t']!r}")
        terminal = raw_frame["terminal"]
        if not isinstance(terminal, bool):
            raise TraceParseError(f"{where}.terminal: expected a boolean")

        raw_ops = raw_frame["ops"]
        if not isinstance(raw_ops, list) or not raw_ops:
            raise TraceParseError(f"{where}.ops: expected a non-empty list")
        ops: list[OpRecord] = []
        for k, raw_op in enumerate(raw_ops):
            op_where = f"{where}.ops[{k}]"
            if not isinstance(raw_op, dict):
                raise TraceParseError(f"{op_where}: expected an object")
            try:
                kind = OpKind(raw_op.get("kind"))
            except ValueError:
                raise TraceParseError(f"{op_where}.kind: unknown operation kind {raw_op.get('kind')!r}")
            seq = raw_op.get("seq")
            if isinstance(seq, bool) or not isinstance(seq, int) or seq != next_seq:
                raise TraceParseError(f"{op_where}.seq: expected {next_seq}, got {seq!r}")
            next_seq += 1
            index = _parse_index(raw_op.get("index"), shape, f"{op_where}.index")
            if kind is OpKind.MAXMIN:
                if "value" in raw_op:
                    raise TraceParseError(f"{op_where}.value: MAXMIN records carry no value")
                value = None
            else:
                if "value" not in raw_op:
                    raise TraceParseError(f"{op_where}.value: {kind.value} records require a value")
                value = _parse_value(raw_op["value"], f"{op_where}.value")
            if kind is OpKind.WRITE:
                _apply_delta(grid, index, value)
            elif kind is OpKind.READ:
                current = _grid_get(grid, index)
                if current is None:
                    raise TraceParseError(f"{op_where}: READ of cell {list(index)} before any write to it")
                if current != value:
                    raise TraceParseError(
                        f"{op_where}.value: READ value {value!r} disagrees with the replayed cell value {current!r}"
                    )
            ops.append(OpRecord(seq=seq, kind=kind, index=index, value=value))

        writes = [op for op in ops if op.kind is OpKind.WRITE]
        if terminal:
            if writes:
                raise TraceParseError(f"{where}.terminal: terminal frames cannot contain WRITE operations")
            if pos != len(raw_frames) - 1:
                raise TraceParseError(f"{where}.terminal: a terminal frame must be the last frame")
        else:
            if len(writes) != 1 or ops[-1].kind is not OpKind.WRITE:
                raise TraceParseError(
                    f"{where}.ops: a non-terminal frame must contain exactly one WRITE, in final position"
                )

        written = _parse_cell_list(raw_frame["written"], shape, f"{where}.written")
        read = _parse_cell_list(raw_frame["read"], shape, f"{where}.read")
        maxmin = _parse_cell_list(raw_frame["maxmin"], shape, f"{where}.maxmin")
        if written != frozenset(op.index for op in writes):
            raise TraceParseError(f"{where}.written: does not match the frame's WRITE operations")
        if read != frozenset(op.index for op in ops if op.kind is OpKind.READ):
            raise TraceParseError(f"{where}.read: does not match the frame's READ operations")
        if maxmin != frozenset(op.index for op in ops if op.kind is OpKind.MAXMIN):
            raise TraceParseError(f"{where}.maxmin: does not match the frame's MAXMIN operations")
        if not maxmin <= (read | written):
            raise TraceParseError(f"{where}.maxmin: markers must point at cells read or written in the frame")

        raw_deltas = raw_frame["deltas"]
        if not isinstance(raw_deltas, list):
            raise TraceParseError(f"{where}.deltas: expected a list")
        deltas = []
        for k, raw_delta in enumerate(raw_deltas):
            if not isinstance(raw_delta, list) or len(raw_delta) != 2:
                raise TraceParseError(f"{where}.deltas[{k}]: expected an [index, value] pair")
            deltas.append(
                (
                    _parse_index(raw_delta[0], shape, f"{where}.deltas[{k}]"),
                    _parse_value(raw_delta[1], f"{where}.deltas[{k}]"),
                )
            )
        if tuple(deltas) != tuple((op.index, op.value) for op in writes):
            raise TraceParseError(f"{where}.deltas: does not mirror the frame's WRITE operations")

        annotation = None
        if "annotation" in raw_frame:
            annotation = raw_frame["annotation"]
            if not isinstance(annotation, str):
                raise TraceParseError(f"{where}.annotation: expected a string")

        frames.append(
            Frame(
                t=pos + 1,
                ops=tuple(ops),
                written=written,
                read=read,
                maxmin=maxmin,
                deltas=tuple(deltas),
                terminal=terminal,
                annotation=annotation,
            )
        )

    traceback = None
    if "traceback" in doc:
        raw_tb = doc["traceback"]
        if not isinstance(raw_tb, list):
            raise TraceParseError("traceback: expected a list of indices")
        traceback = []
        for k, raw_cell in enumerate(raw_tb):
            idx = _parse_index(raw_cell, shape, f"traceback[{k}]")
            if _grid_get(grid, idx) is None:
                raise TraceParseError(f"traceback[{k}]: cell {list(idx)} is never written in this trace")
            traceback.append(idx)
        traceback = tuple(traceback)

    allowed = {"schema", "name", "shape", "colors", "labels", "frames", "traceback"}
    unknown = set(doc) - allowed
    if unknown:
        raise TraceParseError(f"{sorted(unknown)[0]}: unknown top-level field")

    return Trace(
        name=name,
        shape=shape,
        frames=tuple(frames),
        colors=colors,
        row_labels=row_labels,
        col_labels=col_labels,
        traceback=traceback,
    )
