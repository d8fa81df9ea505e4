"""Self-test questions over a trace: predict the next frame before seeing it.

Three question kinds exist per frame: which cells get written, which cells
get read, and the value landing in each written cell. Answering every
selected question correctly reveals the frame and moves the session forward;
wrong answers keep the question open and bump a mistake counter, with
shape-level feedback that never includes the value being asked for.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable

from .array import Index, Number
from .trace import Trace

VALUE_REL_TOL = 1e-9


class QuestionKind(enum.Enum):
    WRITE_CELLS = "WRITE_CELLS"
    READ_CELLS = "READ_CELLS"
    CELL_VALUE = "CELL_VALUE"


class StaleQuestionError(ValueError):
    """The submitted question is not pending in this session."""


def _normalize_cells(cells: Iterable) -> frozenset[Index]:
    out = set()
    for cell in cells:
        if isinstance(cell, int) and not isinstance(cell, bool):
            cell = (cell,)
        out.add(tuple(cell))
    return frozenset(out)


@dataclass(frozen=True)
class Question:
    """One prompt about frame ``t``; carries its own ground truth."""

    kind: QuestionKind
    t: int
    target: Index | None = None
    truth_cells: frozenset[Index] | None = None
    truth_value: Number | None = None


@dataclass(frozen=True)
class Answer:
    """Either a set of cells or a single value, matching the question kind."""

    cells: frozenset[Index] | None = None
    value: Number | None = None

    @classmethod
    def of_cells(cls, cells: Iterable) -> "Answer":
        return cls(cells=_normalize_cells(cells))

    @classmethod
    def of_value(cls, value: Number) -> "Answer":
        return cls(value=value)


@dataclass(frozen=True)
class Verdict:
    """Graded outcome. ``missing``/``extra`` are populated for cell questions."""

    correct: bool
    missing: frozenset[Index] = frozenset()
    extra: frozenset[Index] = frozenset()
    message: str = ""


@dataclass(frozen=True)
class SessionState:
    """One learner's progress through a trace's questions.

    ``t`` runs from 1 to frame_count + 1; reaching frame_count + 1 means the
    session is complete. All pending questions reference frame ``t``.
    """

    trace: Trace
    t: int
    enabled: frozenset[QuestionKind]
    pending: tuple[Question, ...]
    mistakes: int = 0
    complete: bool = False
    history: tuple[tuple[Question, Verdict], ...] = ()


def questions_for_frame(trace: Trace, t: int, enabled: Iterable[QuestionKind]) -> list[Question]:
    """Questions about frame ``t``, in the fixed order write, read, values.

    Ground truths come straight off the frame's highlight sets and deltas.
    """
    enabled = frozenset(enabled)
    if not enabled:
        raise ValueError("enabled question kinds must not be empty")
    if not all(isinstance(kind, QuestionKind) for kind in enabled):
        raise TypeError(f"enabled kinds must be QuestionKind members, got {enabled!r}")
    if not isinstance(t, int) or isinstance(t, bool) or not 1 <= t <= len(trace.frames):
        raise IndexError(f"frame number {t!r} out of range 1..{len(trace.frames)}")
    frame = trace.frames[t - 1]
    questions = []
    if QuestionKind.WRITE_CELLS in enabled:
        questions.append(Question(kind=QuestionKind.WRITE_CELLS, t=t, truth_cells=frame.written))
    if QuestionKind.READ_CELLS in enabled:
        questions.append(Question(kind=QuestionKind.READ_CELLS, t=t, truth_cells=frame.read))
    if QuestionKind.CELL_VALUE in enabled:
        for index, value in frame.deltas:
            questions.append(Question(kind=QuestionKind.CELL_VALUE, t=t, target=index, truth_value=value))
    return questions


def _values_match(truth: Number, answer: Number) -> bool:
    if isinstance(answer, bool) or not isinstance(answer, (int, float)) or not math.isfinite(answer):
        return False
    if isinstance(truth, int) or float(truth).is_integer():
        return answer == truth
    return math.isclose(answer, truth, rel_tol=VALUE_REL_TOL, abs_tol=0.0)


def check_answer(question: Question, answer: Answer) -> Verdict:
    """Grade an answer.

    Cell questions require exact set equality; the verdict names missing and
    extra indices. Value questions compare exactly for integral truths and
    within a 1e-9 relative tolerance otherwise; feedback is only "value
    mismatch", never the expected value.
    """
    if question.kind is QuestionKind.CELL_VALUE:
        if answer.value is None or answer.cells is not None:
            raise TypeError("a CELL_VALUE question takes a value answer")
        if _values_match(question.truth_value, answer.value):
            return Verdict(correct=True)
        return Verdict(correct=False, message="value mismatch")
    if answer.cells is None or answer.value is not None:
        raise TypeError(f"a {question.kind.value} question takes a cell-set answer")
    cells = _normalize_cells(answer.cells)
    missing = question.truth_cells - cells
    extra = cells - question.truth_cells
    if not missing and not extra:
        return Verdict(correct=True)
    parts = []
    if missing:
        parts.append(f"{len(missing)} missing")
    if extra:
        parts.append(f"{len(extra)} extra")
    return Verdict(correct=False, missing=missing, extra=extra, message=", ".join(parts))


def _advance(trace: Trace, t: int, enabled: frozenset[QuestionKind]) -> tuple[int, tuple[Question, ...], bool]:
    # skip frames that generate no questions (possible only when just
    # CELL_VALUE is enabled and a frame writes nothing)
    while t <= len(trace.frames):
        questions = questions_for_frame(trace, t, enabled)
        if questions:
            return t, tuple(questions), False
        t += 1
    return len(trace.frames) + 1, (), True


def start_session(trace: Trace, enabled: Iterable[QuestionKind], start_t: int = 1) -> SessionState:
    """Begin testing at ``start_t`` (typically the currently viewed frame)."""
    enabled = frozenset(enabled)
    if not enabled:
        raise ValueError("enabled question kinds must not be empty")
    if not isinstance(start_t, int) or isinstance(start_t, bool) or not 1 <= start_t <= len(trace.frames):
        raise IndexError(f"starting frame {start_t!r} out of range 1..{len(trace.frames)}")
    t, pending, complete = _advance(trace, start_t, enabled)
    return SessionState(trace=trace, t=t, enabled=enabled, pending=pending, complete=complete)


def submit(state: SessionState, question: Question, answer: Answer) -> SessionState:
    """Grade one pending question and return the next session state.

    A correct answer retires the question; once no questions remain for the
    current frame the session moves to the next frame (or completes). An
    incorrect answer keeps the question pending and increments the mistake
    counter. ``t`` and the mistake counter never decrease.
    """
    if question not in state.pending:
        raise StaleQuestionError(f"question {question.kind.value} for frame {question.t} is not pending")
    verdict = check_answer(question, answer)
    history = state.history + ((question, verdict),)
    if not verdict.correct:
        return replace(state, mistakes=state.mistakes + 1, history=history)
    pending = tuple(q for q in state.pending if q != question)
    if pending:
        return replace(state, pending=pending, history=history)
    t, pending, complete = _advance(state.trace, state.t + 1, state.enabled)
    return replace(state, t=t, pending=pending, complete=complete, history=history)
