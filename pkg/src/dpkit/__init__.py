"""dpkit: record, animate, and self-test 1D/2D dynamic programs.

Swap a plain list for a :class:`DPArray`, run the algorithm unchanged, and
call :func:`build_trace` on the result; nothing else in the code needs to
know it is being watched.
"""

from .array import (
    DPArray,
    EvaluationOrderError,
    OpKind,
    OpRecord,
    Term,
    WriteConflictError,
)
from .export import export_static
from .quiz import (
    Answer,
    Question,
    QuestionKind,
    SessionState,
    StaleQuestionError,
    Verdict,
    check_answer,
    questions_for_frame,
    start_session,
    submit,
)
from .server import TraceServer, display, serve
from .trace import (
    DEFAULT_COLORS,
    ColorMap,
    Frame,
    Trace,
    TraceParseError,
    add_traceback_path,
    build_trace,
    deserialize_trace,
    frame_snapshot,
    segment,
    serialize_trace,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "ColorMap",
    "DEFAULT_COLORS",
    "DPArray",
    "EvaluationOrderError",
    "Frame",
    "OpKind",
    "OpRecord",
    "Question",
    "QuestionKind",
    "SessionState",
    "StaleQuestionError",
    "Term",
    "Trace",
    "TraceParseError",
    "TraceServer",
    "Verdict",
    "WriteConflictError",
    "add_traceback_path",
    "build_trace",
    "check_answer",
    "deserialize_trace",
    "display",
    "export_static",
    "frame_snapshot",
    "questions_for_frame",
    "segment",
    "serialize_trace",
    "serve",
    "start_session",
    "submit",
    "__version__",
]
