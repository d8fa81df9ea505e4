"""HTTP/JSON service: read-only trace viewing plus server-side quiz sessions.

Ground truths never leave the server while a question is pending: session
responses redact them, and while any session is active the viewing endpoints
blank out every frame the slowest session has not reached yet. Sessions are
kept in memory, keyed by an opaque token, and expire after an idle timeout.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import quiz
from .export import render_page
from .quiz import Answer, Question, QuestionKind, SessionState, StaleQuestionError
from .trace import Trace, _empty_grid, _json_num, dumps_doc, frame_to_doc, frame_snapshot, trace_to_doc

DEFAULT_PORT = 8050
PORT_ENV_VAR = "DPKIT_PORT"
DEFAULT_SESSION_TIMEOUT = 60 * 60.0


def resolve_port(port: int | None = None) -> int:
    """Explicit port, else the DPKIT_PORT environment variable, else 8050."""
    if port is not None:
        return int(port)
    env = os.environ.get(PORT_ENV_VAR)
    return int(env) if env else DEFAULT_PORT


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _snapshot_doc(grid) -> list:
    if grid and isinstance(grid[0], list):
        return [[None if v is None else _json_num(v) for v in row] for row in grid]
    return [None if v is None else _json_num(v) for v in grid]


def _redacted_frame_doc(t: int) -> dict:
    return {
        "t": t,
        "ops": [],
        "written": [],
        "read": [],
        "maxmin": [],
        "deltas": [],
        "terminal": False,
        "redacted": True,
    }


@dataclass
class _Session:
    state: SessionState
    ids: dict[str, Question]
    last_access: float


def _ids_for(state: SessionState) -> dict[str, Question]:
    ids: dict[str, Question] = {}
    ordinal = 0
    for q in state.pending:
        if q.kind is QuestionKind.CELL_VALUE:
            ids[f"{q.t}:CELL_VALUE:{ordinal}"] = q
            ordinal += 1
        else:
            ids[f"{q.t}:{q.kind.value}"] = q
    return ids


def _question_doc(qid: str, q: Question, pending: tuple[Question, ...]) -> dict:
    doc = {"id": qid, "kind": q.kind.value, "t": q.t}
    if q.kind is QuestionKind.CELL_VALUE:
        # the target IS the answer to the frame's write question; hide it
        # until that question is out of the way
        write_pending = any(p.kind is QuestionKind.WRITE_CELLS and p.t == q.t for p in pending)
        doc["index"] = None if write_pending else list(q.target)
    return doc


def _parse_answer(q: Question, payload: dict) -> Answer:
    if q.kind is QuestionKind.CELL_VALUE:
        value = payload.get("value")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ApiError(400, "a CELL_VALUE question takes {'value': number}")
        return Answer.of_value(value)
    cells = payload.get("cells")
    if not isinstance(cells, list) or "value" in payload:
        raise ApiError(400, f"a {q.kind.value} question takes {{'cells': [[i, ...], ...]}}")
    normalized = []
    for cell in cells:
        if isinstance(cell, int) and not isinstance(cell, bool):
            cell = [cell]
        if not isinstance(cell, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in cell):
            raise ApiError(400, f"cells entries must be index arrays, got {cell!r}")
        normalized.append(tuple(cell))
    return Answer.of_cells(normalized)


class SessionStore:
    """Thread-safe session table; per-session mutations run under one lock."""

    def __init__(self, trace: Trace, timeout: float = DEFAULT_SESSION_TIMEOUT):
        self._trace = trace
        self._timeout = timeout
        self._lock = threading.Lock()
        self._sessions: dict[str, _Session] = {}

    def _purge(self, now: float) -> None:
        dead = [sid for sid, s in self._sessions.items() if now - s.last_access > self._timeout]
        for sid in dead:
            del self._sessions[sid]

    def _session_doc(self, sid: str, session: _Session) -> dict:
        state = session.state
        return {
            "session": sid,
            "t": state.t,
            "complete": state.complete,
            "mistakes": state.mistakes,
            "questions": [
                _question_doc(qid, q, state.pending)
                for qid, q in session.ids.items()
                if q in state.pending
            ],
        }

    def create(self, enabled_names, start_t) -> dict:
        if enabled_names is None:
            enabled = frozenset(QuestionKind)
        else:
            if not isinstance(enabled_names, list) or not enabled_names:
                raise ApiError(400, "enabled must be a non-empty list of question kinds")
            try:
                enabled = frozenset(QuestionKind(name) for name in enabled_names)
            except ValueError:
                raise ApiError(400, f"unknown question kind in {enabled_names!r}")
        if start_t is None:
            start_t = 1
        if isinstance(start_t, bool) or not isinstance(start_t, int):
            raise ApiError(400, "start_t must be an integer frame number")
        try:
            state = quiz.start_session(self._trace, enabled, start_t)
        except IndexError as err:
            raise ApiError(400, str(err))
        sid = secrets.token_hex(16)
        now = time.monotonic()
        with self._lock:
            self._purge(now)
            session = _Session(state=state, ids=_ids_for(state), last_access=now)
            self._sessions[sid] = session
            return self._session_doc(sid, session)

    def answer(self, sid: str, payload: dict) -> dict:
        if not isinstance(payload, dict):
            raise ApiError(400, "expected a JSON object body")
        qid = payload.get("question_id")
        now = time.monotonic()
        with self._lock:
            self._purge(now)
            session = self._sessions.get(sid)
            if session is None:
                raise ApiError(404, "unknown session")
            session.last_access = now
            question = session.ids.get(qid) if isinstance(qid, str) else None
            if question is None or question not in session.state.pending:
                raise ApiError(409, f"question {qid!r} is not pending in this session")
            answer = _parse_answer(question, payload)
            before_t = session.state.t
            try:
                session.state = quiz.submit(session.state, question, answer)
            except StaleQuestionError as err:
                raise ApiError(409, str(err))
            if session.state.t != before_t:
                session.ids = _ids_for(session.state)
            verdict = session.state.history[-1][1]
            doc = self._session_doc(sid, session)
            doc.update(
                {
                    "correct": verdict.correct,
                    "advanced": session.state.t != before_t,
                    # missing cells are ground truth; report only how many
                    "missing": len(verdict.missing),
                    "extra": [list(idx) for idx in sorted(verdict.extra)],
                    "message": verdict.message,
                }
            )
            return doc

    def min_active_t(self) -> int | None:
        """Smallest frame any live session still has to predict, or None."""
        now = time.monotonic()
        with self._lock:
            self._purge(now)
            pending = [s.state.t for s in self._sessions.values() if not s.state.complete]
            return min(pending) if pending else None


class TraceServer(ThreadingHTTPServer):
    """Serves one immutable trace plus quiz sessions over it."""

    daemon_threads = True

    def __init__(
        self,
        trace: Trace,
        host: str = "127.0.0.1",
        port: int | None = None,
        ui_dir=None,
        session_timeout: float = DEFAULT_SESSION_TIMEOUT,
    ):
        self.trace = trace
        self.store = SessionStore(trace, timeout=session_timeout)
        self.ui_dir = Path(ui_dir) if ui_dir else None
        super().__init__((host, resolve_port(port)), _Handler)

    @property
    def port(self) -> int:
        return self.server_address[1]

    @property
    def url(self) -> str:
        host = self.server_address[0]
        return f"http://{host}:{self.port}/"

    # -- documents, with testing-mode redaction ------------------------------

    def trace_doc(self) -> dict:
        doc = trace_to_doc(self.trace)
        guard = self.store.min_active_t()
        if guard is not None:
            doc["frames"] = [
                frame_doc if frame_doc["t"] < guard else _redacted_frame_doc(frame_doc["t"])
                for frame_doc in doc["frames"]
            ]
            doc.pop("traceback", None)
        return doc

    def frame_doc(self, t: int) -> dict:
        frames = self.trace.frames
        if not 1 <= t <= len(frames):
            raise ApiError(404, f"frame {t} out of range 1..{len(frames)}")
        guard = self.store.min_active_t()
        if guard is not None and t >= guard:
            shown = guard - 1
            snapshot = frame_snapshot(self.trace, shown) if shown >= 1 else _empty_grid(self.trace.shape)
            return {"frame": _redacted_frame_doc(t), "snapshot": _snapshot_doc(snapshot)}
        return {
            "frame": frame_to_doc(frames[t - 1]),
            "snapshot": _snapshot_doc(frame_snapshot(self.trace, t)),
        }


class _Handler(BaseHTTPRequestHandler):
    server: TraceServer

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, doc) -> None:
        self._send(status, dumps_doc(doc), "application/json")

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            return json.loads(raw.decode("utf-8") or "null")
        except (json.JSONDecodeError, UnicodeDecodeError):
            raise ApiError(400, "request body must be valid JSON")

    def _serve_ui(self, path: str) -> None:
        ui_dir = self.server.ui_dir
        if ui_dir is None:
            self._send(200, render_page(dumps_doc(self.server.trace_doc())), "text/html; charset=utf-8")
            return
        name = path.lstrip("/") or "index.html"
        target = (ui_dir / name).resolve()
        if not target.is_relative_to(ui_dir.resolve()) or not target.is_file():
            self._send_json(404, {"error": f"no such file {name!r}"})
            return
        types = {".html": "text/html; charset=utf-8", ".js": "text/javascript", ".css": "text/css",
                 ".json": "application/json", ".map": "application/json", ".svg": "image/svg+xml"}
        self._send(200, target.read_bytes(), types.get(target.suffix, "application/octet-stream"))

    def do_GET(self):  # noqa: N802 - stdlib casing
        try:
            path = self.path.split("?", 1)[0]
            if path == "/healthz":
                self._send(200, b"ok", "text/plain")
            elif path == "/api/trace":
                self._send_json(200, self.server.trace_doc())
            elif path.startswith("/api/frames/"):
                raw = path.removeprefix("/api/frames/")
                try:
                    t = int(raw)
                except ValueError:
                    raise ApiError(404, f"frame number {raw!r} is not an integer")
                self._send_json(200, self.server.frame_doc(t))
            elif path.startswith("/api/"):
                raise ApiError(404, f"no such endpoint {path}")
            else:
                self._serve_ui(path)
        except ApiError as err:
            self._send_json(err.status, {"error": err.message})

    def do_POST(self):  # noqa: N802 - stdlib casing
        try:
            path = self.path.split("?", 1)[0]
            if path == "/api/sessions":
                payload = self._read_json()
                if not isinstance(payload, dict):
                    raise ApiError(400, "expected a JSON object body")
                doc = self.server.store.create(payload.get("enabled"), payload.get("start_t"))
                self._send_json(201, doc)
            elif path.startswith("/api/sessions/") and path.endswith("/answers"):
                sid = path.removeprefix("/api/sessions/").removesuffix("/answers").strip("/")
                doc = self.server.store.answer(sid, self._read_json())
                self._send_json(200, doc)
            else:
                raise ApiError(404, f"no such endpoint {path}")
        except ApiError as err:
            self._send_json(err.status, {"error": err.message})


def serve(trace: Trace, host: str = "127.0.0.1", port: int | None = None, ui_dir=None) -> TraceServer:
    """Start a server for ``trace`` on a background thread and return it.

    The handle exposes ``.url``, ``.port``, and ``.shutdown()``.
    """
    server = TraceServer(trace, host=host, port=port, ui_dir=ui_dir)
    thread = threading.Thread(
        target=lambda: server.serve_forever(poll_interval=0.05), name="dpkit-server", daemon=True
    )
    thread.start()
    return server


def display(arr, labels=None, annotations=None, colors=None, host: str = "127.0.0.1", port: int | None = None):
    """Build a trace from a finished recording and serve it until interrupted."""
    from .trace import build_trace

    trace = build_trace(arr, labels=labels, annotations=annotations, colors=colors)
    server = TraceServer(trace, host=host, port=port)
    print(f"dpkit viewer at {server.url}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
