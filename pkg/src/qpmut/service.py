"""HTTP session service exposing the workbench over JSON.

Endpoints (all JSON; trailing slashes are not significant):

* ``POST /sessions`` with a QP document creates a session (malformed
  documents give 400 with the parse position).
* ``GET /sessions/{id}`` returns the session: current QP, applied steps,
  undo depth.
* ``POST /sessions/{id}/mutations`` with ``{"vertex": v, "direction": d}``
  mutates in place; a violated precondition gives 409 and leaves the state
  unchanged.
* ``POST /sessions/{id}/undo`` reverts the last mutation (409 when there is
  nothing to undo).
* ``GET /sessions/{id}/invariants`` computes acyclicity, weight, cycle-class
  membership, Coxeter polynomial, and AR-component counts; each field is
  null when its computation fails, with the reason under ``notes``.
* ``DELETE /sessions/{id}`` drops the session (204).

Sessions live in memory; ``persist_dir`` additionally mirrors every session
to one JSON file per id, reloaded on startup.  Mutation history (for undo)
is bounded at 1000 entries per session — older entries fall off.  Set the
``QPMUT_LOG`` environment variable to a level name (debug, info, ...) to see
request logging.  ``allow_origin`` adds CORS headers for browser clients.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import uuid
from collections import deque
from dataclasses import asdict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .algebra import coxeter_polynomial, degree_zero_part
from .core import GradedQP
from .errors import ParseError, QPError
from .interchange import qp_from_doc, qp_to_doc
from .invariants import ar_summary, weight_structural, weight_via_mutation
from .mutation import mutate
from .shape import matilde_decompositions

HISTORY_BOUND = 1000

log = logging.getLogger("qpmut.service")


def _configure_logging() -> None:
    level_name = os.environ.get("QPMUT_LOG")
    if level_name:
        logging.basicConfig(level=getattr(logging, level_name.upper(), logging.INFO))


class Session:
    """One mutable QP with bounded undo history and cached invariants."""

    __slots__ = ("id", "current", "past", "steps", "lock", "_invariants")

    def __init__(self, sid: str, qp: GradedQP):
        self.id = sid
        self.current = qp
        self.past: deque[GradedQP] = deque(maxlen=HISTORY_BOUND)
        self.steps: deque[dict] = deque(maxlen=HISTORY_BOUND)
        self.lock = threading.Lock()
        self._invariants: dict | None = None

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "qp": qp_to_doc(self.current),
            "history": list(self.steps),
            "undoDepth": len(self.past),
        }

    def snapshot(self) -> dict:
        return {
            "qp": qp_to_doc(self.current),
            "history": list(self.steps),
            "past": [qp_to_doc(q) for q in self.past],
        }

    @classmethod
    def from_snapshot(cls, sid: str, doc: dict) -> "Session":
        session = cls(sid, qp_from_doc(doc["qp"]))
        for past_doc in doc.get("past", []):
            session.past.append(qp_from_doc(past_doc))
        for step in doc.get("history", []):
            session.steps.append(step)
        return session

    def apply(self, vertex: int, direction: str) -> None:
        new = mutate(self.current, vertex, direction)
        self.past.append(self.current)
        self.steps.append({"vertex": vertex, "direction": direction})
        self.current = new
        self._invariants = None

    def undo(self) -> None:
        if not self.past:
            raise QPError("nothing to undo")
        self.current = self.past.pop()
        if self.steps:
            self.steps.pop()
        self._invariants = None

    def invariants(self) -> dict:
        if self._invariants is None:
            self._invariants = _compute_invariants(self.current)
        return self._invariants


def _compute_invariants(qp: GradedQP) -> dict:
    out: dict = {
        "isAcyclic": qp.quiver.is_acyclic(),
        "weight": None,
        "canonicalWeight": None,
        "p": None,
        "q": None,
        "inMAtilde": None,
        "coxeter": None,
        "arSummary": None,
    }
    notes: dict[str, str] = {}
    try:
        decs = matilde_decompositions(qp.quiver)
        out["inMAtilde"] = bool(decs)
        if decs:
            hi, lo = max(decs[0].arm_totals), min(decs[0].arm_totals)
            out["p"], out["q"] = hi, lo
    except QPError as exc:
        notes["inMAtilde"] = str(exc)
    weight = None
    try:
        weight = weight_structural(qp)
    except QPError as exc:
        notes["weight"] = f"structural route: {exc}"
        try:
            weight = weight_via_mutation(qp)
            notes.pop("weight", None)
        except QPError as exc2:
            notes["weight"] += f"; mutation route: {exc2}"
    if weight is not None:
        out["weight"] = weight.weight
        out["canonicalWeight"] = weight.canonical
        out["p"], out["q"] = weight.p, weight.q
        out["arSummary"] = asdict(ar_summary(weight.canonical))
    else:
        notes.setdefault("arSummary", "needs a weight")
    try:
        out["coxeter"] = list(coxeter_polynomial(degree_zero_part(qp)))
    except QPError as exc:
        notes["coxeter"] = str(exc)
    if notes:
        out["notes"] = notes
    return out


class SessionStore:
    """Thread-safe session registry with optional directory persistence."""

    def __init__(self, persist_dir: str | Path | None = None):
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        self.persist_dir = Path(persist_dir) if persist_dir is not None else None
        if self.persist_dir is not None:
            self.persist_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self.persist_dir.glob("*.json")):
                try:
                    doc = json.loads(path.read_text(encoding="utf-8"))
                    sid = path.stem
                    self.sessions[sid] = Session.from_snapshot(sid, doc)
                except (OSError, ValueError, QPError) as exc:
                    log.warning("skipping unreadable session file %s: %s", path, exc)

    def create(self, qp: GradedQP) -> Session:
        sid = uuid.uuid4().hex
        session = Session(sid, qp)
        with self.lock:
            self.sessions[sid] = session
        self.save(session)
        return session

    def get(self, sid: str) -> Session | None:
        with self.lock:
            return self.sessions.get(sid)

    def delete(self, sid: str) -> bool:
        with self.lock:
            existed = self.sessions.pop(sid, None) is not None
        if existed and self.persist_dir is not None:
            try:
                (self.persist_dir / f"{sid}.json").unlink(missing_ok=True)
            except OSError as exc:
                log.warning("could not remove session file for %s: %s", sid, exc)
        return existed

    def save(self, session: Session) -> None:
        if self.persist_dir is None:
            return
        path = self.persist_dir / f"{session.id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(session.snapshot(), sort_keys=True), encoding="utf-8"
        )
        tmp.replace(path)


def make_handler(store: SessionStore, allow_origin: str | None = None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # route through logging, not stderr
            log.info("%s " + fmt, self.address_string(), *args)

        def _send(self, status: int, obj=None) -> None:
            body = b""
            if obj is not None:
                body = json.dumps(obj, sort_keys=True).encode("utf-8")
            self.send_response(status)
            if allow_origin is not None:
                self.send_header("Access-Control-Allow-Origin", allow_origin)
                self.send_header(
                    "Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"
                )
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
            if obj is not None:
                self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            if body:
                self.wfile.write(body)

        def _error(self, status: int, message: str) -> None:
            self._send(status, {"error": message})

        def _read_json(self):
            length = int(self.headers.get("Content-Length", 0) or 0)
            raw = self.rfile.read(length) if length else b""
            if not raw:
                return None
            try:
                return json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ParseError(f"request body is not valid JSON: {exc}") from None

        def _route(self) -> tuple[list[str], Session | None]:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            return parts, None

        # -- methods -------------------------------------------------------

        def do_OPTIONS(self):  # CORS preflight
            self._send(204)

        def do_POST(self):
            parts, _ = self._route()
            try:
                if parts == ["sessions"]:
                    doc = self._read_json()
                    if doc is None:
                        raise ParseError("request body must be a QP document")
                    qp = qp_from_doc(doc)
                    session = store.create(qp)
                    self._send(200, session.to_doc())
                    return
                if len(parts) == 3 and parts[0] == "sessions":
                    session = store.get(parts[1])
                    if session is None:
                        self._error(404, f"no session {parts[1]!r}")
                        return
                    if parts[2] == "mutations":
                        doc = self._read_json()
                        if not isinstance(doc, dict) or "vertex" not in doc:
                            raise ParseError(
                                "mutation body must be an object with 'vertex'"
                            )
                        vertex = doc["vertex"]
                        if not isinstance(vertex, int) or isinstance(vertex, bool):
                            raise ParseError("'vertex' must be an integer")
                        direction = doc.get("direction", "left")
                        with session.lock:
                            try:
                                session.apply(vertex, direction)
                            except QPError as exc:
                                self._send(
                                    409,
                                    {
                                        "error": "mutation rejected",
                                        "violated": str(exc),
                                    },
                                )
                                return
                            store.save(session)
                            self._send(200, session.to_doc())
                        return
                    if parts[2] == "undo":
                        with session.lock:
                            if not session.past:
                                self._send(409, {"error": "nothing to undo"})
                                return
                            session.undo()
                            store.save(session)
                            self._send(200, session.to_doc())
                        return
                self._error(404, "unknown route")
            except ParseError as exc:
                self._error(400, str(exc))
            except QPError as exc:
                self._error(409, str(exc))

        def do_GET(self):
            parts, _ = self._route()
            if len(parts) == 2 and parts[0] == "sessions":
                session = store.get(parts[1])
                if session is None:
                    self._error(404, f"no session {parts[1]!r}")
                    return
                self._send(200, session.to_doc())
                return
            if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "invariants":
                session = store.get(parts[1])
                if session is None:
                    self._error(404, f"no session {parts[1]!r}")
                    return
                with session.lock:
                    self._send(200, session.invariants())
                return
            self._error(404, "unknown route")

        def do_DELETE(self):
            parts, _ = self._route()
            if len(parts) == 2 and parts[0] == "sessions":
                if store.delete(parts[1]):
                    self._send(204)
                else:
                    self._error(404, f"no session {parts[1]!r}")
                return
            self._error(404, "unknown route")

    return Handler


def make_server(
    host: str = "127.0.0.1",
    port: int = 8797,
    persist_dir: str | Path | None = None,
    allow_origin: str | None = None,
) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server; port 0 picks a free port."""
    _configure_logging()
    store = SessionStore(persist_dir)
    return ThreadingHTTPServer((host, port), make_handler(store, allow_origin))


def serve(
    host: str = "127.0.0.1",
    port: int = 8797,
    persist_dir: str | Path | None = None,
    allow_origin: str | None = None,
) -> None:
    """Run the service until interrupted."""
    server = make_server(host, port, persist_dir, allow_origin)
    log.info("serving on %s:%d", *server.server_address[:2])
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
