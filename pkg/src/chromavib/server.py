"""HTTP surface for running an experiment session in a browser.

Endpoints (all JSON bodies; errors are 4xx with {"error", "detail"}):

    GET  /api/session      config + schedule metadata, answered indices
    GET  /api/trial/{i}    stimulus payload for trial i
    POST /api/response     {trial_index, detected, response_ms[, achieved_hz]} -> 204
    GET  /api/report       analysis JSON (409 until the session completes)

Anything else is served as a static file from the UI directory, if one was
given.  Requests are handled on separate threads; response appends are
serialized through a single writer lock so the JSONL store stays consistent.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .psychometrics import NoCatchTrials, make_report
from .session import (
    DuplicateResponse,
    IncompleteSession,
    IndexOutOfRange,
    Schedule,
    SessionStore,
    analyze_session,
)


@dataclass
class ServerContext:
    schedule: Schedule
    store: SessionStore
    px_per_cm: float | None = None
    ui_dir: Path | None = None
    lock: threading.Lock = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.lock is None:
            self.lock = threading.Lock()

    @property
    def square_px(self) -> int | None:
        if self.px_per_cm is None:
            return None
        return round(self.schedule.square_cm * self.px_per_cm)


def _session_payload(ctx: ServerContext) -> dict:
    rec = ctx.store.record
    return {
        "schema_version": 1,
        "participant_label": rec.participant_label,
        "n_trials": ctx.schedule.n_trials,
        "seed": ctx.schedule.seed,
        "config_hash": rec.config_hash,
        "alternation_hz": ctx.schedule.alternation_hz,
        "square_cm": ctx.schedule.square_cm,
        "distance_cm": ctx.schedule.distance_cm,
        "px_per_cm": ctx.px_per_cm,
        "square_px": ctx.square_px,
        "answered": sorted(rec.answered),
        "completed": rec.completed,
    }


def _trial_payload(ctx: ServerContext, index: int) -> dict:
    t = ctx.schedule.trials[index]
    d = {
        "trial_index": t.index,
        "kind": t.kind,
        "break_after": t.break_after,
        "alternation_hz": ctx.schedule.alternation_hz,
        "square_px": ctx.square_px,
        "n_trials": ctx.schedule.n_trials,
    }
    if t.kind == "vibration":
        d["plus"] = list(t.pair.plus_srgb.codes())
        d["minus"] = list(t.pair.minus_srgb.codes())
    else:
        d["catch"] = list(t.catch_color.codes())
    return d


class _Handler(BaseHTTPRequestHandler):
    ctx: ServerContext  # injected by make_server
    quiet = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    # -- helpers ---------------------------------------------------------

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, error: str, detail: str) -> None:
        self._send_json(status, {"error": error, "detail": detail})

    def _read_body(self) -> dict | None:
        try:
            length = int(self.headers.get("Content-Length", 0))
            return json.loads(self.rfile.read(length) or b"{}")
        except (ValueError, json.JSONDecodeError):
            return None

    # -- routes ----------------------------------------------------------

    def do_GET(self):
        ctx = self.ctx
        path = self.path.split("?", 1)[0]
        if path == "/api/session":
            return self._send_json(200, _session_payload(ctx))
        if path.startswith("/api/trial/"):
            tail = path.rsplit("/", 1)[-1]
            if not tail.isdigit() or int(tail) >= ctx.schedule.n_trials:
                return self._send_error_json(404, "index_out_of_range", f"no trial {tail}")
            return self._send_json(200, _trial_payload(ctx, int(tail)))
        if path == "/api/report":
            try:
                with ctx.lock:
                    curve, catch = analyze_session(ctx.store.record, ctx.schedule)
            except IncompleteSession as e:
                return self._send_error_json(409, "incomplete_session", str(e))
            except NoCatchTrials as e:
                return self._send_error_json(409, "no_catch_trials", str(e))
            return self._send_json(200, make_report(curve, catch))
        if path.startswith("/api/"):
            return self._send_error_json(404, "not_found", path)
        return self._serve_static(path)

    def do_POST(self):
        ctx = self.ctx
        if self.path.split("?", 1)[0] != "/api/response":
            return self._send_error_json(404, "not_found", self.path)
        body = self._read_body()
        if body is None or not isinstance(body, dict):
            return self._send_error_json(400, "bad_request", "malformed JSON body")
        try:
            trial_index = int(body["trial_index"])
            detected = bool(body["detected"])
            response_ms = int(body.get("response_ms", 0))
        except (KeyError, TypeError, ValueError) as e:
            return self._send_error_json(400, "bad_request", f"missing/invalid field: {e}")
        achieved = body.get("achieved_hz")
        achieved = float(achieved) if achieved is not None else None
        try:
            with ctx.lock:
                ctx.store.append(trial_index, detected, response_ms, achieved)
        except IndexOutOfRange as e:
            return self._send_error_json(404, "index_out_of_range", str(e))
        except DuplicateResponse as e:
            return self._send_error_json(409, "duplicate_response", str(e))
        self.send_response(204)
        self.end_headers()

    # -- static UI ---------------------------------------------------------

    def _serve_static(self, path: str) -> None:
        if self.ctx.ui_dir is None:
            return self._send_error_json(404, "not_found", "no UI directory configured")
        rel = path.lstrip("/") or "index.html"
        root = self.ctx.ui_dir.resolve()
        target = (root / rel).resolve()
        if root not in target.parents and target != root:
            return self._send_error_json(404, "not_found", path)
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            return self._send_error_json(404, "not_found", path)
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    ctx: ServerContext, host: str = "127.0.0.1", port: int = 0
) -> ThreadingHTTPServer:
    """Build (but don't start) the threaded HTTP server; port 0 picks a free one."""
    handler = type("BoundHandler", (_Handler,), {"ctx": ctx})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(ctx: ServerContext, host: str, port: int) -> None:
    httpd = make_server(ctx, host, port)
    addr = httpd.server_address
    print(f"serving on http://{addr[0]}:{addr[1]}/  (Ctrl-C to stop)", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
