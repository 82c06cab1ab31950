"""HTTP facade over the session and report operations.

Every endpoint is a thin adapter over exactly one library call. The model
database is shared read-only; sessions live in memory with an idle TTL and
are serialized per session; finalized reports are persisted as canonical
JSON under the database directory.
"""

from __future__ import annotations

import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import report as report_mod
from . import session as session_mod
from .errors import (
    EmptySession,
    EmptyTitle,
    GuiflowError,
    NoSteps,
    NotSuggested,
    SessionClosed,
    UnknownComponent,
    UnknownVariant,
)
from .modeldb import ModelDb
from .ripper import Target, Terminal
from .simulator import Fingerprint

_SHOT_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+\.ppm$")


@dataclass
class ServiceConfig:
    db_dir: Path
    bind_address: str = "127.0.0.1:8600"
    session_ttl_seconds: int = 3600

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.bind_address.rpartition(":")
        return host or "127.0.0.1", int(port)


class _Entry:
    def __init__(self, session, deadline: float):
        self.session = session
        self.deadline = deadline
        self.lock = threading.Lock()


@dataclass
class SessionStore:
    ttl: float
    clock: callable = time.monotonic
    entries: dict[str, _Entry] = field(default_factory=dict)
    expired: set[str] = field(default_factory=set)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def add(self, session) -> None:
        with self._lock:
            self.entries[session.session_id] = _Entry(session, self.clock() + self.ttl)

    def get(self, session_id: str) -> _Entry:
        """Fetch a live entry, refreshing its deadline; raises ApiError."""
        with self._lock:
            entry = self.entries.get(session_id)
            if entry is None:
                if session_id in self.expired:
                    raise ApiError(410, "session expired")
                raise ApiError(404, "unknown session")
            if self.clock() > entry.deadline:
                del self.entries[session_id]
                self.expired.add(session_id)
                raise ApiError(410, "session expired")
            entry.deadline = self.clock() + self.ttl
            return entry


class ApiError(Exception):
    def __init__(self, status: int, detail: str):
        self.status = status
        self.detail = detail
        super().__init__(detail)


def _http_status(exc: GuiflowError) -> int:
    if isinstance(exc, (NotSuggested, UnknownVariant, UnknownComponent)):
        return 404
    if isinstance(exc, (EmptyTitle, NoSteps)):
        return 400
    if isinstance(exc, EmptySession):
        return 409
    if isinstance(exc, SessionClosed):
        return 410
    return 400


def _target_json(target: Target) -> dict:
    if isinstance(target, Terminal):
        out = {"kind": target.kind}
        if target.message is not None:
            out["message"] = target.message
        return out
    return {"kind": "state", "state": target.short_id}


class OpenSessionBody(BaseModel):
    assume_launch: bool = False


class StepBody(BaseModel):
    component: str
    action: str
    source_state: str


class FallbackBody(BaseModel):
    activity: str
    component: str
    action: str


class FinalizeBody(BaseModel):
    title: str
    description: str = ""


def create_app(db: ModelDb, session_ttl_seconds: float = 3600.0,
               clock=time.monotonic) -> FastAPI:
    app = FastAPI(title="guiflow", docs_url=None, redoc_url=None)
    store = SessionStore(ttl=session_ttl_seconds, clock=clock)
    by_short_id: dict[str, Fingerprint] = {fp.short_id: fp for fp in db.graph.states.values()}

    reports_dir = db.db_dir / "reports"
    reports: dict[str, bytes] = {}
    for path in sorted(reports_dir.glob("report_*.json")) if reports_dir.is_dir() else []:
        loaded = report_mod.import_json(path.read_bytes())
        reports[loaded.report_id] = report_mod.export_json(loaded)

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"detail": exc.detail})

    @app.exception_handler(GuiflowError)
    async def _domain_error(_req: Request, exc: GuiflowError):
        return JSONResponse(status_code=_http_status(exc), content={"detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _malformed(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": "malformed request body"})

    def _session_state(session) -> dict:
        return {"estimate_size": len(session.estimate), "degraded": session.degraded}

    def _variant_json(variant: session_mod.Variant) -> dict:
        name = Path(variant.contextual_screenshot).name
        return {
            "source_state": variant.source_state.short_id,
            "target": _target_json(variant.target),
            "screenshot_url": f"/screenshots/{name}",
        }

    @app.get("/app")
    def app_info():
        return {
            "app_id": db.app_id,
            "version": db.version,
            "states": len(db.graph.states),
            "edges": len(db.graph.edges),
        }

    @app.post("/sessions", status_code=201)
    def open_session(body: OpenSessionBody):
        session = session_mod.open_session(db, assume_launch=body.assume_launch)
        store.add(session)
        return {"session_id": session.session_id, **_session_state(session)}

    @app.get("/sessions/{session_id}/suggestions")
    def get_suggestions(session_id: str):
        entry = store.get(session_id)
        with entry.lock:
            items = session_mod.suggestions(entry.session)
        return [
            {
                "component": s.component,
                "activity": s.activity,
                "action": s.action,
                "variants": [_variant_json(v) for v in s.variants],
            }
            for s in items
        ]

    @app.post("/sessions/{session_id}/steps")
    def post_step(session_id: str, body: StepBody):
        entry = store.get(session_id)
        source = by_short_id.get(body.source_state)
        if source is None:
            raise ApiError(404, f"unknown state {body.source_state!r}")
        with entry.lock:
            session_mod.confirm_step(entry.session, body.component, body.action, source)
            return _session_state(entry.session)

    @app.post("/sessions/{session_id}/fallback-steps")
    def post_fallback(session_id: str, body: FallbackBody):
        entry = store.get(session_id)
        with entry.lock:
            session_mod.fallback_step(entry.session, body.activity, body.component, body.action)
            return _session_state(entry.session)

    @app.delete("/sessions/{session_id}/steps/last")
    def delete_last_step(session_id: str):
        entry = store.get(session_id)
        with entry.lock:
            session_mod.undo_step(entry.session)
            return _session_state(entry.session)

    @app.post("/sessions/{session_id}/finalize", status_code=201)
    def finalize(session_id: str, body: FinalizeBody):
        entry = store.get(session_id)
        with entry.lock:
            report = session_mod.finalize(entry.session, body.title, body.description)
        data = report_mod.export_json(report)
        reports[report.report_id] = data
        reports_dir.mkdir(parents=True, exist_ok=True)
        (reports_dir / f"report_{report.report_id}.json").write_bytes(data)
        return {"report_id": report.report_id}

    def _report_bytes(report_id: str) -> bytes:
        data = reports.get(report_id)
        if data is None:
            raise ApiError(404, "unknown report")
        return data

    @app.get("/reports/{report_id}")
    def get_report(report_id: str):
        return Response(content=_report_bytes(report_id), media_type="application/json")

    @app.get("/reports/{report_id}/markdown")
    def get_report_markdown(report_id: str):
        report = report_mod.import_json(_report_bytes(report_id))
        return Response(content=report_mod.export_markdown(report), media_type="text/markdown")

    @app.get("/screenshots/{name}")
    def get_screenshot(name: str):
        if not _SHOT_NAME_RE.match(name):
            raise ApiError(400, "malformed screenshot name")
        path = db.db_dir / "shots" / name
        if not path.is_file():
            raise ApiError(404, "unknown screenshot")
        return Response(content=path.read_bytes(), media_type="image/x-portable-pixmap")

    return app


def serve(config: ServiceConfig) -> None:
    """Load the database and run the HTTP service until terminated."""
    import uvicorn

    from .modeldb import load

    db = load(config.db_dir)
    app = create_app(db, session_ttl_seconds=config.session_ttl_seconds)
    host, port = config.host_port()
    uvicorn.run(app, host=host, port=port, log_level="warning")
