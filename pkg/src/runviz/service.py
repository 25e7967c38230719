"""HTTP session service.

Stateless-client API over the engine: a session holds one run table, the
current encoding, the selected tasks, and the dashboard document, all
in-memory. Sessions expire after an idle hour (configurable). No auth; this
is a desk-scale analysis tool, not a hosted product.

Endpoints
    POST   /session                          ingest CSV (+ sidecar), returns id + dimension summary
    GET    /session/{id}/overview            applicable options, SMD layouts, per-cell specs, data
    PUT    /session/{id}/encoding            replace the encoding state, returns the new overview
    PUT    /session/{id}/tasks               select tasks, returns the recommendation set
    PUT    /session/{id}/filters             delta-update filters, returns refreshed view payloads
    PUT    /session/{id}/mode                edit/analyze switch
    POST   /session/{id}/dashboard/views     place a view (cell copy or external spec)
    PATCH  /session/{id}/dashboard/views/{v} move/resize (rect) or edit attributes
    DELETE /session/{id}/dashboard/views/{v} remove a view
    GET    /session/{id}/dashboard/export    the full dashboard document
    GET    /healthz                          readiness probe

Errors come back as {"code", "message"} with a 4xx status. Responses never
echo the session id, so identical session state yields byte-identical bodies.
"""

from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analytics, dashboard as dash, data_model, design_space, layout as smd, visrec
from .data_model import IngestOptions, RunTable, UnknownDimension
from .design_space import EncodingState, OPTIONS, VisOptionId
from .errors import EngineError

SESSION_TTL_DEFAULT = 3600.0

PORT_ENV = "RSVP_PORT"
MAX_RUNS_ENV = "RSVP_MAX_RUNS"


class UnknownSession(EngineError):
    def __init__(self, session_id: str):
        super().__init__(f"unknown or expired session: {session_id!r}")


class BadRequest(EngineError):
    pass


@dataclass
class Session:
    table: RunTable
    encoding: EncodingState = dc_field(default_factory=EncodingState)
    tasks: tuple[visrec.TaskId, ...] = ()
    doc: dash.DashboardDoc = dc_field(default_factory=dash.DashboardDoc)
    last_access: float = 0.0


class SessionStore:
    """In-memory session map with idle expiry, safe under the server's
    thread pool."""

    def __init__(self, ttl: float = SESSION_TTL_DEFAULT, clock=time.monotonic):
        self._ttl = ttl
        self._clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def create(self, table: RunTable) -> str:
        session_id = uuid.uuid4().hex
        with self._lock:
            self._purge()
            self._sessions[session_id] = Session(table=table, last_access=self._clock())
        return session_id

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(session_id)
            session.last_access = self._clock()
            return session

    def _purge(self) -> None:
        now = self._clock()
        dead = [k for k, s in self._sessions.items() if now - s.last_access > self._ttl]
        for k in dead:
            del self._sessions[k]


def env_max_runs(default: int = data_model.MAX_RUNS_DEFAULT) -> int:
    raw = os.environ.get(MAX_RUNS_ENV)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise BadRequest(f"{MAX_RUNS_ENV} must be an integer, got {raw!r}") from None


def env_port(default: int = 8000) -> int:
    raw = os.environ.get(PORT_ENV)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise BadRequest(f"{PORT_ENV} must be an integer, got {raw!r}") from None


def _require(body, key, kind, optional=False):
    if key not in body:
        if optional:
            return None
        raise BadRequest(f"request body is missing {key!r}")
    value = body[key]
    if kind is not None and not isinstance(value, kind):
        raise BadRequest(f"{key!r} has the wrong type")
    return value


def _overview_payload(session: Session) -> dict:
    table = session.table
    enc = session.encoding
    options = design_space.applicable_options(enc, table)
    layouts = {}
    singles = {}
    for opt in options:
        if opt.has_smd:
            grid = smd.layout_smd(opt, enc)
            entry = grid.to_json_dict()
            entry["cells"] = [
                [
                    dict(cell.to_json_dict(), spec=dash.vis_spec(cell, table))
                    for cell in row
                ]
                for row in grid.cells
            ]
            layouts[opt.id.value] = entry
        elif opt.id is VisOptionId.HIST:
            cell = smd.single_chart_cell(opt.id, enc)
            singles[opt.id.value] = dict(
                cell.to_json_dict(), spec=dash.vis_spec(cell, table)
            )
        else:
            objects = design_space.object_dims_by_kind(enc, table)
            want = (
                data_model.Dtype.SERIES_1D
                if OPTIONS[opt.id].category is design_space.Category.COMPLEX_1D
                else data_model.Dtype.IMAGE_REF_2D
            )
            cell = smd.single_chart_cell(opt.id, enc, object_dim=objects[want])
            singles[opt.id.value] = dict(
                cell.to_json_dict(), spec=dash.vis_spec(cell, table)
            )

    quant_dims = list(enc.s1 + enc.s2 + enc.color + enc.opacity)
    columns = {d: [float(v) for v in table.values(d)] for d in quant_dims}
    objects_data = {}
    for name in enc.object:
        dim = table.dimension(name)
        if dim.dtype is data_model.Dtype.SERIES_1D:
            objects_data[name] = [[float(v) for v in row] for row in table.values(name)]
        else:
            objects_data[name] = list(table.values(name))

    f = session.doc.filter_state
    result = analytics.apply_filters(table, f)
    preselect = result.pass_ids()[: dash.PRESELECT_COUNT_DEFAULT]
    return {
        "encoding": enc.to_json_dict(),
        "options": [o.id.value for o in options],
        "layouts": layouts,
        "singles": singles,
        "data": {"columns": columns, "objects": objects_data, "run_count": table.run_count},
        "highlights": {"selected": f.selected_run, "preselected": preselect},
    }


def _doc_payload(session: Session) -> dict:
    return session.doc.to_json_dict()


def create_app(
    max_runs: int | None = None,
    session_ttl: float = SESSION_TTL_DEFAULT,
    clock=time.monotonic,
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="runviz", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl=session_ttl, clock=clock)
    app.state.store = store
    limit = max_runs if max_runs is not None else env_max_runs()

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        status = 404 if isinstance(exc, UnknownSession) else 400
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/session", status_code=201)
    async def create_session(request: Request):
        body = await _json_body(request)
        csv_text = _require(body, "csv", str)
        table = data_model.load_csv(csv_text, IngestOptions(max_runs=limit))
        sidecar = _require(body, "sidecar", dict, optional=True)
        if sidecar is not None:
            table = data_model.apply_sidecar(table, sidecar)
        session_id = store.create(table)
        return {
            "id": session_id,
            "table_id": table.table_id,
            "run_count": table.run_count,
            "dimensions": [d.to_json_dict() for d in table.dimensions],
        }

    @app.get("/session/{session_id}/overview")
    def overview(session_id: str):
        return _overview_payload(store.get(session_id))

    @app.put("/session/{session_id}/encoding")
    async def put_encoding(session_id: str, request: Request):
        session = store.get(session_id)
        body = await _json_body(request)
        enc = EncodingState.from_json_dict(body)
        design_space.validate_encoding(enc, session.table)
        session.encoding = enc
        return _overview_payload(session)

    @app.put("/session/{session_id}/tasks")
    async def put_tasks(session_id: str, request: Request):
        session = store.get(session_id)
        body = await _json_body(request)
        tasks = _require(body, "tasks", list)
        rec = visrec.recommend(tasks, session.encoding, session.table)
        session.tasks = tuple(t.id for t in rec.tasks)
        return rec.to_json_dict()

    @app.put("/session/{session_id}/filters")
    async def put_filters(session_id: str, request: Request):
        session = store.get(session_id)
        body = await _json_body(request)
        f = session.doc.filter_state
        if body.get("clear") is True:
            f = analytics.FilterState()
        ranges = _require(body, "ranges", dict, optional=True) or {}
        for name, pair in ranges.items():
            if pair is None:
                f = f.without_range(name)
                continue
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise BadRequest(f"range for {name!r} must be [lo, hi] or null")
            f = f.with_range(name, pair[0], pair[1])
        if "selected_run" in body:
            f = analytics.select_run(session.table, f, body["selected_run"])
        session.doc = dash.set_filters(session.doc, session.table, f)
        result = analytics.apply_filters(session.table, f)
        return {
            "pass_count": result.pass_count,
            "pass": result.pass_ids(),
            "views": dash.emit_specs(session.doc, session.table),
        }

    @app.put("/session/{session_id}/mode")
    async def put_mode(session_id: str, request: Request):
        session = store.get(session_id)
        body = await _json_body(request)
        session.doc = dash.set_mode(session.doc, _require(body, "mode", str))
        return {"mode": session.doc.mode.value}

    @app.post("/session/{session_id}/dashboard/views", status_code=201)
    async def post_view(session_id: str, request: Request):
        session = store.get(session_id)
        body = await _json_body(request)
        rect = None
        if body.get("rect") is not None:
            rect = dash.Rect.from_json_dict(body["rect"])
        if body.get("external") is not None:
            session.doc = dash.add_external_view(
                session.doc, session.table, body["external"], rect=rect
            )
        else:
            cell = dash._cell_from_json(_require(body, "cell", dict))
            session.doc = dash.add_view(session.doc, session.table, cell, rect=rect)
        return _doc_payload(session)

    @app.patch("/session/{session_id}/dashboard/views/{view_id}")
    async def patch_view(session_id: str, view_id: int, request: Request):
        session = store.get(session_id)
        body = await _json_body(request)
        if "rect" in body:
            if len(body) != 1:
                raise BadRequest("rect moves cannot be combined with attribute edits")
            session.doc = dash.move_resize(session.doc, session.table, view_id, body["rect"])
        else:
            session.doc = dash.edit_attributes(session.doc, session.table, view_id, body)
        return _doc_payload(session)

    @app.delete("/session/{session_id}/dashboard/views/{view_id}")
    def delete_view(session_id: str, view_id: int):
        session = store.get(session_id)
        session.doc = dash.edit_attributes(
            session.doc, session.table, view_id, {"remove": True}
        )
        return _doc_payload(session)

    @app.get("/session/{session_id}/dashboard/export")
    def export_dashboard(session_id: str):
        return _doc_payload(store.get(session_id))

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise BadRequest("request body must be valid JSON") from None
    if not isinstance(body, dict):
        raise BadRequest("request body must be a JSON object")
    return body
