"""HTTP+JSON facade: datasets, sessions, exploration, bookmarks.

Every response body is an envelope ``{"ok": true, "data": ...}`` or
``{"ok": false, "error": {"code", "message"}}`` with codes drawn from a
closed set. Handlers are synchronous on purpose: they run on the thread
pool, so a long-running continuation does not block other sessions, and
per-session serialization (the busy flag) plus the dataset reader-writer
lock do the real coordination.

Session ids are sequential per service instance and bookmark timestamps
come from the configured clock, so a fresh instance with a pinned clock
replays a recorded transcript byte-for-byte.

Configuration is a JSON file plus environment overrides:

    {"host": ..., "port": ..., "bookmark_dir": ..., "datasets": [manifest...],
     "fixed_clock": null}

    GRAPHTRAIL_CONFIG, GRAPHTRAIL_HOST, GRAPHTRAIL_PORT,
    GRAPHTRAIL_BOOKMARK_DIR, GRAPHTRAIL_DATASETS (path-separated),
    GRAPHTRAIL_FIXED_CLOCK
"""

from __future__ import annotations

import itertools
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import bookmarks as bookmarks_mod
from . import engine, explore, ingest, store, wire
from .bookmarks import BookmarkRepository
from .engine import Session
from .errors import GraphTrailError, InvalidSpecError, UnknownDatasetError, UnknownSessionError
from .store import Dataset

DEFAULT_PORT = 8343

_HTTP_STATUS = {
    "unknown_session": 404,
    "unknown_dataset": 404,
    "unknown_bookmark": 404,
    "invalid_spec": 400,
    "invalid_predicate": 400,
    "dangling_edge": 400,
    "dead_element": 410,
    "session_busy": 409,
    "session_terminal": 409,
    "io_error": 500,
}


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = DEFAULT_PORT
    bookmark_dir: str = "bookmarks"
    datasets: list[str] = field(default_factory=list)
    fixed_clock: int | None = None


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read the config file (if any), then apply environment overrides."""
    cfg = ServiceConfig()
    path = path or os.environ.get("GRAPHTRAIL_CONFIG")
    if path:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(raw.keys()) - {"host", "port", "bookmark_dir", "datasets", "fixed_clock"}
        if unknown:
            raise InvalidSpecError(f"unknown config keys: {sorted(unknown)}")
        cfg = ServiceConfig(**{**cfg.__dict__, **raw})
    if "GRAPHTRAIL_HOST" in os.environ:
        cfg.host = os.environ["GRAPHTRAIL_HOST"]
    if "GRAPHTRAIL_PORT" in os.environ:
        cfg.port = int(os.environ["GRAPHTRAIL_PORT"])
    if "GRAPHTRAIL_BOOKMARK_DIR" in os.environ:
        cfg.bookmark_dir = os.environ["GRAPHTRAIL_BOOKMARK_DIR"]
    if "GRAPHTRAIL_DATASETS" in os.environ:
        cfg.datasets = [p for p in os.environ["GRAPHTRAIL_DATASETS"].split(os.pathsep) if p]
    if "GRAPHTRAIL_FIXED_CLOCK" in os.environ:
        cfg.fixed_clock = int(os.environ["GRAPHTRAIL_FIXED_CLOCK"])
    return cfg


class SessionRegistry:
    """Maps session ids to live sessions; terminal sessions are retained."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._ids = itertools.count(1)
        self._lock = threading.Lock()

    def create(self, dataset: Dataset, spec, breakpoints) -> Session:
        with self._lock:
            session_id = f"s{next(self._ids)}"
        session = engine.create_session(dataset, spec, breakpoints, session_id=session_id)
        with self._lock:
            self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"no session {session_id!r}")
        return session


@dataclass
class AppState:
    datasets: dict[str, Dataset]
    repo: BookmarkRepository
    registry: SessionRegistry = field(default_factory=SessionRegistry)

    def dataset(self, name: str) -> Dataset:
        d = self.datasets.get(name)
        if d is None:
            raise UnknownDatasetError(f"no dataset {name!r}")
        return d


def build_state(config: ServiceConfig) -> AppState:
    datasets: dict[str, Dataset] = {}
    for manifest in config.datasets:
        d = ingest.load_manifest(manifest)
        if d.name in datasets:
            raise InvalidSpecError(f"dataset {d.name!r} loaded twice")
        datasets[d.name] = d
    clock = (lambda: config.fixed_clock) if config.fixed_clock is not None else None
    repo = BookmarkRepository(config.bookmark_dir, clock=clock)
    return AppState(datasets=datasets, repo=repo)


# -- request bodies ---------------------------------------------------------


class ElementRef(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)
    element_class: Literal["vertex", "edge"] = Field(alias="class")
    id: int


class DeleteElementBody(ElementRef):
    pass


class CreateSessionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    dataset: str
    spec: dict
    breakpoints: list[dict] = Field(default_factory=list)


class AttributesBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    elements: list[ElementRef]
    names: list[str]


class StoreBookmarkBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    payload: dict
    description: str | None = None


# -- app --------------------------------------------------------------------


def ok(data, status_code: int = 200) -> JSONResponse:
    return JSONResponse({"ok": True, "data": data}, status_code=status_code)


def fail(code: str, message: str, status_code: int) -> JSONResponse:
    return JSONResponse({"ok": False, "error": {"code": code, "message": message}}, status_code=status_code)


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="graphtrail", docs_url=None, redoc_url=None)
    app.state.graphtrail = state

    @app.exception_handler(GraphTrailError)
    def _domain_error(request: Request, exc: GraphTrailError):
        return fail(exc.code, exc.message, _HTTP_STATUS[exc.code])

    @app.exception_handler(RequestValidationError)
    def _validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        return fail("invalid_spec", f"{where}: {first.get('msg', 'invalid request')}", 400)

    @app.exception_handler(StarletteHTTPException)
    def _http_error(request: Request, exc: StarletteHTTPException):
        # Unknown routes and bad methods still wear the envelope.
        return fail("invalid_spec", str(exc.detail), exc.status_code)

    @app.exception_handler(Exception)
    def _unexpected(request: Request, exc: Exception):
        return fail("io_error", f"internal error: {exc}", 500)

    # -- datasets --

    @app.get("/api/datasets")
    def list_datasets():
        data = [
            {
                "name": d.name,
                "vertex_count": d.live_vertices,
                "edge_count": d.live_edges,
                "version": d.version,
            }
            for d in state.datasets.values()
        ]
        return ok(data)

    @app.post("/api/datasets/{name}/elements:delete")
    def delete_element(name: str, body: DeleteElementBody):
        d = state.dataset(name)
        version = store.delete_element(d, body.element_class, body.id)
        return ok({"version": version})

    # -- sessions --

    @app.post("/api/sessions")
    def create_session(body: CreateSessionBody):
        d = state.dataset(body.dataset)
        spec = wire.decode_spec(body.spec)
        breakpoints = [wire.decode_predicate(b) for b in body.breakpoints]
        session = state.registry.create(d, spec, breakpoints)
        return ok({"session_id": session.id}, status_code=201)

    @app.post("/api/sessions/{session_id}/continue")
    def continue_session(session_id: str):
        session = state.registry.get(session_id)
        event = engine.continue_session(session)
        return ok(wire.encode_pause_event(event))

    @app.post("/api/sessions/{session_id}/stop")
    def stop_session(session_id: str):
        session = state.registry.get(session_id)
        return ok({"status": engine.stop_session(session)})

    @app.get("/api/sessions/{session_id}")
    def session_status(session_id: str):
        session = state.registry.get(session_id)
        status, processed, last = engine.session_status(session)
        return ok(
            {
                "status": status,
                "records_processed": processed,
                "last_event": wire.encode_pause_event(last) if last else None,
            }
        )

    # -- exploration --

    @app.post("/api/sessions/{session_id}/expand")
    def expand(session_id: str, body: dict):
        session = state.registry.get(session_id)
        req = wire.decode_expansion_request(body)
        delta = explore.expand_neighborhood(session, req)
        return ok(wire.encode_delta(delta))

    @app.post("/api/sessions/{session_id}/estimate")
    def estimate(session_id: str, body: dict):
        session = state.registry.get(session_id)
        req = wire.decode_expansion_request(body, allow_limit=False)
        return ok({"count": explore.estimate_expansion(session, req)})

    @app.post("/api/sessions/{session_id}/attributes")
    def attributes(session_id: str, body: AttributesBody):
        session = state.registry.get(session_id)
        elements = [(ref.element_class, ref.id) for ref in body.elements]
        result = explore.fetch_attributes(session, elements, body.names)
        tags = {
            store.VERTEX: session.dataset.schema.vertex_attrs,
            store.EDGE: session.dataset.schema.edge_attrs,
        }
        return ok(wire.encode_fetch_result(result, tags=tags))

    @app.post("/api/sessions/{session_id}/edge/{edge_id}/endpoints")
    def edge_endpoints(session_id: str, edge_id: int):
        session = state.registry.get(session_id)
        (src, src_type), (tgt, tgt_type) = explore.incident_vertices(session, edge_id)
        return ok({"source": {"id": src, "type": src_type}, "target": {"id": tgt, "type": tgt_type}})

    # -- bookmarks --

    @app.post("/api/sessions/{session_id}/bookmarks")
    def store_bookmark(session_id: str, body: StoreBookmarkBody):
        session = state.registry.get(session_id)
        bm = state.repo.store(
            payload=body.payload,
            description=body.description,
            dataset=session.dataset.name,
            dataset_version=session.dataset.version,
            session_id=session.id,
        )
        return ok(bm.metadata(), status_code=201)

    @app.get("/api/bookmarks")
    def list_bookmarks(session: str | None = None):
        return ok(state.repo.list(session_id=session))

    @app.get("/api/bookmarks/{bookmark_id}")
    def get_bookmark(bookmark_id: str):
        bm = state.repo.load(bookmark_id)
        return ok(json.loads(bookmarks_mod.document_text(bm)))

    @app.post("/api/sessions/{session_id}/bookmarks/{bookmark_id}/restore")
    def restore_bookmark(session_id: str, bookmark_id: str):
        session = state.registry.get(session_id)
        session.acquire()
        try:
            bm, stale = bookmarks_mod.restore_bookmark(state.repo, bookmark_id, session.dataset)
        finally:
            session.release()
        return ok({"payload": bm.payload, "staleness": wire.encode_staleness(stale)})

    return app


def create_app_from_config(config: ServiceConfig | None = None) -> FastAPI:
    return create_app(build_state(config or load_config()))
