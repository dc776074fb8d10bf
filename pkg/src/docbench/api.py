"""Stateless HTTP tier: run control, aggregate views, heatmap, live stream.

Every engine/store error maps to exactly one (status, code) pair; all bodies
are JSON except the text/event-stream endpoint. The service keeps no state of
its own beyond the injected store, engine, and event hub, so two restarts
over the same log serve identical responses.
"""

from __future__ import annotations

import json
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from docbench.adapters import AdapterRegistry
from docbench.engine import BenchmarkEngine, EmptySelection, RunAlreadyActive, RunSpec, UnknownRun
from docbench.events import EventHub
from docbench.model import TestKind, UnknownDatabase
from docbench.results import TrialResult
from docbench.store import AggregateStats, HeatPoint, ResultStore, StorageFailure

__all__ = ["build_app", "MAX_BODY_BYTES"]

MAX_BODY_BYTES = 50 * 1024 * 1024

SESSION_COOKIE = "session"
SESSION_HEADER = "x-session"


def error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"code": code, "message": message}, status_code=status)


def aggregate_cell(stats: AggregateStats) -> dict:
    return {
        "database_id": stats.database_id,
        "test_kind": stats.test_kind.value,
        "count": stats.count,
        "mean_ms": round(stats.mean_ms, 1),
        "min_ms": stats.min_ms,
        "max_ms": stats.max_ms,
    }


def heat_point(point: HeatPoint) -> dict:
    return {
        "lat": point.lat_bucket,
        "lon": point.lon_bucket,
        "avg_ms": round(point.avg_ms, 1),
        "count": point.count,
    }


def trial_json(trial: TrialResult) -> dict:
    return trial.to_record()


class _BodyTooLarge(Exception):
    pass


class BodyLimitMiddleware:
    """Rejects oversized request bodies with 413 before buffering completes."""

    def __init__(self, app, max_bytes: int = MAX_BODY_BYTES):
        self.app = app
        self.max_bytes = max_bytes

    async def __call__(self, scope, receive, send):
        if scope["type"] != "http":
            await self.app(scope, receive, send)
            return

        declared = None
        for name, value in scope.get("headers", []):
            if name == b"content-length":
                try:
                    declared = int(value)
                except ValueError:
                    pass
                break
        response = error_response(413, "payload_too_large", f"body exceeds {self.max_bytes} bytes")
        if declared is not None and declared > self.max_bytes:
            await response(scope, receive, send)
            return

        received = 0
        response_started = False

        async def counting_receive():
            nonlocal received
            message = await receive()
            if message["type"] == "http.request":
                received += len(message.get("body", b""))
                if received > self.max_bytes:
                    raise _BodyTooLarge()
            return message

        async def tracking_send(message):
            nonlocal response_started
            if message["type"] == "http.response.start":
                response_started = True
            await send(message)

        try:
            await self.app(scope, counting_receive, tracking_send)
        except _BodyTooLarge:
            if not response_started:
                await response(scope, receive, send)


def build_app(
    engine: BenchmarkEngine,
    store: ResultStore,
    registry: AdapterRegistry,
    hub: EventHub,
    max_body_bytes: int = MAX_BODY_BYTES,
    static_dir: str | Path | None = None,
    keepalive_seconds: float = 15.0,
) -> FastAPI:
    app = FastAPI(title="docbench", docs_url=None, redoc_url=None)
    app.state.engine = engine
    app.state.store = store
    app.state.registry = registry
    app.state.hub = hub

    @app.exception_handler(StorageFailure)
    async def storage_failure_handler(request: Request, exc: StorageFailure):
        return error_response(500, "storage_failure", str(exc))

    @app.post("/api/runs")
    async def create_run(request: Request):
        try:
            body = json.loads(await request.body() or b"{}")
        except ValueError:
            return error_response(400, "bad_request", "request body must be a JSON object")
        if not isinstance(body, dict):
            return error_response(400, "bad_request", "request body must be a JSON object")

        try:
            kind = TestKind(body.get("test_kind"))
        except ValueError:
            return error_response(
                400, "bad_test_kind", f"test_kind must be one of {[k.value for k in TestKind]}"
            )
        database_ids = body.get("database_ids")
        if not isinstance(database_ids, list) or not all(
            isinstance(db, str) for db in database_ids
        ):
            return error_response(400, "empty_selection", "database_ids must be a list of ids")
        repetitions = body.get("repetitions", 1)
        if not isinstance(repetitions, int) or isinstance(repetitions, bool) or repetitions < 1:
            return error_response(400, "bad_request", "repetitions must be a positive integer")
        payload_seed = body.get("payload_seed")
        if payload_seed is not None and (
            not isinstance(payload_seed, int) or isinstance(payload_seed, bool)
        ):
            return error_response(400, "bad_request", "payload_seed must be an integer")

        session = request.cookies.get(SESSION_COOKIE) or request.headers.get(SESSION_HEADER)
        generated = session is None
        if generated:
            session = uuid.uuid4().hex

        forwarded = request.headers.get("x-forwarded-for")
        if forwarded:
            client_ip = forwarded.split(",")[0].strip()
        else:
            client_ip = request.client.host if request.client else ""

        spec = RunSpec(
            test_kind=kind,
            database_ids=tuple(database_ids),
            repetitions=repetitions,
            payload_seed=payload_seed,
            session_id=session,
        )
        try:
            run_id = engine.start_run(spec, client_ip)
        except RunAlreadyActive as exc:
            return error_response(409, "run_already_active", str(exc))
        except UnknownDatabase as exc:
            return error_response(404, "unknown_database", f"unknown database id {exc}")
        except EmptySelection as exc:
            return error_response(400, "empty_selection", str(exc))
        except ValueError as exc:
            return error_response(400, "bad_request", str(exc))

        response = JSONResponse({"run_id": run_id, "session": session}, status_code=202)
        if generated:
            response.set_cookie(SESSION_COOKIE, session)
        response.headers["X-Session"] = session
        return response

    @app.get("/api/runs/{run_id}")
    async def get_run(run_id: str):
        try:
            status = engine.run_status(run_id)
        except UnknownRun:
            return error_response(404, "unknown_run", f"unknown run id {run_id!r}")
        trials = store.query_trials(run_id=run_id)
        return {
            "run_id": status.run_id,
            "state": status.state.value,
            "trials_done": status.trials_done,
            "trials_total": status.trials_total,
            "started_at": status.started_at.isoformat(),
            "trials": [trial_json(t) for t in trials],
        }

    @app.get("/api/aggregates")
    async def get_aggregates():
        return {"cells": [aggregate_cell(s) for s in store.aggregates()]}

    @app.get("/api/databases")
    async def list_databases():
        databases = []
        for database_id in registry.ids():
            adapter = registry.get(database_id)
            databases.append(
                {
                    "id": database_id,
                    "persistent_connection": adapter.capabilities.persistent_connection,
                    "dedupes_identical_content": adapter.capabilities.dedupes_identical_content,
                }
            )
        return {"databases": databases}

    @app.get("/api/databases/{database_id}/extremes")
    async def get_extremes(database_id: str):
        try:
            extremes = store.extremes(database_id)
        except UnknownDatabase:
            if database_id in registry:
                extremes = {}
            else:
                return error_response(
                    404, "unknown_database", f"unknown database id {database_id!r}"
                )
        return {
            "database_id": database_id,
            "extremes": {
                kind.value: {"best_ms": ex.best_ms, "worst_ms": ex.worst_ms}
                for kind, ex in extremes.items()
            },
        }

    @app.get("/api/heatmap")
    async def get_heatmap():
        return {"points": [heat_point(p) for p in store.heatmap_points()]}

    @app.get("/api/stream")
    def stream():
        subscription = hub.subscribe()

        def frames():
            try:
                yield ": connected\n\n"
                while True:
                    event = subscription.get(timeout=keepalive_seconds)
                    yield event.sse_frame() if event else ": keep-alive\n\n"
            finally:
                subscription.close()

        return StreamingResponse(
            frames(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])
    app.add_middleware(BodyLimitMiddleware, max_bytes=max_body_bytes)
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
