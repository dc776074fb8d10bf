"""Shared fixtures: stub servers, live API server, trial factories."""

from __future__ import annotations

import json
import socket
import threading
import time
from datetime import datetime, timedelta, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest
import uvicorn

from docbench.geo import GeoLocation, GeoSource
from docbench.model import TestKind
from docbench.results import Outcome, TrialResult

EPOCH = datetime(2026, 1, 1, tzinfo=timezone.utc)

_trial_counter = [0]


def make_trial(
    elapsed_ms: int = 100,
    database_id: str = "memory",
    test_kind: TestKind = TestKind.UPLOAD_SMALL,
    run_id: str = "run",
    lat: float | None = None,
    lon: float | None = None,
    outcome: Outcome = Outcome.SUCCESS,
    cache_hit: bool = False,
    trial_id: str | None = None,
    started_at: datetime | None = None,
) -> TrialResult:
    _trial_counter[0] += 1
    location = None
    if lat is not None and lon is not None:
        location = GeoLocation(latitude=lat, longitude=lon, source=GeoSource.PROVIDER)
    return TrialResult(
        trial_id=trial_id or f"trial-{_trial_counter[0]}",
        run_id=run_id,
        database_id=database_id,
        test_kind=test_kind,
        elapsed_ms=elapsed_ms,
        started_at=started_at or (EPOCH + timedelta(seconds=_trial_counter[0])),
        location=location,
        outcome=outcome,
        error="boom" if outcome is Outcome.ERROR else None,
        cache_hit=cache_hit,
    )


class StubDocServer:
    """Tiny document store over HTTP: PUT/GET on /{key}, If-Match honored.

    delay_seconds postpones every response; when closed() the port goes dead,
    which is how tests simulate an unreachable database.
    """

    def __init__(self, delay_seconds: float = 0.0):
        self.delay_seconds = delay_seconds
        self.docs: dict[str, bytes] = {}
        self.requests = 0
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _key(self):
                return self.path.lstrip("/")

            def do_PUT(self):
                stub.requests += 1
                if stub.delay_seconds:
                    time.sleep(stub.delay_seconds)
                length = int(self.headers.get("Content-Length", 0))
                body = self.rfile.read(length)
                key = self._key()
                if self.headers.get("If-Match") and key not in stub.docs:
                    self.send_response(412)
                    self.end_headers()
                    return
                stub.docs[key] = body
                self.send_response(200)
                self.end_headers()

            def do_GET(self):
                stub.requests += 1
                if stub.delay_seconds:
                    time.sleep(stub.delay_seconds)
                body = stub.docs.get(self._key())
                if body is None:
                    self.send_response(404)
                    self.end_headers()
                    return
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.port = self._server.server_address[1]
        self.base_url = f"http://127.0.0.1:{self.port}"
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    def close(self):
        self._server.shutdown()
        self._server.server_close()


class StubGeoProvider:
    """Counting geolocation provider returning one fixed JSON response."""

    def __init__(self, response: dict | None = None, status: int = 200):
        self.response = response if response is not None else {
            "latitude": 43.9,
            "longitude": -78.9,
            "city": "Oshawa",
            "country": "Canada",
        }
        self.status = status
        self.delay_seconds = 0.0
        self.calls = 0
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_GET(self):
                stub.calls += 1
                if stub.delay_seconds:
                    time.sleep(stub.delay_seconds)
                body = json.dumps(stub.response).encode()
                self.send_response(stub.status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.port = self._server.server_address[1]
        self.url_template = f"http://127.0.0.1:{self.port}/geo/{{ip}}"
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    def close(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def stub_doc_server():
    server = StubDocServer()
    yield server
    server.close()


@pytest.fixture
def stub_geo_provider():
    server = StubGeoProvider()
    yield server
    server.close()


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "results.ndjson"


DATABASES_POOL = ("memory", "sim_mongodb", "sim_couchdb", "remote_a", "remote_b")
LOCATION_POOL = (
    None,
    (43.94, -78.90),
    (43.96, -78.91),
    (10.04, 10.0),
    (10.06, 10.0),
    (-33.87, 151.21),
    (0.0, 0.0),
)


def random_trial(rng, index: int, run_id: str = "run") -> TrialResult:
    """Varied trial for property tests: mixed outcomes, locations, cells."""
    kind = rng.choice(list(TestKind))
    location = rng.choice(LOCATION_POOL)
    outcome = Outcome.ERROR if rng.random() < 0.1 else Outcome.SUCCESS
    return make_trial(
        trial_id=f"{run_id}-{index}",
        run_id=run_id,
        database_id=rng.choice(DATABASES_POOL),
        test_kind=kind,
        elapsed_ms=rng.randrange(0, 5000),
        lat=None if location is None else location[0],
        lon=None if location is None else location[1],
        outcome=outcome,
        cache_hit=rng.random() < 0.05,
    )


class LiveServer:
    """Real uvicorn server on an ephemeral port, for stream/concurrency tests."""

    def __init__(self, app):
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.bind(("127.0.0.1", 0))
        sock.listen(128)
        self.port = sock.getsockname()[1]
        self.base_url = f"http://127.0.0.1:{self.port}"
        self._server = uvicorn.Server(
            uvicorn.Config(app, log_level="error", timeout_graceful_shutdown=2, lifespan="off")
        )
        self._thread = threading.Thread(
            target=self._server.run, kwargs={"sockets": [sock]}, daemon=True
        )
        self._thread.start()
        deadline = time.monotonic() + 10
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("live server failed to start")
            time.sleep(0.01)

    def stop(self):
        self._server.should_exit = True
        self._thread.join(timeout=10)


def read_sse_events(response, stop_event="run_completed", deadline_s=20.0):
    """Collect {event, data} dicts from a streaming requests response."""
    events = []
    current: dict = {}
    deadline = time.monotonic() + deadline_s
    for line in response.iter_lines(decode_unicode=True):
        if time.monotonic() > deadline:
            break
        if line == "":
            if current:
                events.append(current)
                if current.get("event") == stop_event:
                    break
                current = {}
            continue
        if line.startswith(":"):
            continue
        if line.startswith("event:"):
            current["event"] = line[len("event:"):].strip()
        elif line.startswith("data:"):
            current["data"] = json.loads(line[len("data:"):].strip())
    return events
