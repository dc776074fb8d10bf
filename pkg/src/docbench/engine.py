"""Run orchestration: one test kind at a time, fanned out across databases.

A run executes its repetitions sequentially per database, with one worker
thread per selected database. Each trial times exactly one store call on the
monotonic clock; the seeding writes that retrieve/update trials need are
never measured and never recorded. Trial-level adapter failures degrade to
Error outcomes so one unreachable database cannot lose the others' results.
"""

from __future__ import annotations

import hashlib
import threading
import time
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from functools import partial
from typing import Callable

from docbench.adapters import AdapterRegistry
from docbench.geo import UNKNOWN_LOCATION, GeoLocation, GeoResolver
from docbench.model import (
    DEFAULT_SIZES,
    Operation,
    PayloadSizes,
    TestKind,
    document_key,
    generate_payload,
)
from docbench.results import Outcome, TrialResult
from docbench.store import ResultStore

__all__ = [
    "RunSpec",
    "RunState",
    "RunStatus",
    "RunAlreadyActive",
    "EmptySelection",
    "UnknownRun",
    "BenchmarkEngine",
]

_MASK64 = (1 << 64) - 1


class RunAlreadyActive(RuntimeError):
    pass


class EmptySelection(ValueError):
    pass


class UnknownRun(LookupError):
    pass


class RunState(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass(frozen=True)
class RunSpec:
    """One user-initiated batch: a single test kind, 1+ databases, N reps."""

    test_kind: TestKind
    database_ids: tuple[str, ...]
    repetitions: int = 1
    payload_seed: int | None = None
    session_id: str = ""


@dataclass(frozen=True)
class RunStatus:
    run_id: str
    state: RunState
    trials_done: int
    trials_total: int
    started_at: datetime


class _Run:
    def __init__(self, run_id: str, spec: RunSpec, total: int):
        self.run_id = run_id
        self.spec = spec
        self.state = RunState.PENDING
        self.trials_done = 0
        self.trials_total = total
        self.started_at = datetime.now(timezone.utc)
        self.finished = threading.Event()
        self.worker_failure: str | None = None


def _derive_seed(run_id: str) -> int:
    return int.from_bytes(hashlib.blake2b(run_id.encode(), digest_size=8).digest(), "big")


class BenchmarkEngine:
    """Shareable orchestrator; safe to call from concurrent API handlers."""

    def __init__(
        self,
        registry: AdapterRegistry,
        store: ResultStore,
        resolver: GeoResolver | None = None,
        sizes: PayloadSizes = DEFAULT_SIZES,
        global_lock: bool = False,
        on_event: Callable[[str, dict], None] | None = None,
    ):
        self.registry = registry
        self.store = store
        self.resolver = resolver
        self.sizes = sizes
        self.global_lock = global_lock
        self.on_event = on_event
        self._runs: dict[str, _Run] = {}
        self._active_sessions: dict[str, str] = {}
        self._lock = threading.Lock()

    # -- run lifecycle ------------------------------------------------------

    def start_run(self, spec: RunSpec, client_ip: str = "") -> str:
        if not spec.database_ids:
            raise EmptySelection("at least one database must be selected")
        if len(set(spec.database_ids)) != len(spec.database_ids):
            raise EmptySelection("database_ids must be unique")
        if spec.repetitions < 1:
            raise ValueError("repetitions must be a positive integer")
        for database_id in spec.database_ids:
            self.registry.get(database_id)  # raises UnknownDatabase

        run_id = uuid.uuid4().hex
        session_key = "__global__" if self.global_lock else spec.session_id
        total = len(spec.database_ids) * spec.repetitions
        with self._lock:
            if session_key in self._active_sessions:
                raise RunAlreadyActive(
                    f"run {self._active_sessions[session_key]} is already in flight"
                )
            run = _Run(run_id, spec, total)
            self._active_sessions[session_key] = run_id
            self._runs[run_id] = run

        coordinator = threading.Thread(
            target=self._coordinate,
            args=(run, session_key, client_ip),
            name=f"run-{run_id[:8]}",
            daemon=True,
        )
        coordinator.start()
        return run_id

    def run_status(self, run_id: str) -> RunStatus:
        with self._lock:
            run = self._runs.get(run_id)
            if run is None:
                raise UnknownRun(run_id)
            return RunStatus(
                run_id=run.run_id,
                state=run.state,
                trials_done=run.trials_done,
                trials_total=run.trials_total,
                started_at=run.started_at,
            )

    def wait(self, run_id: str, timeout: float | None = None) -> RunStatus:
        """Block until the run reaches a terminal state."""
        with self._lock:
            run = self._runs.get(run_id)
        if run is None:
            raise UnknownRun(run_id)
        run.finished.wait(timeout)
        return self.run_status(run_id)

    # -- execution ----------------------------------------------------------

    def _coordinate(self, run: _Run, session_key: str, client_ip: str) -> None:
        try:
            location = self.resolver.lookup(client_ip) if self.resolver else UNKNOWN_LOCATION
            seed = run.spec.payload_seed
            if seed is None:
                seed = _derive_seed(run.run_id)
            with self._lock:
                run.state = RunState.RUNNING
            workers = [
                threading.Thread(
                    target=self._run_database,
                    args=(run, database_id, seed, location),
                    name=f"run-{run.run_id[:8]}-{database_id}",
                    daemon=True,
                )
                for database_id in run.spec.database_ids
            ]
            for worker in workers:
                worker.start()
            for worker in workers:
                worker.join()
            with self._lock:
                run.state = RunState.FAILED if run.worker_failure else RunState.COMPLETED
        except Exception:
            with self._lock:
                run.state = RunState.FAILED
        finally:
            with self._lock:
                if self._active_sessions.get(session_key) == run.run_id:
                    del self._active_sessions[session_key]
            run.finished.set()
            self._emit(
                "run_completed",
                {
                    "run_id": run.run_id,
                    "state": run.state.value,
                    "trials_done": run.trials_done,
                    "trials_total": run.trials_total,
                },
            )

    def _run_database(self, run: _Run, database_id: str, seed: int, location: GeoLocation) -> None:
        try:
            for rep_index in range(run.spec.repetitions):
                trial = self.execute_trial(
                    database_id,
                    run.spec.test_kind,
                    seed,
                    rep_index,
                    run_id=run.run_id,
                    location=location,
                )
                self.store.append(trial)
                with self._lock:
                    run.trials_done += 1
                self._emit("trial", trial.to_record())
        except Exception as exc:  # result persistence failed; trial errors never raise
            with self._lock:
                run.worker_failure = f"{type(exc).__name__}: {exc}"

    def execute_trial(
        self,
        database_id: str,
        kind: TestKind,
        seed: int,
        rep_index: int,
        run_id: str = "adhoc",
        location: GeoLocation | None = None,
    ) -> TrialResult:
        """Time one store call; sequencing depends on the operation.

        Upload measures put on a fresh key. Retrieve seeds the document with
        an unmeasured put, then measures get. Update seeds with an unmeasured
        put, then measures update with a different payload of the same size
        (seed+1) so content dedupe cannot trivially short-circuit it. Payload
        generation happens outside the measured window.
        """
        adapter = self.registry.get(database_id)
        key = document_key(run_id, database_id, rep_index)
        started_at = datetime.now(timezone.utc)
        trial_id = f"{run_id}:{database_id}:{rep_index}"

        elapsed_ms = 0
        cache_hit = False
        outcome = Outcome.SUCCESS
        error: str | None = None
        try:
            payload = generate_payload(kind.size_class, seed, self.sizes)
            if kind.operation is Operation.UPLOAD:
                measured = partial(adapter.put, key, payload)
            elif kind.operation is Operation.RETRIEVE:
                adapter.put(key, payload)
                measured = partial(adapter.get, key)
            else:
                updated = generate_payload(kind.size_class, (seed + 1) & _MASK64, self.sizes)
                adapter.put(key, payload)
                measured = partial(adapter.update, key, updated)

            start = time.monotonic_ns()
            try:
                ack = measured()
            finally:
                elapsed_ms = (time.monotonic_ns() - start) // 1_000_000
            cache_hit = getattr(ack, "cache_hit", False)
        except Exception as exc:  # StoreError or adapter bug; must not kill the run
            outcome = Outcome.ERROR
            error = f"{type(exc).__name__}: {exc}"

        return TrialResult(
            trial_id=trial_id,
            run_id=run_id,
            database_id=database_id,
            test_kind=kind,
            elapsed_ms=elapsed_ms,
            started_at=started_at,
            location=location,
            outcome=outcome,
            error=error,
            cache_hit=cache_hit,
        )

    def _emit(self, event: str, payload: dict) -> None:
        if self.on_event is None:
            return
        try:
            self.on_event(event, payload)
        except Exception:
            pass
