"""Durable, append-only trial log with in-memory aggregate indexes.

Records are newline-delimited JSON, one TrialResult per line, flushed (and by
default fsynced) before append returns. Reopening a log rebuilds the indexes
exactly as if every record had been appended in order. A final line without
its newline terminator is treated as the torn in-flight record of a crashed
writer and dropped on replay; any other malformed line raises CorruptLog.

Single-writer append, many concurrent readers; readers always observe a
consistent prefix of the log.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from docbench.model import TestKind, UnknownDatabase
from docbench.results import TrialResult

logger = logging.getLogger(__name__)

__all__ = [
    "AggregateStats",
    "Extremes",
    "HeatPoint",
    "DuplicateTrial",
    "StorageFailure",
    "CorruptLog",
    "ResultStore",
]


class DuplicateTrial(ValueError):
    pass


class StorageFailure(OSError):
    pass


class CorruptLog(ValueError):
    def __init__(self, path: str, line_number: int, reason: str):
        super().__init__(f"{path}:{line_number}: {reason}")
        self.path = path
        self.line_number = line_number
        self.reason = reason


@dataclass(frozen=True)
class AggregateStats:
    """Per (database, test kind) statistics over Success trials.

    mean_ms is the exact quotient of two integers (sum and count both fit in
    a float64 mantissa at any realistic log size); render it to one decimal
    at serialization points.
    """

    database_id: str
    test_kind: TestKind
    count: int
    mean_ms: float
    min_ms: int
    max_ms: int


@dataclass(frozen=True)
class Extremes:
    best_ms: int
    worst_ms: int


@dataclass(frozen=True)
class HeatPoint:
    lat_bucket: float
    lon_bucket: float
    avg_ms: float
    count: int


def bucket_degrees(value: float) -> float:
    """0.1-degree heatmap bucket; +0.0 normalizes -0.0 away."""
    return round(value, 1) + 0.0


@dataclass
class _CellStats:
    count: int = 0
    total: int = 0
    min_ms: int = 0
    max_ms: int = 0

    def add(self, elapsed_ms: int) -> None:
        if self.count == 0:
            self.min_ms = self.max_ms = elapsed_ms
        else:
            self.min_ms = min(self.min_ms, elapsed_ms)
            self.max_ms = max(self.max_ms, elapsed_ms)
        self.count += 1
        self.total += elapsed_ms


@dataclass
class _BucketStats:
    count: int = 0
    total: int = 0


_KIND_ORDER = {kind: index for index, kind in enumerate(TestKind)}


class ResultStore:
    """Append-only trial log plus the three aggregate views and the heatmap.

    durable=True fsyncs every append; pass False for bulk test scenarios
    where flush-to-OS suffices.
    """

    def __init__(self, path: str | Path, durable: bool = True):
        self.path = Path(path)
        self.durable = durable
        self._lock = threading.RLock()
        self._trials: list[TrialResult] = []
        self._trial_ids: set[str] = set()
        self._cells: dict[tuple[str, TestKind], _CellStats] = {}
        self._buckets: dict[tuple[float, float], _BucketStats] = {}
        self._databases_seen: set[str] = set()
        self._replay()
        try:
            self._fh = open(self.path, "ab")
        except OSError as exc:
            raise StorageFailure(str(exc)) from exc

    # -- write path ---------------------------------------------------------

    def append(self, trial: TrialResult) -> None:
        line = json.dumps(trial.to_record(), separators=(",", ":")) + "\n"
        with self._lock:
            if trial.trial_id in self._trial_ids:
                raise DuplicateTrial(trial.trial_id)
            try:
                self._fh.write(line.encode("utf-8"))
                self._fh.flush()
                if self.durable:
                    os.fsync(self._fh.fileno())
            except (OSError, ValueError) as exc:
                raise StorageFailure(str(exc)) from exc
            self._index(trial)

    def _index(self, trial: TrialResult) -> None:
        self._trials.append(trial)
        self._trial_ids.add(trial.trial_id)
        self._databases_seen.add(trial.database_id)
        if not trial.succeeded:
            return
        cell = self._cells.setdefault((trial.database_id, trial.test_kind), _CellStats())
        cell.add(trial.elapsed_ms)
        if trial.location is not None and trial.location.located:
            key = (
                bucket_degrees(trial.location.latitude),
                bucket_degrees(trial.location.longitude),
            )
            bucket = self._buckets.setdefault(key, _BucketStats())
            bucket.count += 1
            bucket.total += trial.elapsed_ms

    def _replay(self) -> None:
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        if not data:
            return
        segments = data.split(b"\n")
        torn_tail = segments.pop() if segments[-1] != b"" else None
        if torn_tail is None:
            segments.pop()  # trailing empty segment after the final newline
        for line_number, raw in enumerate(segments, start=1):
            try:
                trial = TrialResult.from_record(json.loads(raw))
            except ValueError as exc:
                raise CorruptLog(str(self.path), line_number, str(exc)) from None
            if trial.trial_id in self._trial_ids:
                raise CorruptLog(
                    str(self.path), line_number, f"duplicate trial_id {trial.trial_id!r}"
                )
            self._index(trial)
        if torn_tail is not None:
            logger.warning(
                "%s: dropping torn final record (%d bytes, no newline terminator)",
                self.path,
                len(torn_tail),
            )

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    # -- read path ----------------------------------------------------------

    def query_trials(
        self,
        run_id: str | None = None,
        database_id: str | None = None,
        test_kind: TestKind | None = None,
    ) -> list[TrialResult]:
        with self._lock:
            trials = list(self._trials)
        matched = [
            t
            for t in trials
            if (run_id is None or t.run_id == run_id)
            and (database_id is None or t.database_id == database_id)
            and (test_kind is None or t.test_kind == test_kind)
        ]
        matched.sort(key=lambda t: t.started_at)
        return matched

    def aggregates(self) -> list[AggregateStats]:
        with self._lock:
            cells = {key: (c.count, c.total, c.min_ms, c.max_ms) for key, c in self._cells.items()}
        stats = [
            AggregateStats(
                database_id=db,
                test_kind=kind,
                count=count,
                mean_ms=total / count,
                min_ms=min_ms,
                max_ms=max_ms,
            )
            for (db, kind), (count, total, min_ms, max_ms) in cells.items()
        ]
        stats.sort(key=lambda s: (s.database_id, _KIND_ORDER[s.test_kind]))
        return stats

    def extremes(self, database_id: str) -> dict[TestKind, Extremes]:
        with self._lock:
            if database_id not in self._databases_seen:
                raise UnknownDatabase(database_id)
            cells = {
                kind: (c.min_ms, c.max_ms)
                for (db, kind), c in self._cells.items()
                if db == database_id
            }
        return {
            kind: Extremes(best_ms=min_ms, worst_ms=max_ms)
            for kind, (min_ms, max_ms) in sorted(cells.items(), key=lambda kv: _KIND_ORDER[kv[0]])
        }

    def heatmap_points(self) -> list[HeatPoint]:
        with self._lock:
            buckets = {key: (b.count, b.total) for key, b in self._buckets.items()}
        points = [
            HeatPoint(lat_bucket=lat, lon_bucket=lon, avg_ms=total / count, count=count)
            for (lat, lon), (count, total) in buckets.items()
        ]
        points.sort(key=lambda p: (p.lat_bucket, p.lon_bucket))
        return points

    def databases(self) -> list[str]:
        with self._lock:
            return sorted(self._databases_seen)

    def __len__(self) -> int:
        with self._lock:
            return len(self._trials)
