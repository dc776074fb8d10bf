"""Trial result record and its persisted JSON schema.

One TrialResult is one timed store call. The log schema uses the stable
field names below; anything not listed (geo label, geo source) is not
persisted and is lost on replay.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from docbench.geo import GeoLocation, GeoSource
from docbench.model import TestKind

__all__ = ["Outcome", "TrialResult"]


class Outcome(str, Enum):
    SUCCESS = "success"
    ERROR = "error"


@dataclass(frozen=True)
class TrialResult:
    trial_id: str
    run_id: str
    database_id: str
    test_kind: TestKind
    elapsed_ms: int
    started_at: datetime
    location: GeoLocation | None = None
    outcome: Outcome = Outcome.SUCCESS
    error: str | None = None
    cache_hit: bool = False

    @property
    def succeeded(self) -> bool:
        return self.outcome is Outcome.SUCCESS

    def to_record(self) -> dict:
        """Wire/log form with the stable field names."""
        located = self.location is not None and self.location.located
        record = {
            "trial_id": self.trial_id,
            "run_id": self.run_id,
            "database_id": self.database_id,
            "test_kind": self.test_kind.value,
            "elapsed_ms": self.elapsed_ms,
            "started_at": self.started_at.isoformat(),
            "lat": self.location.latitude if located else None,
            "lon": self.location.longitude if located else None,
            "outcome": self.outcome.value,
            "cache_hit": self.cache_hit,
        }
        if self.error is not None:
            record["error"] = self.error
        return record

    @classmethod
    def from_record(cls, record: dict) -> "TrialResult":
        """Parse a log record; raises ValueError on malformed input.

        The geo source is not persisted, so replayed locations report
        provider origin.
        """
        if not isinstance(record, dict):
            raise ValueError("record must be a JSON object")
        try:
            trial_id = str(record["trial_id"])
            run_id = str(record["run_id"])
            database_id = str(record["database_id"])
            test_kind = TestKind(record["test_kind"])
            elapsed_ms = int(record["elapsed_ms"])
            started_at = datetime.fromisoformat(record["started_at"])
            outcome = Outcome(record["outcome"])
            cache_hit = bool(record.get("cache_hit", False))
        except KeyError as exc:
            raise ValueError(f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ValueError(str(exc)) from None
        if elapsed_ms < 0:
            raise ValueError(f"elapsed_ms must be non-negative, got {elapsed_ms}")
        if started_at.tzinfo is None:
            started_at = started_at.replace(tzinfo=timezone.utc)
        lat = record.get("lat")
        lon = record.get("lon")
        location = None
        if lat is not None and lon is not None:
            location = GeoLocation(
                latitude=float(lat), longitude=float(lon), source=GeoSource.PROVIDER
            )
        error = record.get("error")
        return cls(
            trial_id=trial_id,
            run_id=run_id,
            database_id=database_id,
            test_kind=test_kind,
            elapsed_ms=elapsed_ms,
            started_at=started_at,
            location=location,
            outcome=outcome,
            error=None if error is None else str(error),
            cache_hit=cache_hit,
        )
