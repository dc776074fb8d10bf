"""Brute-force recomputation of every aggregate view from the raw log file.

Deliberately independent of the store implementation: reads the NDJSON lines
itself, works on plain dicts, and recomputes statistics in single passes.
"""

from __future__ import annotations

import json
from pathlib import Path


def read_log(path) -> list[dict]:
    records = []
    text = Path(path).read_text(encoding="utf-8")
    for line in text.splitlines():
        if line.strip():
            records.append(json.loads(line))
    return records


def successes(records: list[dict]) -> list[dict]:
    return [r for r in records if r["outcome"] == "success"]


def brute_force_aggregates(records: list[dict]) -> dict[tuple[str, str], dict]:
    """{(database_id, test_kind): {count, mean_ms, min_ms, max_ms}}"""
    cells: dict[tuple[str, str], list[int]] = {}
    for record in successes(records):
        cells.setdefault((record["database_id"], record["test_kind"]), []).append(
            record["elapsed_ms"]
        )
    return {
        key: {
            "count": len(values),
            "mean_ms": sum(values) / len(values),
            "min_ms": min(values),
            "max_ms": max(values),
        }
        for key, values in cells.items()
    }


def brute_force_extremes(records: list[dict], database_id: str) -> dict[str, dict]:
    """{test_kind: {best_ms, worst_ms}} over Success trials of one database."""
    per_kind: dict[str, list[int]] = {}
    for record in successes(records):
        if record["database_id"] == database_id:
            per_kind.setdefault(record["test_kind"], []).append(record["elapsed_ms"])
    return {
        kind: {"best_ms": min(values), "worst_ms": max(values)}
        for kind, values in per_kind.items()
    }


def brute_force_heatmap(records: list[dict]) -> dict[tuple[float, float], dict]:
    """{(lat_bucket, lon_bucket): {avg_ms, count}} for located Success trials."""
    buckets: dict[tuple[float, float], list[int]] = {}
    for record in successes(records):
        if record.get("lat") is None or record.get("lon") is None:
            continue
        bucket = (round(record["lat"], 1) + 0.0, round(record["lon"], 1) + 0.0)
        buckets.setdefault(bucket, []).append(record["elapsed_ms"])
    return {
        bucket: {"avg_ms": sum(values) / len(values), "count": len(values)}
        for bucket, values in buckets.items()
    }


def assert_store_matches_oracle(store, log_path) -> None:
    """Every aggregate view of the store equals the brute-force recomputation."""
    records = read_log(log_path)

    expected_cells = brute_force_aggregates(records)
    actual_cells = {
        (s.database_id, s.test_kind.value): {
            "count": s.count,
            "mean_ms": s.mean_ms,
            "min_ms": s.min_ms,
            "max_ms": s.max_ms,
        }
        for s in store.aggregates()
    }
    assert actual_cells == expected_cells

    for database_id in {r["database_id"] for r in records}:
        expected_extremes = brute_force_extremes(records, database_id)
        actual_extremes = {
            kind.value: {"best_ms": ex.best_ms, "worst_ms": ex.worst_ms}
            for kind, ex in store.extremes(database_id).items()
        }
        assert actual_extremes == expected_extremes

    expected_heat = brute_force_heatmap(records)
    actual_heat = {
        (p.lat_bucket, p.lon_bucket): {"avg_ms": p.avg_ms, "count": p.count}
        for p in store.heatmap_points()
    }
    assert actual_heat == expected_heat
