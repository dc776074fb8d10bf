"""Report tables: average/maximum/minimum milliseconds per test and database.

Layout mirrors the reference tables: the six tests as rows, databases as
columns. CSV output is RFC 4180 with a leading `statistic` column so all
three tables travel in one stream; means carry one decimal, extremes are
integers, absent cells stay empty.
"""

from __future__ import annotations

import csv
import io
import json

from docbench.model import test_matrix
from docbench.store import AggregateStats

__all__ = ["report_tables", "render_csv", "render_json", "STATISTICS"]

STATISTICS = ("average", "maximum", "minimum")


def report_tables(stats: list[AggregateStats]) -> dict:
    """Nested {statistic: {test_kind: {database: value}}} plus column order."""
    databases = sorted({s.database_id for s in stats})
    tables: dict = {name: {kind.value: {} for kind in test_matrix()} for name in STATISTICS}
    for cell in stats:
        kind = cell.test_kind.value
        tables["average"][kind][cell.database_id] = round(cell.mean_ms, 1)
        tables["maximum"][kind][cell.database_id] = cell.max_ms
        tables["minimum"][kind][cell.database_id] = cell.min_ms
    return {"databases": databases, **tables}


def render_csv(tables: dict) -> str:
    databases = tables["databases"]
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["statistic", "test_kind", *databases])
    for statistic in STATISTICS:
        for kind in test_matrix():
            row = tables[statistic][kind.value]
            cells = []
            for database in databases:
                value = row.get(database)
                if value is None:
                    cells.append("")
                elif statistic == "average":
                    cells.append(f"{value:.1f}")
                else:
                    cells.append(str(value))
            writer.writerow([statistic, kind.value, *cells])
    return out.getvalue()


def render_json(tables: dict) -> str:
    return json.dumps(tables, indent=2, sort_keys=False)
