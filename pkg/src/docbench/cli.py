"""Operator entry point: serve the API, run headless benchmarks, export tables.

Exit codes: 0 success; 1 bad config / unknown database or test / corrupt log;
2 listen address not bindable; 3 benchmark completed with trial errors.
"""

from __future__ import annotations

import signal
import socket
import sys

import click
import uvicorn

from docbench.api import build_app
from docbench.config import ConfigError, build_state, load_config
from docbench.engine import RunSpec
from docbench.model import TestKind
from docbench.report import render_csv, render_json, report_tables
from docbench.results import Outcome
from docbench.store import CorruptLog, ResultStore


def _load(config_path: str | None):
    try:
        return load_config(config_path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(1)


@click.group()
@click.version_option(package_name="docbench")
def main():
    """Benchmark document databases and serve the live results dashboard."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file path.")
@click.option("--listen", default=None, help="Override host:port to bind.")
def serve(config_path, listen):
    """Start the API service (and the web UI when built assets exist)."""
    config = _load(config_path)
    if listen:
        config.listen = listen
    try:
        config.port
    except (ValueError, IndexError):
        click.echo(f"config error: listen must be host:port, got {config.listen!r}", err=True)
        sys.exit(1)

    try:
        state = build_state(config)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(1)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((config.host, config.port))
        sock.listen(128)
    except OSError as exc:
        click.echo(f"cannot bind {config.listen}: {exc}", err=True)
        sock.close()
        sys.exit(2)

    app = build_app(
        state.engine,
        state.store,
        state.registry,
        state.hub,
        max_body_bytes=config.max_body_mb * 1024 * 1024,
        static_dir=config.static_dir,
        keepalive_seconds=config.keepalive_seconds,
    )
    click.echo(f"docbench listening on http://{config.listen}", err=True)
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    # uvicorn re-raises the shutdown signal after draining; absorb it so a
    # clean SIGTERM/SIGINT shutdown exits 0 as documented.
    for exit_signal in (signal.SIGTERM, signal.SIGINT):
        signal.signal(exit_signal, lambda signum, frame: None)
    server.run(sockets=[sock])


def _parse_databases(values: tuple[str, ...]) -> tuple[str, ...]:
    databases: list[str] = []
    for value in values:
        databases.extend(part.strip() for part in value.split(",") if part.strip())
    return tuple(dict.fromkeys(databases))


@main.command()
@click.option("--db", "databases", multiple=True, required=True, help="Database id (repeat or comma-separate).")
@click.option("--test", "test_name", required=True, help="One of the six test kinds.")
@click.option("--reps", default=1, type=int, show_default=True, help="Repetitions per database.")
@click.option("--seed", type=int, default=None, help="Payload seed (default: derived from run id).")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file path.")
def run(databases, test_name, reps, seed, config_path):
    """Run one test headless against the selected databases."""
    config = _load(config_path)
    try:
        kind = TestKind(test_name)
    except ValueError:
        click.echo(
            f"unknown test {test_name!r}; expected one of {[k.value for k in TestKind]}", err=True
        )
        sys.exit(1)

    try:
        state = build_state(config)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(1)

    def print_trial(event: str, payload: dict) -> None:
        if event != "trial":
            return
        rep_index = payload["trial_id"].rsplit(":", 1)[-1]
        line = (
            f"{payload['database_id']:<16} rep {rep_index:>3}  "
            f"{payload['elapsed_ms']:>6} ms  {payload['outcome']}"
        )
        if payload.get("cache_hit"):
            line += " (cache hit)"
        if payload.get("error"):
            line += f"  {payload['error']}"
        click.echo(line)

    state.engine.on_event = print_trial
    spec = RunSpec(
        test_kind=kind,
        database_ids=_parse_databases(databases),
        repetitions=reps,
        payload_seed=seed,
        session_id="cli",
    )
    try:
        run_id = state.engine.start_run(spec, client_ip="127.0.0.1")
    except LookupError as exc:  # unknown database
        click.echo(f"unknown database: {exc}", err=True)
        sys.exit(1)
    except ValueError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)

    state.engine.wait(run_id)
    trials = state.store.query_trials(run_id=run_id)

    click.echo("")
    click.echo(f"{'database':<16} {'count':>5} {'mean_ms':>9} {'min_ms':>7} {'max_ms':>7} {'errors':>7}")
    any_errors = False
    for database_id in spec.database_ids:
        db_trials = [t for t in trials if t.database_id == database_id]
        successes = [t.elapsed_ms for t in db_trials if t.outcome is Outcome.SUCCESS]
        errors = len(db_trials) - len(successes)
        any_errors = any_errors or errors > 0
        if successes:
            mean = sum(successes) / len(successes)
            click.echo(
                f"{database_id:<16} {len(successes):>5} {mean:>9.1f} "
                f"{min(successes):>7} {max(successes):>7} {errors:>7}"
            )
        else:
            click.echo(f"{database_id:<16} {0:>5} {'-':>9} {'-':>7} {'-':>7} {errors:>7}")

    sys.exit(3 if any_errors else 0)


@main.command()
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file path.")
def report(fmt, config_path):
    """Print the average/maximum/minimum tables from the result log."""
    config = _load(config_path)
    try:
        store = ResultStore(config.log_path, durable=config.durable_log)
    except CorruptLog as exc:
        click.echo(f"corrupt result log: {exc}", err=True)
        sys.exit(1)
    tables = report_tables(store.aggregates())
    if fmt == "csv":
        click.echo(render_csv(tables), nl=False)
    else:
        click.echo(render_json(tables))


if __name__ == "__main__":
    main()
