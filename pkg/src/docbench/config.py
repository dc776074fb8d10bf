"""Service configuration: one JSON file plus environment overrides.

The file is optional; defaults give a desk-scale setup with the in-memory
reference store and the four simulated databases at one-tenth of their
reference latencies. Recognized environment overrides: DOCBENCH_LISTEN,
DOCBENCH_LOG_PATH, DOCBENCH_STATIC_DIR.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from docbench.adapters import (
    AdapterRegistry,
    Delay,
    DelayModel,
    HttpStoreConfig,
    MemoryAdapter,
    StoreAdapter,
    http_store,
    simulated_store,
    with_dedupe,
    with_delay,
)
from docbench.engine import BenchmarkEngine
from docbench.events import EventHub
from docbench.geo import GeoResolver, ProviderConfig
from docbench.model import PayloadSizes, TestKind
from docbench.reference import REFERENCE_MEAN_MS
from docbench.store import ResultStore

__all__ = ["ConfigError", "ServiceConfig", "ServiceState", "load_config", "build_state"]

DEFAULT_LISTEN = "127.0.0.1:8000"
DEFAULT_LOG_PATH = "docbench-results.ndjson"
DEFAULT_SIM_SCALE = 0.1
DEFAULT_SIM_JITTER = 0.1


class ConfigError(ValueError):
    pass


def _default_adapters() -> list[dict]:
    adapters: list[dict] = [{"id": "memory", "type": "memory"}]
    adapters += [
        {
            "id": f"sim_{profile}",
            "type": "simulated",
            "profile": profile,
            "scale": DEFAULT_SIM_SCALE,
            "jitter": DEFAULT_SIM_JITTER,
        }
        for profile in REFERENCE_MEAN_MS
    ]
    return adapters


@dataclass
class ServiceConfig:
    listen: str = DEFAULT_LISTEN
    log_path: str = DEFAULT_LOG_PATH
    payload_bytes: PayloadSizes = field(default_factory=PayloadSizes)
    global_lock: bool = False
    max_body_mb: int = 50
    keepalive_seconds: float = 15.0
    static_dir: str | None = None
    geolocation: ProviderConfig | None = None
    adapters: list[dict] = field(default_factory=_default_adapters)
    durable_log: bool = True

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


_TOP_LEVEL_KEYS = {
    "listen",
    "log_path",
    "payload_bytes",
    "global_lock",
    "max_body_mb",
    "keepalive_seconds",
    "static_dir",
    "geolocation",
    "adapters",
    "durable_log",
}

_ADAPTER_KEYS = {
    "id",
    "type",
    "profile",
    "scale",
    "jitter",
    "dedupe",
    "base_url",
    "timeout_ms",
    "auth_header",
    "delay",
}


def _check_keys(mapping: dict, allowed: set[str], context: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {context}")


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Parse the config file (if any) and apply environment overrides.

    Raises ConfigError naming the offending key on any problem.
    """
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
    _check_keys(raw, _TOP_LEVEL_KEYS, "config")

    config = ServiceConfig()
    if "listen" in raw:
        config.listen = str(raw["listen"])
    if "log_path" in raw:
        config.log_path = str(raw["log_path"])
    if "payload_bytes" in raw:
        sizes = raw["payload_bytes"]
        if not isinstance(sizes, dict):
            raise ConfigError("payload_bytes must be an object with small/large")
        _check_keys(sizes, {"small", "large"}, "payload_bytes")
        try:
            config.payload_bytes = PayloadSizes(
                small_bytes=int(sizes.get("small", PayloadSizes.small_bytes)),
                large_bytes=int(sizes.get("large", PayloadSizes.large_bytes)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"payload_bytes: {exc}") from exc
    if "global_lock" in raw:
        if not isinstance(raw["global_lock"], bool):
            raise ConfigError("global_lock must be a boolean")
        config.global_lock = raw["global_lock"]
    if "max_body_mb" in raw:
        if not isinstance(raw["max_body_mb"], int) or raw["max_body_mb"] <= 0:
            raise ConfigError("max_body_mb must be a positive integer")
        config.max_body_mb = raw["max_body_mb"]
    if "keepalive_seconds" in raw:
        config.keepalive_seconds = float(raw["keepalive_seconds"])
    if "static_dir" in raw and raw["static_dir"] is not None:
        config.static_dir = str(raw["static_dir"])
    if "geolocation" in raw and raw["geolocation"] is not None:
        geo = raw["geolocation"]
        if not isinstance(geo, dict):
            raise ConfigError("geolocation must be an object")
        _check_keys(geo, {"url_template", "timeout_ms"}, "geolocation")
        if "url_template" not in geo:
            raise ConfigError("geolocation.url_template is required")
        try:
            config.geolocation = ProviderConfig(
                endpoint_url_template=str(geo["url_template"]),
                timeout_ms=int(geo.get("timeout_ms", 1000)),
            )
        except ValueError as exc:
            raise ConfigError(f"geolocation: {exc}") from exc
    if "adapters" in raw:
        if not isinstance(raw["adapters"], list) or not raw["adapters"]:
            raise ConfigError("adapters must be a non-empty list")
        for entry in raw["adapters"]:
            if not isinstance(entry, dict):
                raise ConfigError("adapters entries must be objects")
            _check_keys(entry, _ADAPTER_KEYS, f"adapter {entry.get('id', '?')!r}")
            if "id" not in entry or "type" not in entry:
                raise ConfigError("each adapter needs an id and a type")
        config.adapters = raw["adapters"]
    if "durable_log" in raw:
        if not isinstance(raw["durable_log"], bool):
            raise ConfigError("durable_log must be a boolean")
        config.durable_log = raw["durable_log"]

    if os.environ.get("DOCBENCH_LISTEN"):
        config.listen = os.environ["DOCBENCH_LISTEN"]
    if os.environ.get("DOCBENCH_LOG_PATH"):
        config.log_path = os.environ["DOCBENCH_LOG_PATH"]
    if os.environ.get("DOCBENCH_STATIC_DIR"):
        config.static_dir = os.environ["DOCBENCH_STATIC_DIR"]
    if config.static_dir is None and Path("frontend/dist").is_dir():
        # Serve the dashboard automatically when its build output is present.
        config.static_dir = "frontend/dist"

    try:
        config.port
    except (ValueError, IndexError):
        raise ConfigError(f"listen must be host:port, got {config.listen!r}") from None
    return config


def _delay_model_from(entry_delay: dict, adapter_id: str) -> DelayModel:
    delays = {}
    for kind_name, values in entry_delay.items():
        try:
            kind = TestKind(kind_name)
        except ValueError:
            raise ConfigError(
                f"adapter {adapter_id!r}: unknown test kind {kind_name!r} in delay"
            ) from None
        if not isinstance(values, dict):
            raise ConfigError(f"adapter {adapter_id!r}: delay entries must be objects")
        _check_keys(values, {"base_ms", "jitter_ms"}, f"adapter {adapter_id!r} delay")
        try:
            delays[kind] = Delay(
                base_ms=float(values.get("base_ms", 0.0)),
                jitter_ms=float(values.get("jitter_ms", 0.0)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"adapter {adapter_id!r}: {exc}") from None
    return DelayModel(delays=delays)


def build_adapter(entry: dict) -> StoreAdapter:
    adapter_id = str(entry["id"])
    kind = str(entry["type"])
    try:
        if kind == "memory":
            adapter: StoreAdapter = MemoryAdapter(adapter_id)
            if "delay" in entry:
                adapter = with_delay(adapter, _delay_model_from(entry["delay"], adapter_id))
        elif kind == "simulated":
            if "delay" in entry:
                adapter = with_delay(
                    MemoryAdapter(adapter_id), _delay_model_from(entry["delay"], adapter_id)
                )
            else:
                profile = entry.get("profile")
                if profile not in REFERENCE_MEAN_MS:
                    raise ConfigError(
                        f"adapter {adapter_id!r}: profile must be one of "
                        f"{sorted(REFERENCE_MEAN_MS)}"
                    )
                adapter = simulated_store(
                    adapter_id,
                    profile,
                    scale=float(entry.get("scale", 1.0)),
                    jitter_fraction=float(entry.get("jitter", 0.0)),
                )
        elif kind == "http":
            if "base_url" not in entry:
                raise ConfigError(f"adapter {adapter_id!r}: base_url is required")
            adapter = http_store(
                HttpStoreConfig(
                    base_url=str(entry["base_url"]),
                    timeout_ms=int(entry.get("timeout_ms", 5000)),
                    auth_header=entry.get("auth_header"),
                ),
                adapter_id=adapter_id,
            )
        else:
            raise ConfigError(f"adapter {adapter_id!r}: unknown type {kind!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"adapter {adapter_id!r}: {exc}") from exc
    if entry.get("dedupe"):
        adapter = with_dedupe(adapter)
    return adapter


def build_registry(config: ServiceConfig) -> AdapterRegistry:
    registry = AdapterRegistry()
    for entry in config.adapters:
        try:
            registry.register(build_adapter(entry))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return registry


@dataclass
class ServiceState:
    config: ServiceConfig
    registry: AdapterRegistry
    store: ResultStore
    resolver: GeoResolver
    hub: EventHub
    engine: BenchmarkEngine


def build_state(config: ServiceConfig) -> ServiceState:
    registry = build_registry(config)
    store = ResultStore(config.log_path, durable=config.durable_log)
    resolver = GeoResolver(config.geolocation)
    hub = EventHub()
    engine = BenchmarkEngine(
        registry,
        store,
        resolver=resolver,
        sizes=config.payload_bytes,
        global_lock=config.global_lock,
        on_event=hub.publish,
    )
    return ServiceState(
        config=config, registry=registry, store=store, resolver=resolver, hub=hub, engine=engine
    )
