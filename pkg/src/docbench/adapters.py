"""Uniform document-store contract and its implementations.

Every benchmarked database is an adapter exposing put/get/update over whole
documents. Besides the in-memory reference store there are two decorators
(simulated latency and content dedupe) and a generic HTTP adapter for
CouchDB-style REST stores. All adapter failures surface as exactly one of
KeyNotFound, StoreUnavailable, or PayloadTooLarge.
"""

from __future__ import annotations

import hashlib
import random
import threading
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from urllib.parse import quote

import requests

from docbench.model import (
    DocumentKey,
    Operation,
    Payload,
    SizeClass,
    TestKind,
    UnknownDatabase,
    validate_database_id,
)
from docbench.reference import REFERENCE_MEAN_MS

__all__ = [
    "StoreError",
    "KeyNotFound",
    "StoreUnavailable",
    "PayloadTooLarge",
    "UnknownDatabase",
    "Ack",
    "Capabilities",
    "StoreAdapter",
    "MemoryAdapter",
    "Delay",
    "DelayModel",
    "with_delay",
    "with_dedupe",
    "HttpStoreConfig",
    "http_store",
    "simulated_store",
    "reference_delay_model",
    "AdapterRegistry",
]


class StoreError(Exception):
    """Base class for the closed adapter error taxonomy."""


class KeyNotFound(StoreError):
    pass


class StoreUnavailable(StoreError):
    pass


class PayloadTooLarge(StoreError):
    pass


@dataclass(frozen=True)
class Ack:
    """Write acknowledgement; cache_hit marks a dedupe short-circuit."""

    cache_hit: bool = False


@dataclass(frozen=True)
class Capabilities:
    persistent_connection: bool = False
    dedupes_identical_content: bool = False


class StoreAdapter(ABC):
    """Contract every benchmarked database implements.

    put is last-write-wins and does not require the key to exist; update
    requires it (KeyNotFound otherwise); get returns the most recently stored
    payload. Implementations must tolerate concurrent calls from multiple
    in-flight trials.
    """

    id: str
    capabilities: Capabilities = Capabilities()

    @abstractmethod
    def put(self, key: DocumentKey, payload: Payload) -> Ack: ...

    @abstractmethod
    def get(self, key: DocumentKey) -> Payload: ...

    @abstractmethod
    def update(self, key: DocumentKey, payload: Payload) -> Ack: ...


class MemoryAdapter(StoreAdapter):
    """In-process reference store; doubles as the conformance oracle."""

    def __init__(self, adapter_id: str = "memory", max_payload_bytes: int | None = None):
        self.id = validate_database_id(adapter_id)
        self.capabilities = Capabilities(persistent_connection=True)
        self.max_payload_bytes = max_payload_bytes
        self._docs: dict[str, Payload] = {}
        self._lock = threading.Lock()

    def _check_size(self, payload: Payload) -> None:
        if self.max_payload_bytes is not None and len(payload.body) > self.max_payload_bytes:
            raise PayloadTooLarge(
                f"{len(payload.body)} bytes exceeds store limit of {self.max_payload_bytes}"
            )

    def put(self, key: DocumentKey, payload: Payload) -> Ack:
        self._check_size(payload)
        with self._lock:
            self._docs[str(key)] = payload
        return Ack()

    def get(self, key: DocumentKey) -> Payload:
        with self._lock:
            try:
                return self._docs[str(key)]
            except KeyError:
                raise KeyNotFound(str(key)) from None

    def update(self, key: DocumentKey, payload: Payload) -> Ack:
        self._check_size(payload)
        with self._lock:
            if str(key) not in self._docs:
                raise KeyNotFound(str(key))
            self._docs[str(key)] = payload
        return Ack()


@dataclass(frozen=True)
class Delay:
    """base_ms plus uniform jitter in [-jitter_ms, +jitter_ms]."""

    base_ms: float
    jitter_ms: float = 0.0

    def __post_init__(self):
        if self.base_ms < 0 or self.jitter_ms < 0:
            raise ValueError("delay values must be non-negative")
        if self.base_ms - self.jitter_ms < 0:
            raise ValueError("jitter_ms must not exceed base_ms")

    def sample_seconds(self) -> float:
        jitter = random.uniform(-self.jitter_ms, self.jitter_ms) if self.jitter_ms else 0.0
        return max(0.0, self.base_ms + jitter) / 1000.0


@dataclass(frozen=True)
class DelayModel:
    """Per (operation, size class) latency used by simulated adapters."""

    delays: dict[TestKind, Delay] = field(default_factory=dict)
    default: Delay = Delay(0.0)

    def delay_for(self, operation: Operation, size_class: SizeClass) -> Delay:
        kind = TestKind(f"{operation.value}_{size_class.value}")
        return self.delays.get(kind, self.default)


def reference_delay_model(
    profile: str, scale: float = 1.0, jitter_fraction: float = 0.0
) -> DelayModel:
    """Delay model from the reference mean table, optionally scaled down.

    jitter_fraction is relative to the scaled base (0.1 = +/-10%).
    """
    means = REFERENCE_MEAN_MS[profile]
    delays = {
        kind: Delay(base_ms=ms * scale, jitter_ms=ms * scale * jitter_fraction)
        for kind, ms in means.items()
    }
    return DelayModel(delays=delays)


class _DelayedAdapter(StoreAdapter):
    """Sleeps per the delay model, then delegates to the inner adapter.

    get() cannot see a payload size up front, so the wrapper remembers the
    size class of every key written through it and falls back to the model's
    default delay for keys it has never seen.
    """

    def __init__(self, inner: StoreAdapter, model: DelayModel):
        self.id = inner.id
        self.capabilities = inner.capabilities
        self.inner = inner
        self.model = model
        self._sizes: dict[str, SizeClass] = {}
        self._lock = threading.Lock()

    def _sleep(self, operation: Operation, size_class: SizeClass | None) -> None:
        if size_class is None:
            delay = self.model.default
        else:
            delay = self.model.delay_for(operation, size_class)
        seconds = delay.sample_seconds()
        if seconds > 0:
            time.sleep(seconds)

    def put(self, key: DocumentKey, payload: Payload) -> Ack:
        self._sleep(Operation.UPLOAD, payload.size_class)
        ack = self.inner.put(key, payload)
        with self._lock:
            self._sizes[str(key)] = payload.size_class
        return ack

    def get(self, key: DocumentKey) -> Payload:
        with self._lock:
            size_class = self._sizes.get(str(key))
        self._sleep(Operation.RETRIEVE, size_class)
        return self.inner.get(key)

    def update(self, key: DocumentKey, payload: Payload) -> Ack:
        self._sleep(Operation.UPDATE, payload.size_class)
        ack = self.inner.update(key, payload)
        with self._lock:
            self._sizes[str(key)] = payload.size_class
        return ack


def with_delay(inner: StoreAdapter, model: DelayModel) -> StoreAdapter:
    """Wrap an adapter so every operation pays a configured latency first."""
    return _DelayedAdapter(inner, model)


def _content_hash(body: bytes) -> str:
    # 128-bit BLAKE2b; desk-scale stores ignore collision risk.
    return hashlib.blake2b(body, digest_size=16).hexdigest()


class _DedupeAdapter(StoreAdapter):
    """Short-circuits writes whose body was stored before.

    A content-hash map remembers every body written through the wrapper; a
    repeated put/update records a reference to the existing content instead of
    calling the inner store and acknowledges with cache_hit. get resolves
    references transparently. The hash map grows with distinct bodies for the
    adapter's lifetime.
    """

    def __init__(self, inner: StoreAdapter):
        self.id = inner.id
        self.capabilities = Capabilities(
            persistent_connection=inner.capabilities.persistent_connection,
            dedupes_identical_content=True,
        )
        self.inner = inner
        self._by_hash: dict[str, Payload] = {}
        self._refs: dict[str, str] = {}
        self._known: set[str] = set()
        self._lock = threading.Lock()

    def _record_write(self, key: str, digest: str, payload: Payload) -> None:
        with self._lock:
            self._by_hash.setdefault(digest, payload)
            self._known.add(key)
            self._refs.pop(key, None)

    def put(self, key: DocumentKey, payload: Payload) -> Ack:
        k = str(key)
        digest = _content_hash(payload.body)
        with self._lock:
            if digest in self._by_hash:
                self._refs[k] = digest
                self._known.add(k)
                return Ack(cache_hit=True)
        ack = self.inner.put(key, payload)
        self._record_write(k, digest, payload)
        return ack

    def get(self, key: DocumentKey) -> Payload:
        with self._lock:
            digest = self._refs.get(str(key))
            if digest is not None:
                return self._by_hash[digest]
        return self.inner.get(key)

    def update(self, key: DocumentKey, payload: Payload) -> Ack:
        k = str(key)
        digest = _content_hash(payload.body)
        with self._lock:
            known = k in self._known
            if digest in self._by_hash and known:
                self._refs[k] = digest
                return Ack(cache_hit=True)
            is_ref = k in self._refs
        if is_ref:
            # The inner store never saw this key, but observably it exists.
            ack = self.inner.put(key, payload)
        else:
            ack = self.inner.update(key, payload)
        self._record_write(k, digest, payload)
        return ack


def with_dedupe(inner: StoreAdapter) -> StoreAdapter:
    """Wrap an adapter with content-hash write deduplication."""
    return _DedupeAdapter(inner)


@dataclass(frozen=True)
class HttpStoreConfig:
    base_url: str
    timeout_ms: int = 5000
    auth_header: str | None = None

    def __post_init__(self):
        if "://" not in self.base_url:
            raise ValueError(f"base_url must be absolute and schemeful: {self.base_url!r}")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")


class _HttpStoreAdapter(StoreAdapter):
    """Generic REST document store: PUT/GET on {base_url}/{percent-encoded key}.

    update sends an If-Match: * precondition so a missing key fails instead of
    silently creating the document. Connections are pooled, so the adapter
    reports persistent_connection and the connection phase stays out of the
    measured trial time.
    """

    def __init__(self, adapter_id: str, config: HttpStoreConfig):
        self.id = validate_database_id(adapter_id)
        self.capabilities = Capabilities(persistent_connection=True)
        self.config = config
        self._session = requests.Session()

    def _url(self, key: DocumentKey) -> str:
        return self.config.base_url.rstrip("/") + "/" + quote(str(key), safe="")

    def _headers(self, extra: dict[str, str] | None = None) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.auth_header:
            headers["Authorization"] = self.config.auth_header
        if extra:
            headers.update(extra)
        return headers

    def _request(self, method: str, key: DocumentKey, **kwargs) -> requests.Response:
        try:
            return self._session.request(
                method,
                self._url(key),
                timeout=self.config.timeout_ms / 1000.0,
                **kwargs,
            )
        except (requests.Timeout, requests.ConnectionError) as exc:
            raise StoreUnavailable(str(exc)) from exc

    @staticmethod
    def _raise_for_status(response: requests.Response) -> None:
        if response.status_code == 404:
            raise KeyNotFound(response.url)
        if response.status_code in (412, 428):
            raise KeyNotFound(f"precondition failed for {response.url}")
        if response.status_code == 413:
            raise PayloadTooLarge(response.url)
        if not 200 <= response.status_code < 300:
            raise StoreUnavailable(f"HTTP {response.status_code} from {response.url}")

    def put(self, key: DocumentKey, payload: Payload) -> Ack:
        response = self._request("PUT", key, data=payload.body, headers=self._headers())
        self._raise_for_status(response)
        return Ack()

    def get(self, key: DocumentKey) -> Payload:
        response = self._request("GET", key, headers=self._headers({"Accept": "application/json"}))
        self._raise_for_status(response)
        return Payload.from_body(response.content)

    def update(self, key: DocumentKey, payload: Payload) -> Ack:
        response = self._request(
            "PUT", key, data=payload.body, headers=self._headers({"If-Match": "*"})
        )
        self._raise_for_status(response)
        return Ack()


def http_store(config: HttpStoreConfig, adapter_id: str = "http") -> StoreAdapter:
    return _HttpStoreAdapter(adapter_id, config)


def simulated_store(
    adapter_id: str,
    profile: str,
    scale: float = 1.0,
    jitter_fraction: float = 0.0,
    dedupe: bool = False,
) -> StoreAdapter:
    """Memory store behind a reference-profile delay, standing in for a
    remote database at desk scale."""
    adapter = with_delay(
        MemoryAdapter(adapter_id), reference_delay_model(profile, scale, jitter_fraction)
    )
    if dedupe:
        adapter = with_dedupe(adapter)
    return adapter


class AdapterRegistry:
    """Database id -> adapter map used by the engine and the API."""

    def __init__(self, adapters: list[StoreAdapter] | None = None):
        self._adapters: dict[str, StoreAdapter] = {}
        for adapter in adapters or []:
            self.register(adapter)

    def register(self, adapter: StoreAdapter) -> None:
        validate_database_id(adapter.id)
        if adapter.id in self._adapters:
            raise ValueError(f"database id {adapter.id!r} already registered")
        self._adapters[adapter.id] = adapter

    def get(self, database_id: str) -> StoreAdapter:
        try:
            return self._adapters[database_id]
        except KeyError:
            raise UnknownDatabase(database_id) from None

    def __contains__(self, database_id: str) -> bool:
        return database_id in self._adapters

    def ids(self) -> list[str]:
        return sorted(self._adapters)
