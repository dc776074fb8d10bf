"""docbench: real-time benchmarking for document databases.

Run a fixed six-test workload matrix (upload/retrieve/update x small/large
payloads) against pluggable storage adapters, persist per-trial timings with
geolocation, and serve aggregate views plus a live event stream over REST.
"""

from docbench.adapters import (
    AdapterRegistry,
    Delay,
    DelayModel,
    HttpStoreConfig,
    KeyNotFound,
    MemoryAdapter,
    PayloadTooLarge,
    StoreAdapter,
    StoreError,
    StoreUnavailable,
    http_store,
    simulated_store,
    with_dedupe,
    with_delay,
)
from docbench.engine import BenchmarkEngine, RunSpec, RunState, RunStatus
from docbench.geo import GeoLocation, GeoResolver, ProviderConfig
from docbench.model import (
    Payload,
    PayloadSizes,
    SizeClass,
    TestKind,
    UnknownDatabase,
    generate_payload,
    test_matrix,
)
from docbench.results import Outcome, TrialResult
from docbench.store import AggregateStats, HeatPoint, ResultStore

__version__ = "0.1.0"

__all__ = [
    "AdapterRegistry",
    "AggregateStats",
    "BenchmarkEngine",
    "Delay",
    "DelayModel",
    "GeoLocation",
    "GeoResolver",
    "HeatPoint",
    "HttpStoreConfig",
    "KeyNotFound",
    "MemoryAdapter",
    "Outcome",
    "Payload",
    "PayloadSizes",
    "PayloadTooLarge",
    "ProviderConfig",
    "ResultStore",
    "RunSpec",
    "RunState",
    "RunStatus",
    "SizeClass",
    "StoreAdapter",
    "StoreError",
    "StoreUnavailable",
    "TestKind",
    "TrialResult",
    "UnknownDatabase",
    "generate_payload",
    "http_store",
    "simulated_store",
    "test_matrix",
    "with_dedupe",
    "with_delay",
]
