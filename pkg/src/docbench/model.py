"""Workload taxonomy, identifiers, and the deterministic payload generator.

Everything in here is an immutable value; instances can be shared freely
between threads.
"""

from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Operation",
    "SizeClass",
    "TestKind",
    "PayloadSizes",
    "DEFAULT_SIZES",
    "Payload",
    "TargetTooSmall",
    "test_matrix",
    "generate_payload",
    "document_key",
    "DATABASE_ID_PATTERN",
    "BUILTIN_DATABASE_IDS",
    "UnknownDatabase",
    "validate_database_id",
]


class Operation(str, Enum):
    UPLOAD = "upload"
    RETRIEVE = "retrieve"
    UPDATE = "update"


class SizeClass(str, Enum):
    SMALL = "small"
    LARGE = "large"


class TestKind(str, Enum):
    """The six workloads: {upload, retrieve, update} x {small, large}.

    Member order is the canonical test-matrix order; the string values are
    stable and appear verbatim in the wire API and persisted records.
    """

    __test__ = False  # not a pytest class, despite the name

    UPLOAD_SMALL = "upload_small"
    UPLOAD_LARGE = "upload_large"
    RETRIEVE_SMALL = "retrieve_small"
    RETRIEVE_LARGE = "retrieve_large"
    UPDATE_SMALL = "update_small"
    UPDATE_LARGE = "update_large"

    @property
    def operation(self) -> Operation:
        return Operation(self.value.rsplit("_", 1)[0])

    @property
    def size_class(self) -> SizeClass:
        return SizeClass(self.value.rsplit("_", 1)[1])


def test_matrix() -> list[TestKind]:
    """All six test kinds in canonical order (uploads, retrieves, updates)."""
    return list(TestKind)


test_matrix.__test__ = False  # keep pytest from collecting it when imported


@dataclass(frozen=True)
class PayloadSizes:
    """Byte targets for the two size classes.

    Defaults read "kb" as kibibytes: small = 5 KiB, large = 200 KiB. Both are
    configurable per deployment.
    """

    small_bytes: int = 5 * 1024
    large_bytes: int = 200 * 1024

    def target_bytes(self, size_class: SizeClass) -> int:
        return self.small_bytes if size_class is SizeClass.SMALL else self.large_bytes


DEFAULT_SIZES = PayloadSizes()


class TargetTooSmall(ValueError):
    """Requested payload size cannot hold the document envelope."""


@dataclass(frozen=True)
class Payload:
    """One benchmark document: a JSON body padded to an exact byte length."""

    document_id: str
    body: bytes
    size_class: SizeClass
    seed: int

    @classmethod
    def from_body(cls, body: bytes) -> "Payload":
        """Rebuild payload metadata from a stored document body.

        Adapters that fetch raw bytes (e.g. over HTTP) use this to return a
        Payload; metadata defaults are best-effort when the body was not
        produced by generate_payload.
        """
        document_id = ""
        seed = 0
        try:
            doc = json.loads(body)
            document_id = str(doc.get("document_id", ""))
            seed = int(doc.get("seed", 0))
        except (ValueError, TypeError):
            pass
        size_class = SizeClass.SMALL
        parts = document_id.split("-")
        if len(parts) >= 3 and parts[1] in (SizeClass.LARGE.value, SizeClass.SMALL.value):
            size_class = SizeClass(parts[1])
        return cls(document_id=document_id, body=body, size_class=size_class, seed=seed)


_MASK64 = (1 << 64) - 1

# 64 filler characters so the sextet lookup below is unbiased; all are safe
# inside a JSON string without escaping.
_FILLER_CHARS = (string.ascii_letters + string.digits + "+-").encode("ascii")
_FILLER_TABLE = bytes(_FILLER_CHARS[b & 0x3F] for b in range(256))

MIN_TARGET_BYTES = 64


def _filler(seed: int, length: int) -> bytes:
    """Deterministic filler text from the splitmix64 generator.

    splitmix64 (documented in the README): state advances by the golden-gamma
    constant 0x9E3779B97F4A7C15; each output mixes the state with two
    xor-shift-multiply rounds. Output blocks map byte-wise onto a 64-character
    alphabet, so equal seeds give byte-identical filler on every platform.
    """
    out = bytearray()
    state = seed & _MASK64
    while len(out) < length:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        out += z.to_bytes(8, "little")
    return bytes(out[:length]).translate(_FILLER_TABLE)


def generate_payload(
    size_class: SizeClass, seed: int, sizes: PayloadSizes = DEFAULT_SIZES
) -> Payload:
    """Build the benchmark document for (size_class, seed).

    The body is a JSON object whose trailing "filler" field pads the
    serialized form to exactly the configured target length. Pure function of
    its arguments: repeated calls return byte-identical bodies.

    Raises TargetTooSmall when the target length is under MIN_TARGET_BYTES or
    cannot hold the envelope for this seed.
    """
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    target = sizes.target_bytes(size_class)
    if target < MIN_TARGET_BYTES:
        raise TargetTooSmall(
            f"target_bytes {target} is below the minimum of {MIN_TARGET_BYTES}"
        )
    document_id = f"doc-{size_class.value}-{seed}"
    envelope = {"document_id": document_id, "seed": seed, "filler": ""}
    base_length = len(json.dumps(envelope, separators=(",", ":")).encode("ascii"))
    pad = target - base_length
    if pad < 0:
        raise TargetTooSmall(
            f"target_bytes {target} cannot hold the {base_length}-byte envelope"
        )
    envelope["filler"] = _filler(seed, pad).decode("ascii")
    body = json.dumps(envelope, separators=(",", ":")).encode("ascii")
    assert len(body) == target
    return Payload(document_id=document_id, body=body, size_class=size_class, seed=seed)


@dataclass(frozen=True)
class DocumentKey:
    """Canonical "<run_id>/<database_id>/<rep_index>" trial key."""

    value: str

    def __str__(self) -> str:
        return self.value


def document_key(run_id: str, database_id: str, rep_index: int) -> DocumentKey:
    if not run_id:
        raise ValueError("run_id must be non-empty")
    if rep_index < 0:
        raise ValueError("rep_index must be non-negative")
    return DocumentKey(f"{run_id}/{database_id}/{rep_index}")


class UnknownDatabase(LookupError):
    """Database id is not registered / has no recorded trials."""


DATABASE_ID_PATTERN = re.compile(r"^[a-z0-9_]{1,32}$")

BUILTIN_DATABASE_IDS = (
    "memory",
    "sim_mongodb",
    "sim_dynamodb",
    "sim_firebase",
    "sim_couchdb",
)


def validate_database_id(name: str) -> str:
    if not DATABASE_ID_PATTERN.match(name):
        raise ValueError(
            f"invalid database id {name!r}: must match [a-z0-9_]{{1,32}}"
        )
    return name
