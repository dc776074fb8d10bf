"""Client IP to coarse coordinates via a pluggable provider.

Lookups must never fail a benchmark run: every failure mode (bad IP, private
range, provider timeout, unparseable response) collapses to an Unknown
location.
"""

from __future__ import annotations

import ipaddress
import threading
from dataclasses import dataclass
from enum import Enum

import requests

__all__ = ["GeoSource", "GeoLocation", "UNKNOWN_LOCATION", "ProviderConfig", "GeoResolver"]


class GeoSource(str, Enum):
    PROVIDER = "provider"
    CACHE = "cache"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class GeoLocation:
    latitude: float | None
    longitude: float | None
    label: str = ""
    source: GeoSource = GeoSource.UNKNOWN

    @property
    def located(self) -> bool:
        return self.latitude is not None and self.longitude is not None


UNKNOWN_LOCATION = GeoLocation(None, None, "", GeoSource.UNKNOWN)


@dataclass(frozen=True)
class ProviderConfig:
    """Provider endpoint; the URL template must contain "{ip}"."""

    endpoint_url_template: str
    timeout_ms: int = 1000

    def __post_init__(self):
        if "{ip}" not in self.endpoint_url_template:
            raise ValueError("endpoint_url_template must contain '{ip}'")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")

    def url_for(self, ip: str) -> str:
        return self.endpoint_url_template.replace("{ip}", ip)


def _parse_response(data: dict) -> GeoLocation:
    # Field names vary between free providers; accept the two common spellings.
    lat = data.get("latitude", data.get("lat"))
    lon = data.get("longitude", data.get("lon"))
    if lat is None or lon is None:
        return UNKNOWN_LOCATION
    try:
        lat = float(lat)
        lon = float(lon)
    except (TypeError, ValueError):
        return UNKNOWN_LOCATION
    if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
        return UNKNOWN_LOCATION
    label = ", ".join(
        str(part) for part in (data.get("city"), data.get("country")) if part
    )
    return GeoLocation(latitude=lat, longitude=lon, label=label, source=GeoSource.PROVIDER)


class GeoResolver:
    """Caching lookup front-end over one configured provider.

    Successful lookups are cached for the process lifetime; failures are not,
    so a transient provider outage does not poison the cache. Two concurrent
    lookups of the same uncached IP may race and issue up to two provider
    calls; both record the same result.
    """

    def __init__(self, config: ProviderConfig | None = None):
        self.config = config
        self._cache: dict[str, GeoLocation] = {}
        self._lock = threading.Lock()

    def lookup(self, ip: str) -> GeoLocation:
        try:
            parsed = ipaddress.ip_address(ip)
        except ValueError:
            return UNKNOWN_LOCATION
        if (
            parsed.is_private
            or parsed.is_loopback
            or parsed.is_link_local
            or parsed.is_reserved
            or parsed.is_multicast
            or parsed.is_unspecified
        ):
            return UNKNOWN_LOCATION
        if self.config is None:
            return UNKNOWN_LOCATION

        with self._lock:
            cached = self._cache.get(ip)
        if cached is not None:
            return GeoLocation(
                latitude=cached.latitude,
                longitude=cached.longitude,
                label=cached.label,
                source=GeoSource.CACHE,
            )

        location = self._query_provider(ip)
        if location.located:
            with self._lock:
                self._cache[ip] = location
        return location

    def _query_provider(self, ip: str) -> GeoLocation:
        try:
            response = requests.get(
                self.config.url_for(ip), timeout=self.config.timeout_ms / 1000.0
            )
            if response.status_code != 200:
                return UNKNOWN_LOCATION
            return _parse_response(response.json())
        except (requests.RequestException, ValueError):
            return UNKNOWN_LOCATION
