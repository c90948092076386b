"""Indicator API client: paginated JSON download with an on-disk cache.

The wire format follows the common public-indicator convention: GET
{base_url}/{provider}/indicator/{code}?date=YYYY:YYYY&format=json&page=N&
per_page=M returns a two-element array [metadata, records], where metadata
carries page/pages counts and each record holds an entity id, a date, and
a value (null for missing).  Each descriptor lands in one long-schema CSV
in the cache, keyed by a digest of (provider, code, years); repeat calls
never touch the network.
"""

from __future__ import annotations

import csv
import hashlib
import os
import time
from dataclasses import dataclass

import requests


@dataclass(frozen=True)
class FetchDescriptor:
    """One indicator request: provider, code, inclusive year range."""

    provider: str
    code: str
    years: str  # "YYYY:YYYY"

    def cache_key(self) -> str:
        raw = f"{self.provider}|{self.code}|{self.years}".encode("utf-8")
        return hashlib.sha1(raw).hexdigest()


@dataclass(frozen=True)
class FetchOutcome:
    """Result of one descriptor: a cached CSV path or an error record."""

    descriptor: FetchDescriptor
    path: str | None = None
    from_cache: bool = False
    pages: int = 0
    rows: int = 0
    error: str | None = None
    status: int | None = None
    raw_body: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _record_entity(record: dict) -> str:
    """Entity id from a record, accepting the common field spellings."""
    if "entity" in record:
        return str(record["entity"])
    if record.get("countryiso3code"):
        return str(record["countryiso3code"])
    country = record.get("country")
    if isinstance(country, dict) and "id" in country:
        return str(country["id"])
    raise ValueError("record has no entity identifier")


def _parse_payload(payload):
    """(metadata, records) from a decoded page, or ValueError."""
    if (
        not isinstance(payload, list)
        or len(payload) != 2
        or not isinstance(payload[0], dict)
        or not isinstance(payload[1], list)
    ):
        raise ValueError("payload is not a [metadata, records] pair")
    return payload[0], payload[1]


def _get_page(session, url, params, max_attempts, backoff):
    """One page with bounded-retry semantics.

    Connection failures and 5xx responses are retried with exponential
    backoff; 4xx responses are provider errors and surface immediately.
    Returns the response object.
    """
    last_exc = None
    for attempt in range(max_attempts):
        if attempt:
            time.sleep(backoff * 2 ** (attempt - 1))
        try:
            response = session.get(url, params=params, timeout=30)
        except requests.RequestException as exc:
            last_exc = exc
            continue
        if response.status_code >= 500:
            last_exc = RuntimeError(f"HTTP {response.status_code}")
            continue
        return response
    raise ConnectionError(f"gave up after {max_attempts} attempts: {last_exc}")


def _fetch_one(descriptor, base_url, cache_dir, session, per_page, max_attempts, backoff):
    key = descriptor.cache_key()
    path = os.path.join(cache_dir, f"{key}.csv")
    if os.path.exists(path):
        return FetchOutcome(descriptor, path=path, from_cache=True)

    url = f"{base_url.rstrip('/')}/{descriptor.provider}/indicator/{descriptor.code}"
    rows, page, pages = [], 1, 1
    while page <= pages:
        params = {
            "date": descriptor.years,
            "format": "json",
            "page": page,
            "per_page": per_page,
        }
        try:
            response = _get_page(session, url, params, max_attempts, backoff)
        except ConnectionError as exc:
            return FetchOutcome(descriptor, error=str(exc))
        if response.status_code >= 400:
            return FetchOutcome(
                descriptor,
                error=f"provider error for {descriptor.code!r}: HTTP {response.status_code}",
                status=response.status_code,
                raw_body=response.text,
            )
        try:
            meta, records = _parse_payload(response.json())
            pages = int(meta.get("pages", 1))
            for record in records:
                entity = _record_entity(record)
                year = int(record["date"])
                value = record.get("value")
                rows.append((entity, year, "" if value is None else repr(float(value))))
        except (ValueError, KeyError, TypeError) as exc:
            return FetchOutcome(
                descriptor,
                error=f"malformed payload on page {page}: {exc}",
                status=response.status_code,
                raw_body=response.text,
            )
        page += 1

    rows.sort(key=lambda r: (r[0], r[1]))
    os.makedirs(cache_dir, exist_ok=True)
    tmp = path + ".part"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["entity", "year", "variable", "value"])
        for entity, year, value in rows:
            writer.writerow([entity, year, descriptor.code, value])
    os.replace(tmp, path)
    return FetchOutcome(descriptor, path=path, pages=pages, rows=len(rows))


def fetch_indicators(
    descriptors,
    base_url: str,
    cache_dir: str,
    per_page: int = 1000,
    max_attempts: int = 3,
    backoff: float = 0.5,
    session=None,
) -> list:
    """Download (or reuse) one long-schema CSV per descriptor.

    Never raises for per-descriptor problems; each descriptor gets a
    FetchOutcome whose error field carries retries-exhausted, provider,
    or malformed-payload diagnostics (raw body preserved for the last
    two).  Cached descriptors are returned without network traffic.
    """
    own_session = session is None
    session = session or requests.Session()
    try:
        return [
            _fetch_one(d, base_url, cache_dir, session, per_page, max_attempts, backoff)
            for d in descriptors
        ]
    finally:
        if own_session:
            session.close()
