"""Timestamp parsing and formatting.

All timestamps in the portal are UTC at second precision; that keeps sort
keys stable and golden responses byte-identical across runs.
"""

from __future__ import annotations

from datetime import date, datetime, timezone


def to_utc_seconds(dt: datetime) -> datetime:
    """Normalize to an aware UTC datetime truncated to whole seconds."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC 3339 timestamp (``Z`` suffix accepted) to UTC seconds.

    Raises ValueError on anything else, including bare dates.
    """
    if "T" not in text:
        raise ValueError(f"not an RFC 3339 timestamp: {text!r}")
    cleaned = text.strip()
    if cleaned.endswith(("Z", "z")):
        cleaned = cleaned[:-1] + "+00:00"
    return to_utc_seconds(datetime.fromisoformat(cleaned))


def parse_datestamp(text: str) -> date:
    """Parse a ``YYYY-MM-DD`` protocol datestamp."""
    return date.fromisoformat(text.strip())


def format_rfc3339(dt: datetime) -> str:
    return to_utc_seconds(dt).strftime("%Y-%m-%dT%H:%M:%SZ")
