"""Domain types: records, cursors, queries, signals and their JSON forms.

Constructors normalize timestamps to UTC seconds and whitespace in text
fields, then enforce the type invariants; invalid values raise ValueError.
Protocol-level errors (parsing a source record, validating an API query)
are raised by the owning modules, not here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import date, datetime
from typing import Optional, Union

from .ids import is_valid_category, is_valid_id
from .timefmt import format_rfc3339, parse_rfc3339, to_utc_seconds

SEARCHABLE_FIELDS = ("title", "abstract", "authors", "categories", "arxiv_id")

SortKey = Union[datetime, int, float]


def normalize_ws(text: str) -> str:
    """Collapse all whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


@dataclass(frozen=True)
class VersionInfo:
    version_number: int
    submitted_at: datetime

    def __post_init__(self):
        if self.version_number < 1:
            raise ValueError(f"version_number must be >= 1, got {self.version_number}")
        object.__setattr__(self, "submitted_at", to_utc_seconds(self.submitted_at))


@dataclass(frozen=True)
class PaperRecord:
    arxiv_id: str
    versions: tuple[VersionInfo, ...]
    title: str
    authors: tuple[str, ...]
    abstract: str
    categories: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "versions", tuple(self.versions))
        object.__setattr__(self, "authors", tuple(normalize_ws(a) for a in self.authors))
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(self, "title", normalize_ws(self.title))
        object.__setattr__(self, "abstract", normalize_ws(self.abstract))

        if not is_valid_id(self.arxiv_id):
            raise ValueError(f"invalid arxiv_id: {self.arxiv_id!r}")
        if not self.title:
            raise ValueError("title must be non-empty")
        if any(not a for a in self.authors):
            raise ValueError("author names must be non-empty")
        if not self.categories:
            raise ValueError("categories must be non-empty")
        for code in self.categories:
            if not is_valid_category(code):
                raise ValueError(f"invalid category code: {code!r}")
        if not self.versions:
            raise ValueError("versions must be non-empty")
        numbers = [v.version_number for v in self.versions]
        if numbers != list(range(1, len(numbers) + 1)):
            raise ValueError(f"version numbers must be contiguous 1..k, got {numbers}")
        stamps = [v.submitted_at for v in self.versions]
        if any(a > b for a, b in zip(stamps, stamps[1:])):
            raise ValueError("version dates must be non-decreasing")

    @property
    def latest_date(self) -> datetime:
        return self.versions[-1].submitted_at

    @property
    def latest_version(self) -> int:
        return self.versions[-1].version_number

    @property
    def primary_category(self) -> str:
        return self.categories[0]


def paper_to_dict(record: PaperRecord) -> dict:
    return {
        "arxiv_id": record.arxiv_id,
        "versions": [
            {"version_number": v.version_number, "submitted_at": format_rfc3339(v.submitted_at)}
            for v in record.versions
        ],
        "title": record.title,
        "authors": list(record.authors),
        "abstract": record.abstract,
        "categories": list(record.categories),
    }


def paper_from_dict(data: dict) -> PaperRecord:
    return PaperRecord(
        arxiv_id=data["arxiv_id"],
        versions=tuple(
            VersionInfo(v["version_number"], parse_rfc3339(v["submitted_at"]))
            for v in data["versions"]
        ),
        title=data["title"],
        authors=tuple(data["authors"]),
        abstract=data.get("abstract", ""),
        categories=tuple(data["categories"]),
    )


@dataclass
class HarvestCursor:
    """Progress marker for incremental harvesting.

    ``resumption_token`` is present exactly while a harvest round is
    mid-flight; a completed round clears it and advances the datestamp.
    """

    last_completed_datestamp: date
    resumption_token: Optional[str] = None
    records_ingested: int = 0

    def to_dict(self) -> dict:
        return {
            "last_completed_datestamp": self.last_completed_datestamp.isoformat(),
            "resumption_token": self.resumption_token,
            "records_ingested": self.records_ingested,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HarvestCursor":
        return cls(
            last_completed_datestamp=date.fromisoformat(data["last_completed_datestamp"]),
            resumption_token=data.get("resumption_token"),
            records_ingested=int(data.get("records_ingested", 0)),
        )


class UpsertOutcome(enum.Enum):
    INSERTED = "inserted"
    VERSIONS_MERGED = "versions_merged"
    UNCHANGED = "unchanged"


class SortMode(str, enum.Enum):
    DATE = "date"
    TWITTER = "twitter"
    COLLECTION = "collection"
    RELEVANCE = "relevance"


@dataclass(frozen=True)
class TimeRange:
    """Half-open UTC window ``[start, end)``."""

    start: datetime
    end: datetime

    def __post_init__(self):
        object.__setattr__(self, "start", to_utc_seconds(self.start))
        object.__setattr__(self, "end", to_utc_seconds(self.end))
        if not self.start < self.end:
            raise ValueError("time range start must precede end")

    def contains(self, ts: datetime) -> bool:
        return self.start <= ts < self.end


def field_mask(names) -> frozenset[str]:
    """Build a field mask; empty means "all fields"."""
    mask = frozenset(names)
    unknown = mask - set(SEARCHABLE_FIELDS)
    if unknown:
        raise ValueError(f"unknown search fields: {sorted(unknown)}")
    return mask


@dataclass(frozen=True)
class SearchQuery:
    text: str = ""
    fields: frozenset[str] = frozenset()
    sort: SortMode = SortMode.DATE
    time_range: Optional[TimeRange] = None
    page: int = 1
    per_page: int = 20

    def __post_init__(self):
        # accept plain strings / iterables; field names are validated at
        # search time so unknown ones surface as InvalidQuery, not here
        object.__setattr__(self, "fields", frozenset(self.fields))
        object.__setattr__(self, "sort", SortMode(self.sort))


@dataclass(frozen=True)
class RankedHit:
    arxiv_id: str
    relevance_score: float
    sort_key: SortKey


@dataclass(frozen=True)
class MentionEvent:
    tweet_id: str
    arxiv_id: str
    timestamp: datetime
    url: str
    author_handle: Optional[str] = None

    def __post_init__(self):
        if not self.tweet_id:
            raise ValueError("tweet_id must be non-empty")
        if not is_valid_id(self.arxiv_id):
            raise ValueError(f"invalid arxiv_id: {self.arxiv_id!r}")
        object.__setattr__(self, "timestamp", to_utc_seconds(self.timestamp))


def mention_to_dict(event: MentionEvent) -> dict:
    data = {
        "tweet_id": event.tweet_id,
        "arxiv_id": event.arxiv_id,
        "timestamp": format_rfc3339(event.timestamp),
        "url": event.url,
    }
    if event.author_handle is not None:
        data["author_handle"] = event.author_handle
    return data


def mention_from_dict(data: dict) -> MentionEvent:
    return MentionEvent(
        tweet_id=str(data["tweet_id"]),
        arxiv_id=str(data["arxiv_id"]),
        timestamp=parse_rfc3339(data["timestamp"]),
        url=str(data["url"]),
        author_handle=data.get("author_handle"),
    )


@dataclass(frozen=True)
class CollectionEntry:
    user_id: str
    arxiv_id: str
    added_at: datetime

    def __post_init__(self):
        if not self.user_id:
            raise ValueError("user_id must be non-empty")
        if not is_valid_id(self.arxiv_id):
            raise ValueError(f"invalid arxiv_id: {self.arxiv_id!r}")
        object.__setattr__(self, "added_at", to_utc_seconds(self.added_at))


@dataclass
class IngestReport:
    accepted: int = 0
    duplicates: int = 0
    rejected: int = 0


@dataclass(frozen=True)
class ThumbnailStatus:
    state: str  # "pending" | "done" | "failed"
    reason: Optional[str] = None
    generated_at: Optional[datetime] = None

    @classmethod
    def pending(cls) -> "ThumbnailStatus":
        return cls("pending")

    @classmethod
    def done(cls, generated_at: datetime) -> "ThumbnailStatus":
        return cls("done", generated_at=to_utc_seconds(generated_at))

    @classmethod
    def failed(cls, reason: str) -> "ThumbnailStatus":
        return cls("failed", reason=reason)
