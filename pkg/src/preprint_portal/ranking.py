"""Orders candidate papers under one of the four sort modes.

Modes and their keys:

* date       : latest version date, newest first
* twitter    : mention count (restricted to the window when one is set)
* collection : number of distinct users holding the paper
* relevance  : full-text match score

A time window is half-open ``[start, end)``. Under date, relevance and
collection modes it excludes papers whose latest version date falls
outside; under twitter mode it restricts which mentions are counted and
drops papers with no in-window mention. Without a window every mode is a
pure re-ordering of the candidate set. Ties break by arxiv_id descending,
so the ordering is total and deterministic.
"""

from __future__ import annotations

from datetime import datetime
from typing import Callable, Iterable, Optional, Protocol

from .errors import MissingSignal, PortalError
from .models import RankedHit, SortKey, SortMode, TimeRange


class Signals(Protocol):
    """Per-paper signal lookups the ranker depends on."""

    def latest_date(self, arxiv_id: str) -> datetime: ...

    def mention_count(self, arxiv_id: str, time_range: Optional[TimeRange]) -> int: ...

    def collection_count(self, arxiv_id: str) -> int: ...

    def relevance(self, arxiv_id: str) -> float: ...


def filter_by_date(
    candidates: Iterable[str],
    time_range: TimeRange,
    latest_date: Callable[[str], datetime],
) -> set[str]:
    """Keep exactly the papers whose latest version date lies in the window."""
    return {p for p in candidates if time_range.contains(latest_date(p))}


def rank(
    candidates: Iterable[str],
    mode: SortMode,
    time_range: Optional[TimeRange],
    signals: Signals,
) -> list[RankedHit]:
    """Order ``candidates`` by the mode's key, descending; ties by id descending.

    Raises MissingSignal if a required signal is unavailable for a candidate.
    """
    pool = set(candidates)

    def _signal(name: str, fn: Callable, pid: str, *args) -> SortKey:
        try:
            return fn(pid, *args)
        except (KeyError, PortalError) as exc:
            raise MissingSignal(pid, name) from exc

    def _latest(pid: str) -> datetime:
        return _signal("latest_date", signals.latest_date, pid)

    if mode is SortMode.TWITTER:
        keys = {p: _signal("mention_count", signals.mention_count, p, time_range) for p in pool}
        if time_range is not None:
            pool = {p for p in pool if keys[p] > 0}
    else:
        if time_range is not None:
            pool = filter_by_date(pool, time_range, _latest)
        if mode is SortMode.DATE:
            keys = {p: _latest(p) for p in pool}
        elif mode is SortMode.COLLECTION:
            keys = {p: _signal("collection_count", signals.collection_count, p) for p in pool}
        elif mode is SortMode.RELEVANCE:
            keys = {p: _signal("relevance", signals.relevance, p) for p in pool}
        else:
            raise ValueError(f"unhandled sort mode: {mode}")

    ordered = sorted(pool, key=lambda p: (keys[p], p), reverse=True)
    return [
        RankedHit(
            arxiv_id=p,
            relevance_score=_signal("relevance", signals.relevance, p),
            sort_key=keys[p],
        )
        for p in ordered
    ]
