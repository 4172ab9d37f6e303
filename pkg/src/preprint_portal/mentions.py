"""Social mention events: deduplicating ingestion, windowed counts, links.

Ingestion consumes line-delimited JSON (one object per line with keys
tweet_id, arxiv_id, timestamp, url and optional author_handle). Events
keyed by an already-seen tweet_id count as duplicates and are dropped, so
re-ingesting a log changes nothing. Mentions may reference papers that
have not been harvested yet.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import StorageFailure
from .locks import ReadWriteLock
from .models import IngestReport, MentionEvent, TimeRange, mention_from_dict, mention_to_dict


class MentionStore:
    def __init__(self):
        self._lock = ReadWriteLock()
        self._by_tweet: dict[str, MentionEvent] = {}
        self._by_paper: dict[str, list[MentionEvent]] = {}

    def __len__(self) -> int:
        with self._lock.read():
            return len(self._by_tweet)

    def _insert_unlocked(self, event: MentionEvent) -> bool:
        if event.tweet_id in self._by_tweet:
            return False
        self._by_tweet[event.tweet_id] = event
        self._by_paper.setdefault(event.arxiv_id, []).append(event)
        return True

    def ingest(
        self,
        lines: Iterable[str],
        persist: Optional[Callable[[MentionEvent], None]] = None,
    ) -> IngestReport:
        """Ingest a mention log; returns accepted/duplicates/rejected counts.

        Malformed lines are counted as rejected and skipped. A persistence
        failure aborts with StorageFailure carrying the progress so far in
        its ``partial_report`` attribute.
        """
        report = IngestReport()
        for line in lines:
            if not line.strip():
                continue
            try:
                event = mention_from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, ValueError, TypeError):
                report.rejected += 1
                continue
            with self._lock.write():
                inserted = self._insert_unlocked(event)
            if not inserted:
                report.duplicates += 1
                continue
            if persist is not None:
                try:
                    persist(event)
                except OSError as exc:
                    failure = StorageFailure(f"mention log write failed: {exc}")
                    failure.partial_report = report
                    raise failure from exc
            report.accepted += 1
        return report

    def mention_count(self, arxiv_id: str, time_range: Optional[TimeRange] = None) -> int:
        """Count stored mentions of a paper, all-time or within a window."""
        with self._lock.read():
            events = self._by_paper.get(arxiv_id, ())
            if time_range is None:
                return len(events)
            return sum(1 for e in events if time_range.contains(e.timestamp))

    def mentions_for(self, arxiv_id: str, limit: int) -> list[MentionEvent]:
        """Newest mentions first, at most ``limit``, ties by tweet_id descending."""
        if limit < 1:
            raise ValueError(f"limit must be >= 1, got {limit}")
        with self._lock.read():
            events = list(self._by_paper.get(arxiv_id, ()))
        events.sort(key=lambda e: (e.timestamp, e.tweet_id), reverse=True)
        return events[:limit]

    # --- persistence ------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with self._lock.read():
            lines = [
                json.dumps(mention_to_dict(e), sort_keys=True)
                for e in self._by_tweet.values()
            ]
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageFailure(f"cannot write mention store to {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "MentionStore":
        store = cls()
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            return store
        except OSError as exc:
            raise StorageFailure(f"cannot read mention store from {path}: {exc}") from exc
        for line in text.splitlines():
            if line.strip():
                store._insert_unlocked(mention_from_dict(json.loads(line)))
        return store
