"""Per-user collections of saved papers.

Membership is unique per (user, paper); the per-paper count of distinct
users is the popularity signal used by collection-sorted search.
"""

from __future__ import annotations

import enum
import json
import os
from datetime import datetime
from pathlib import Path
from typing import Callable, Optional

from .errors import StorageFailure, UnknownPaper
from .locks import ReadWriteLock
from .models import CollectionEntry
from .timefmt import format_rfc3339, parse_rfc3339


class AddOutcome(enum.Enum):
    ADDED = "added"
    ALREADY_PRESENT = "already_present"


class RemoveOutcome(enum.Enum):
    REMOVED = "removed"
    NOT_PRESENT = "not_present"


class CollectionStore:
    def __init__(self, paper_exists: Optional[Callable[[str], bool]] = None):
        self._lock = ReadWriteLock()
        self._entries: dict[tuple[str, str], CollectionEntry] = {}
        self._users_by_paper: dict[str, set[str]] = {}
        self._paper_exists = paper_exists

    def __len__(self) -> int:
        with self._lock.read():
            return len(self._entries)

    def add(self, user_id: str, arxiv_id: str, now: datetime) -> AddOutcome:
        """Save a paper; a repeated save neither bumps counts nor added_at."""
        if self._paper_exists is not None and not self._paper_exists(arxiv_id):
            raise UnknownPaper(arxiv_id)
        entry = CollectionEntry(user_id, arxiv_id, now)
        with self._lock.write():
            if (user_id, arxiv_id) in self._entries:
                return AddOutcome.ALREADY_PRESENT
            self._entries[(user_id, arxiv_id)] = entry
            self._users_by_paper.setdefault(arxiv_id, set()).add(user_id)
            return AddOutcome.ADDED

    def remove(self, user_id: str, arxiv_id: str) -> RemoveOutcome:
        with self._lock.write():
            if self._entries.pop((user_id, arxiv_id), None) is None:
                return RemoveOutcome.NOT_PRESENT
            users = self._users_by_paper[arxiv_id]
            users.discard(user_id)
            if not users:
                del self._users_by_paper[arxiv_id]
            return RemoveOutcome.REMOVED

    def list_for_user(self, user_id: str) -> list[CollectionEntry]:
        """A user's saved papers, newest first, ties by arxiv_id descending."""
        with self._lock.read():
            entries = [e for (u, _), e in self._entries.items() if u == user_id]
        entries.sort(key=lambda e: (e.added_at, e.arxiv_id), reverse=True)
        return entries

    def collection_count(self, arxiv_id: str) -> int:
        """Distinct users holding the paper; 0 for unknown papers."""
        with self._lock.read():
            return len(self._users_by_paper.get(arxiv_id, ()))

    def has(self, user_id: str, arxiv_id: str) -> bool:
        with self._lock.read():
            return (user_id, arxiv_id) in self._entries

    # --- persistence ------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with self._lock.read():
            lines = [
                json.dumps(
                    {
                        "user_id": e.user_id,
                        "arxiv_id": e.arxiv_id,
                        "added_at": format_rfc3339(e.added_at),
                    },
                    sort_keys=True,
                )
                for e in self._entries.values()
            ]
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageFailure(f"cannot write collections to {path}: {exc}") from exc

    @classmethod
    def load(
        cls, path: str | Path, paper_exists: Optional[Callable[[str], bool]] = None
    ) -> "CollectionStore":
        store = cls(paper_exists)
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            return store
        except OSError as exc:
            raise StorageFailure(f"cannot read collections from {path}: {exc}") from exc
        for line in text.splitlines():
            if line.strip():
                data = json.loads(line)
                entry = CollectionEntry(
                    data["user_id"], data["arxiv_id"], parse_rfc3339(data["added_at"])
                )
                store._entries[(entry.user_id, entry.arxiv_id)] = entry
                store._users_by_paper.setdefault(entry.arxiv_id, set()).add(entry.user_id)
        return store
