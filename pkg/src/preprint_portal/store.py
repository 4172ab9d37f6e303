"""Paper store: one record per arxiv_id, merged across harvest rounds.

Records are immutable; an upsert swaps the whole entry, so concurrent
readers see either the old or the new record, never a partial one.
Persistence is a JSON-lines snapshot written atomically.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Optional

from .errors import StorageFailure
from .locks import ReadWriteLock
from .models import PaperRecord, UpsertOutcome, paper_from_dict, paper_to_dict


class PaperStore:
    def __init__(self):
        self._lock = ReadWriteLock()
        self._papers: dict[str, PaperRecord] = {}

    def __len__(self) -> int:
        with self._lock.read():
            return len(self._papers)

    def __contains__(self, arxiv_id: str) -> bool:
        with self._lock.read():
            return arxiv_id in self._papers

    def get(self, arxiv_id: str) -> Optional[PaperRecord]:
        with self._lock.read():
            return self._papers.get(arxiv_id)

    def ids(self) -> list[str]:
        with self._lock.read():
            return list(self._papers)

    def all(self) -> list[PaperRecord]:
        with self._lock.read():
            return list(self._papers.values())

    def upsert(self, record: PaperRecord) -> UpsertOutcome:
        """Insert or reconcile a harvested record.

        Version lists merge as a union keyed by version number; for all
        other fields, and for a version number present on both sides, the
        incoming record wins (upstream is the source of truth). Applying
        the same record twice reports UNCHANGED the second time.
        """
        with self._lock.write():
            existing = self._papers.get(record.arxiv_id)
            if existing is None:
                self._papers[record.arxiv_id] = record
                return UpsertOutcome.INSERTED
            merged_versions = {v.version_number: v for v in existing.versions}
            merged_versions.update({v.version_number: v for v in record.versions})
            merged = PaperRecord(
                arxiv_id=record.arxiv_id,
                versions=tuple(v for _, v in sorted(merged_versions.items())),
                title=record.title,
                authors=record.authors,
                abstract=record.abstract,
                categories=record.categories,
            )
            if merged == existing:
                return UpsertOutcome.UNCHANGED
            self._papers[record.arxiv_id] = merged
            return UpsertOutcome.VERSIONS_MERGED

    # --- persistence ------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with self._lock.read():
            lines = [json.dumps(paper_to_dict(r), sort_keys=True) for r in self._papers.values()]
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageFailure(f"cannot write paper store to {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "PaperStore":
        store = cls()
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            return store
        except OSError as exc:
            raise StorageFailure(f"cannot read paper store from {path}: {exc}") from exc
        for line in text.splitlines():
            if line.strip():
                record = paper_from_dict(json.loads(line))
                store._papers[record.arxiv_id] = record
        return store
