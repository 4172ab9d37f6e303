"""Portal facade wiring stores, index, signals, harvesting and thumbnails.

One Portal instance owns a data directory:

    papers.jsonl       harvested metadata records
    mentions.jsonl     accepted mention events (append-only)
    collections.jsonl  (user, paper, added_at) entries
    cursor.json        harvest cursor
    index.bin          persisted search index
    thumbs/            generated preview strips

A missing index file is rebuilt from the paper store on open; a corrupt
one raises and is never silently replaced.
"""

from __future__ import annotations

import json
import logging
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from .collections import AddOutcome, CollectionStore, RemoveOutcome
from .config import PortalConfig
from .harvest import run_harvest_round
from .index import SearchIndex
from .mentions import MentionStore
from .models import (
    CollectionEntry,
    HarvestCursor,
    IngestReport,
    MentionEvent,
    PaperRecord,
    RankedHit,
    SearchQuery,
    mention_to_dict,
)
from .store import PaperStore
from .thumbs import ThumbnailGenerator

logger = logging.getLogger(__name__)

PAPERS_FILE = "papers.jsonl"
MENTIONS_FILE = "mentions.jsonl"
COLLECTIONS_FILE = "collections.jsonl"
CURSOR_FILE = "cursor.json"
INDEX_FILE = "index.bin"
THUMBS_DIR = "thumbs"


class _StoreSignals:
    """Ranking signals backed by the live stores. Relevance comes from the
    index at query time, so the base value here is a constant zero."""

    def __init__(self, portal: "Portal"):
        self._portal = portal

    def latest_date(self, arxiv_id: str) -> datetime:
        record = self._portal.papers.get(arxiv_id)
        if record is None:
            raise KeyError(arxiv_id)
        return record.latest_date

    def mention_count(self, arxiv_id: str, time_range) -> int:
        return self._portal.mentions.mention_count(arxiv_id, time_range)

    def collection_count(self, arxiv_id: str) -> int:
        return self._portal.collections.collection_count(arxiv_id)

    def relevance(self, arxiv_id: str) -> float:
        return 0.0


class Portal:
    def __init__(self, config: PortalConfig):
        self.config = config
        self.data_dir = Path(config.data_dir)
        self.papers = PaperStore()
        self.mentions = MentionStore()
        self.collections = CollectionStore(paper_exists=self._paper_exists)
        self.index = SearchIndex()
        self.signals = _StoreSignals(self)
        self.thumbs: Optional[ThumbnailGenerator] = None
        if config.rasterizer:
            self.thumbs = ThumbnailGenerator(self.data_dir / THUMBS_DIR, config.rasterizer)

    def _paper_exists(self, arxiv_id: str) -> bool:
        return arxiv_id in self.papers

    def _path(self, name: str) -> Path:
        return self.data_dir / name

    @classmethod
    def open(cls, config: PortalConfig) -> "Portal":
        """Load all stores from the data directory, creating it if absent."""
        portal = cls(config)
        portal.data_dir.mkdir(parents=True, exist_ok=True)
        portal.papers = PaperStore.load(portal._path(PAPERS_FILE))
        portal.mentions = MentionStore.load(portal._path(MENTIONS_FILE))
        portal.collections = CollectionStore.load(
            portal._path(COLLECTIONS_FILE), paper_exists=portal._paper_exists
        )
        index_path = portal._path(INDEX_FILE)
        if index_path.exists():
            portal.index = SearchIndex.load(index_path)
        else:
            portal.rebuild_index()
        return portal

    # --- search and detail ------------------------------------------

    def search(self, query: SearchQuery) -> tuple[list[RankedHit], int]:
        return self.index.search(query, self.signals)

    def get_paper(self, arxiv_id: str) -> Optional[PaperRecord]:
        return self.papers.get(arxiv_id)

    def pdf_url(self, record: PaperRecord) -> str:
        base = self.config.pdf_base_url.rstrip("/")
        return f"{base}/{record.arxiv_id}v{record.latest_version}"

    def mention_links(self, arxiv_id: str) -> list[dict]:
        events = self.mentions.mentions_for(arxiv_id, self.config.mention_links_cap)
        return [mention_to_dict(e) for e in events]

    def thumbnail_ready(self, arxiv_id: str) -> bool:
        if self.thumbs is not None:
            return self.thumbs.status(arxiv_id).state == "done"
        return (self.data_dir / THUMBS_DIR / f"{arxiv_id}.png").exists()

    def thumbnail_path(self, arxiv_id: str) -> Path:
        return self.data_dir / THUMBS_DIR / f"{arxiv_id}.png"

    # --- mutations ---------------------------------------------------

    def ingest_mentions(self, lines: Iterable[str]) -> IngestReport:
        """Ingest a mention log, appending accepted events to the store file."""
        path = self._path(MENTIONS_FILE)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:

            def append(event: MentionEvent) -> None:
                fh.write(json.dumps(mention_to_dict(event), sort_keys=True) + "\n")

            return self.mentions.ingest(lines, persist=append)

    def add_to_collection(
        self, user_id: str, arxiv_id: str, now: Optional[datetime] = None
    ) -> AddOutcome:
        if now is None:
            now = datetime.now(timezone.utc)
        outcome = self.collections.add(user_id, arxiv_id, now)
        if outcome is AddOutcome.ADDED:
            self.collections.save(self._path(COLLECTIONS_FILE))
        return outcome

    def remove_from_collection(self, user_id: str, arxiv_id: str) -> RemoveOutcome:
        outcome = self.collections.remove(user_id, arxiv_id)
        if outcome is RemoveOutcome.REMOVED:
            self.collections.save(self._path(COLLECTIONS_FILE))
        return outcome

    def list_collection(self, user_id: str) -> list[CollectionEntry]:
        return self.collections.list_for_user(user_id)

    # --- harvesting and index maintenance ----------------------------

    def load_cursor(self) -> Optional[HarvestCursor]:
        path = self._path(CURSOR_FILE)
        if not path.exists():
            return None
        return HarvestCursor.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def save_cursor(self, cursor: HarvestCursor) -> None:
        path = self._path(CURSOR_FILE)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(cursor.to_dict(), sort_keys=True) + "\n", encoding="utf-8")

    def harvest(
        self,
        endpoint: Optional[str] = None,
        *,
        from_date: Optional[date] = None,
        max_pages: Optional[int] = None,
        sleep=None,
    ) -> HarvestCursor:
        """Run one harvest round, persisting cursor and stores as pages land.

        ``from_date`` discards any persisted cursor and starts a fresh round
        from that datestamp. On failure the cursor of the last completed
        page is already on disk, so the round can resume.
        """
        endpoint = endpoint or self.config.harvest_endpoint
        if not endpoint:
            raise ValueError("no harvest endpoint configured")
        if from_date is not None:
            cursor = HarvestCursor(from_date, None, 0)
        else:
            cursor = self.load_cursor() or HarvestCursor(
                datetime.now(timezone.utc).date(), None, 0
            )
        self.data_dir.mkdir(parents=True, exist_ok=True)

        def handle_records(records: list[PaperRecord]) -> None:
            for record in records:
                self.papers.upsert(record)
                self.index.index_paper(record)

        def on_page(advanced: HarvestCursor) -> None:
            self.save_cursor(advanced)

        kwargs = {"max_pages": max_pages, "on_page": on_page}
        if sleep is not None:
            kwargs["sleep"] = sleep
        try:
            cursor = run_harvest_round(endpoint, cursor, handle_records, **kwargs)
        finally:
            self.papers.save(self._path(PAPERS_FILE))
            self.index.save(self._path(INDEX_FILE))
        return cursor

    def rebuild_index(self) -> int:
        """Re-index every stored paper and persist the result."""
        index = SearchIndex()
        for record in self.papers.all():
            index.index_paper(record)
        self.index = index
        self.data_dir.mkdir(parents=True, exist_ok=True)
        index.save(self._path(INDEX_FILE))
        return len(index)

    def save_all(self) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.papers.save(self._path(PAPERS_FILE))
        self.mentions.save(self._path(MENTIONS_FILE))
        self.collections.save(self._path(COLLECTIONS_FILE))
        self.index.save(self._path(INDEX_FILE))

    def close(self) -> None:
        if self.thumbs is not None:
            self.thumbs.shutdown()
