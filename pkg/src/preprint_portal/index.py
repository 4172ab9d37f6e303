"""Tokenization, the per-field inverted index, and BM25 relevance scoring.

Queries use OR semantics: a document is a candidate when it matches at
least one query token in at least one masked field. Scores sum per-field
BM25 contributions, each field with its own document frequencies and
average length. There is no stemming and no stopword removal, which keeps
the scorer exactly reproducible by a linear scan over the raw records.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
import struct
import zlib
from pathlib import Path
from typing import Iterable

from . import ranking
from .errors import CorruptIndex, InvalidQuery, StorageFailure, UnknownDocument
from .locks import ReadWriteLock
from .models import SEARCHABLE_FIELDS, PaperRecord, RankedHit, SearchQuery

K1 = 1.2
B = 0.75

PER_PAGE_MAX = 100

_WORD_RE = re.compile(r"\w+", re.UNICODE)

_MAGIC = b"PPIX"
_FORMAT_VERSION = 1


def tokenize(text: str) -> list[str]:
    """Split on Unicode word boundaries and lowercase; keep numeric tokens."""
    return _WORD_RE.findall(text.lower())


def field_text(record: PaperRecord, field: str) -> str:
    if field == "title":
        return record.title
    if field == "abstract":
        return record.abstract
    if field == "authors":
        return " ".join(record.authors)
    if field == "categories":
        return " ".join(record.categories)
    if field == "arxiv_id":
        return record.arxiv_id
    raise ValueError(f"unknown field: {field}")


def _unique(tokens: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    out: list[str] = []
    for t in tokens:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


class IndexStats:
    """Read-only view of the statistics behind the scorer."""

    def __init__(self, index: "SearchIndex"):
        self._index = index

    @property
    def doc_count(self) -> int:
        return len(self._index._docs)

    def df(self, field: str, term: str) -> int:
        return len(self._index._postings[field].get(term, {}))

    def avgdl(self, field: str) -> float:
        n = self.doc_count
        return self._index._total_len[field] / n if n else 0.0


class SearchIndex:
    """Inverted index over the five metadata fields of the paper store."""

    def __init__(self):
        self._lock = ReadWriteLock()
        # field -> term -> arxiv_id -> term frequency
        self._postings: dict[str, dict[str, dict[str, int]]] = {
            f: {} for f in SEARCHABLE_FIELDS
        }
        # field -> arxiv_id -> token count
        self._doc_len: dict[str, dict[str, int]] = {f: {} for f in SEARCHABLE_FIELDS}
        self._total_len: dict[str, int] = {f: 0 for f in SEARCHABLE_FIELDS}
        # arxiv_id -> field -> terms present, so replacement can drop postings
        self._doc_terms: dict[str, dict[str, tuple[str, ...]]] = {}
        self._docs: set[str] = set()

    def __len__(self) -> int:
        return len(self._docs)

    def __contains__(self, arxiv_id: str) -> bool:
        return arxiv_id in self._docs

    def stats(self) -> IndexStats:
        return IndexStats(self)

    # --- writing ----------------------------------------------------

    def index_paper(self, record: PaperRecord) -> None:
        """Add or replace a document; replacement leaves no stale postings."""
        with self._lock.write():
            if record.arxiv_id in self._docs:
                self._remove_unlocked(record.arxiv_id)
            pid = record.arxiv_id
            terms_by_field: dict[str, tuple[str, ...]] = {}
            for f in SEARCHABLE_FIELDS:
                tokens = tokenize(field_text(record, f))
                counts: dict[str, int] = {}
                for t in tokens:
                    counts[t] = counts.get(t, 0) + 1
                postings = self._postings[f]
                for t, tf in counts.items():
                    postings.setdefault(t, {})[pid] = tf
                self._doc_len[f][pid] = len(tokens)
                self._total_len[f] += len(tokens)
                terms_by_field[f] = tuple(counts)
            self._doc_terms[pid] = terms_by_field
            self._docs.add(pid)

    def _remove_unlocked(self, pid: str) -> None:
        for f, terms in self._doc_terms.pop(pid).items():
            postings = self._postings[f]
            for t in terms:
                plist = postings[t]
                del plist[pid]
                if not plist:
                    del postings[t]
            self._total_len[f] -= self._doc_len[f].pop(pid)
        self._docs.discard(pid)

    # --- scoring ----------------------------------------------------

    def _idf(self, field: str, term: str) -> float:
        n = len(self._docs)
        df = len(self._postings[field].get(term, {}))
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def _mask_fields(self, fields: frozenset[str]) -> list[str]:
        if not fields:
            return list(SEARCHABLE_FIELDS)
        return [f for f in SEARCHABLE_FIELDS if f in fields]

    def bm25_score(
        self, query_tokens: Iterable[str], doc_id: str, fields: frozenset[str] = frozenset()
    ) -> float:
        """Score one indexed document against the query tokens.

        score = sum over masked fields and distinct query terms of
        idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))
        with idf = ln(1 + (N - df + 0.5) / (df + 0.5)); terms absent from
        the document contribute nothing.
        """
        terms = _unique(query_tokens)
        with self._lock.read():
            if doc_id not in self._docs:
                raise UnknownDocument(doc_id)
            n = len(self._docs)
            score = 0.0
            for f in self._mask_fields(fields):
                avg = self._total_len[f] / n
                dl = self._doc_len[f].get(doc_id, 0)
                for t in terms:
                    tf = self._postings[f].get(t, {}).get(doc_id)
                    if not tf:
                        continue
                    norm = tf + K1 * (1.0 - B + B * dl / avg)
                    score += self._idf(f, t) * tf * (K1 + 1.0) / norm
            return score

    def _score_candidates(
        self, query_tokens: list[str], fields: frozenset[str]
    ) -> dict[str, float]:
        """Accumulate BM25 over the postings of every query token (OR)."""
        n = len(self._docs)
        scores: dict[str, float] = {}
        for f in self._mask_fields(fields):
            avg = self._total_len[f] / n if n else 0.0
            dl_map = self._doc_len[f]
            for t in query_tokens:
                plist = self._postings[f].get(t)
                if not plist:
                    continue
                idf = self._idf(f, t)
                for pid, tf in plist.items():
                    norm = tf + K1 * (1.0 - B + B * dl_map[pid] / avg)
                    scores[pid] = scores.get(pid, 0.0) + idf * tf * (K1 + 1.0) / norm
        return scores

    # --- searching --------------------------------------------------

    def search(
        self, query: SearchQuery, signals: "ranking.Signals"
    ) -> tuple[list[RankedHit], int]:
        """Run a query: candidates, scores, mode ordering, then pagination.

        Returns the requested page and the total size of the ordered list.
        Empty query text puts the whole corpus up for ranking (browse mode).
        """
        if query.page < 1:
            raise InvalidQuery(f"page must be >= 1, got {query.page}")
        if not 1 <= query.per_page <= PER_PAGE_MAX:
            raise InvalidQuery(f"per_page must be in [1, {PER_PAGE_MAX}], got {query.per_page}")
        unknown = set(query.fields) - set(SEARCHABLE_FIELDS)
        if unknown:
            raise InvalidQuery(f"unknown search fields: {sorted(unknown)}")

        tokens = _unique(tokenize(query.text))
        with self._lock.read():
            if tokens:
                scores = self._score_candidates(tokens, query.fields)
                candidates = set(scores)
            else:
                scores = {}
                candidates = set(self._docs)

        hits = ranking.rank(
            candidates, query.sort, query.time_range, _QuerySignals(signals, scores)
        )
        start = (query.page - 1) * query.per_page
        return hits[start : start + query.per_page], len(hits)

    # --- persistence ------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Write the index in the versioned on-disk format, atomically."""
        with self._lock.read():
            state = {
                "postings": self._postings,
                "doc_len": self._doc_len,
                "total_len": self._total_len,
                "docs": sorted(self._docs),
            }
            payload = zlib.compress(json.dumps(state).encode("utf-8"))
        blob = (
            _MAGIC
            + struct.pack(">H", _FORMAT_VERSION)
            + hashlib.sha256(payload).digest()
            + payload
        )
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_bytes(blob)
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageFailure(f"cannot write index to {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "SearchIndex":
        """Load a persisted index; corruption is reported, never repaired."""
        try:
            blob = Path(path).read_bytes()
        except OSError as exc:
            raise StorageFailure(f"cannot read index from {path}: {exc}") from exc
        header_len = len(_MAGIC) + 2 + 32
        if len(blob) < header_len or blob[: len(_MAGIC)] != _MAGIC:
            raise CorruptIndex(f"{path}: not an index file (bad magic)")
        (version,) = struct.unpack(">H", blob[len(_MAGIC) : len(_MAGIC) + 2])
        if version != _FORMAT_VERSION:
            raise CorruptIndex(f"{path}: unsupported format version {version}")
        digest = blob[len(_MAGIC) + 2 : header_len]
        payload = blob[header_len:]
        if hashlib.sha256(payload).digest() != digest:
            raise CorruptIndex(f"{path}: checksum mismatch")
        try:
            state = json.loads(zlib.decompress(payload))
        except (zlib.error, json.JSONDecodeError) as exc:
            raise CorruptIndex(f"{path}: undecodable payload: {exc}") from exc

        index = cls()
        index._postings = {
            f: {t: dict(plist) for t, plist in terms.items()}
            for f, terms in state["postings"].items()
        }
        index._doc_len = {f: dict(m) for f, m in state["doc_len"].items()}
        index._total_len = dict(state["total_len"])
        index._docs = set(state["docs"])
        index._doc_terms = {pid: {} for pid in index._docs}
        for f, terms in index._postings.items():
            by_doc: dict[str, list[str]] = {}
            for t, plist in terms.items():
                for pid in plist:
                    by_doc.setdefault(pid, []).append(t)
            for pid in index._docs:
                index._doc_terms[pid][f] = tuple(by_doc.get(pid, ()))
        return index


class _QuerySignals:
    """Store-backed signals plus this query's relevance scores."""

    def __init__(self, base, scores: dict[str, float]):
        self._base = base
        self._scores = scores

    def latest_date(self, arxiv_id):
        return self._base.latest_date(arxiv_id)

    def mention_count(self, arxiv_id, time_range):
        return self._base.mention_count(arxiv_id, time_range)

    def collection_count(self, arxiv_id):
        return self._base.collection_count(arxiv_id)

    def relevance(self, arxiv_id) -> float:
        return self._scores.get(arxiv_id, 0.0)
