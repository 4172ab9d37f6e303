"""Shared fixtures: deterministic corpora, mention logs, PDFs, portals."""

from __future__ import annotations

import json
import random
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest
from PIL import Image

from preprint_portal.config import PortalConfig
from preprint_portal.models import (
    CollectionEntry,
    MentionEvent,
    PaperRecord,
    VersionInfo,
)
from preprint_portal.service import Portal

WORDS = (
    "quantum gauge lattice neural network deep learning transformer attention "
    "graph spectral entropy manifold stochastic gradient descent convex sparse "
    "bayesian inference kernel tensor field theory boson fermion symmetry "
    "breaking holographic duality cosmology inflation dark matter galaxy "
    "cluster protein folding genome sequence alignment compiler verification "
    "type system distributed consensus byzantine replication cache coherence "
    "speech recognition translation summarization retrieval ranking index"
).split()

AUTHOR_POOL = (
    "Ada Lovelace", "Emmy Noether", "Paul Dirac", "Chien-Shiung Wu",
    "Alan Turing", "Grace Hopper", "David Hilbert", "Lise Meitner",
    "Richard Feynman", "Maryam Mirzakhani", "Claude Shannon", "Vera Rubin",
)

CATEGORY_POOL = (
    "cs.AI", "cs.CL", "cs.LG", "cs.DS", "math.CO", "math.PR",
    "hep-th", "astro-ph.GA", "quant-ph", "stat.ML",
)

LEGACY_ARCHIVES = ("hep-th", "astro-ph", "math.GT")

EPOCH = datetime(2016, 1, 1, tzinfo=timezone.utc)
SPAN_SECONDS = int(timedelta(days=4 * 365).total_seconds())

RASTERIZER_CMD = (sys.executable, str(Path(__file__).parent / "rasterizer_stub.py"))


def _random_dt(rng: random.Random, *, midnight: bool) -> datetime:
    moment = EPOCH + timedelta(seconds=rng.randrange(SPAN_SECONDS))
    if midnight:
        return moment.replace(hour=0, minute=0, second=0, microsecond=0)
    return moment.replace(microsecond=0)


def make_corpus(n: int, seed: int = 7, *, midnight: bool = False) -> list[PaperRecord]:
    rng = random.Random(seed)
    records = []
    for i in range(n):
        if rng.random() < 0.05:
            archive = rng.choice(LEGACY_ARCHIVES)
            arxiv_id = f"{archive}/{rng.randrange(98, 100):02d}{rng.randrange(1, 13):02d}{i % 1000:03d}"
        else:
            yy = rng.randrange(16, 19)
            mm = rng.randrange(1, 13)
            arxiv_id = f"{yy:02d}{mm:02d}.{10000 + i:05d}"
        base = _random_dt(rng, midnight=midnight)
        versions = []
        for v in range(1, rng.randrange(1, 4) + 1):
            versions.append(VersionInfo(v, base))
            base = base + timedelta(days=rng.randrange(1, 90))
            if midnight:
                base = base.replace(hour=0, minute=0, second=0)
        records.append(
            PaperRecord(
                arxiv_id=arxiv_id,
                versions=tuple(versions),
                title=" ".join(rng.sample(WORDS, rng.randrange(3, 8))).capitalize(),
                authors=tuple(rng.sample(AUTHOR_POOL, rng.randrange(1, 4))),
                abstract=" ".join(rng.choices(WORDS, k=rng.randrange(20, 50))) + ".",
                categories=tuple(
                    dict.fromkeys(rng.sample(CATEGORY_POOL, rng.randrange(1, 4)))
                ),
            )
        )
    return records


def make_mention_log(
    paper_ids, n_events: int, *, dup_fraction: float = 0.0, seed: int = 11
) -> tuple[list[str], list[MentionEvent]]:
    """Returns (jsonl lines, expected accepted events in line order)."""
    rng = random.Random(seed)
    ids = list(paper_ids)
    accepted: list[MentionEvent] = []
    lines: list[str] = []
    n_dups = int(n_events * dup_fraction)
    n_fresh = n_events - n_dups
    for i in range(n_fresh):
        event = MentionEvent(
            tweet_id=f"tw-{seed}-{i:06d}",
            arxiv_id=rng.choice(ids),
            timestamp=_random_dt(rng, midnight=False),
            url=f"https://twitter.example/status/{seed}{i:06d}",
            author_handle=rng.choice(("@alice", "@bob", None)),
        )
        accepted.append(event)
        lines.append(
            json.dumps(
                {
                    "tweet_id": event.tweet_id,
                    "arxiv_id": event.arxiv_id,
                    "timestamp": event.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                    "url": event.url,
                    **(
                        {"author_handle": event.author_handle}
                        if event.author_handle
                        else {}
                    ),
                }
            )
        )
    for _ in range(n_dups):
        lines.append(lines[rng.randrange(n_fresh)])
    rng.shuffle(lines)
    # dedup keeps the first occurrence; identical payloads make order moot
    return lines, accepted


def make_entries(paper_ids, n: int, *, n_users: int = 40, seed: int = 13) -> list[CollectionEntry]:
    rng = random.Random(seed)
    ids = list(paper_ids)
    n = min(n, n_users * len(ids))  # cannot mint more unique pairs than exist
    pairs = set()
    entries = []
    while len(entries) < n:
        pair = (f"user-{rng.randrange(n_users):03d}", rng.choice(ids))
        if pair in pairs:
            continue
        pairs.add(pair)
        entries.append(CollectionEntry(pair[0], pair[1], _random_dt(rng, midnight=False)))
    return entries


def make_pdf(path: Path, n_pages: int, *, size=(120, 160)) -> Path:
    pages = [
        Image.new("RGB", size, (250 - 9 * i % 120, 250, 255)) for i in range(n_pages)
    ]
    pages[0].save(path, "PDF", save_all=True, append_images=pages[1:])
    return path


@pytest.fixture(scope="session")
def corpus200() -> list[PaperRecord]:
    return make_corpus(200, seed=7)


@pytest.fixture
def portal_factory(tmp_path):
    """Builds portals rooted in the test's tmp dir, pre-seeded on request."""
    built = []

    def build(records=(), *, rasterizer=False, **config_overrides) -> Portal:
        data_dir = tmp_path / f"data{len(built)}"
        config = PortalConfig(
            data_dir=str(data_dir),
            rasterizer=RASTERIZER_CMD if rasterizer else (),
            **config_overrides,
        )
        portal = Portal.open(config)
        for record in records:
            portal.papers.upsert(record)
            portal.index.index_paper(record)
        built.append(portal)
        return portal

    yield build
    for portal in built:
        portal.close()
