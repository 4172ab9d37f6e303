"""Seed a demo data directory so the portal can be served without a harvest.

Generates a small synthetic corpus with mentions and user collections,
persists everything under --data-dir, and writes a matching config file.
Afterwards:

    portal serve --config demo_config.json

and browse http://127.0.0.1:8571/api/search
"""

from __future__ import annotations

import argparse
import json
import random
from datetime import datetime, timedelta, timezone

from preprint_portal.config import PortalConfig
from preprint_portal.models import PaperRecord, VersionInfo
from preprint_portal.service import Portal

TITLE_WORDS = (
    "sparse attention retrieval ranking graph neural latent variational "
    "bayesian contrastive diffusion robust causal spectral adaptive scalable"
).split()

ABSTRACT_WORDS = TITLE_WORDS + (
    "we propose method model results benchmark dataset training inference "
    "estimator bound empirical analysis evaluation state art improves margin"
).split()

AUTHORS = (
    "Ada Lindqvist", "Rohan Mehta", "Yuki Tanaka", "Clara Fontaine",
    "Dmitri Volkov", "Amara Okafor", "Lucas Ferreira", "Ingrid Sorensen",
)

CATEGORIES = ("cs.IR", "cs.CL", "cs.LG", "stat.ML", "math.ST", "hep-th")

EPOCH = datetime(2017, 6, 1, tzinfo=timezone.utc)


def make_papers(n: int, rng: random.Random) -> list[PaperRecord]:
    papers = []
    for i in range(n):
        first = EPOCH + timedelta(days=rng.randrange(540), hours=rng.randrange(24))
        versions = [VersionInfo(1, first)]
        if rng.random() < 0.3:
            versions.append(VersionInfo(2, first + timedelta(days=rng.randrange(5, 60))))
        month = first.strftime("%y%m")
        papers.append(
            PaperRecord(
                arxiv_id=f"{month}.{1000 + i:05d}",
                title=" ".join(rng.sample(TITLE_WORDS, 5)).capitalize(),
                abstract=" ".join(rng.choices(ABSTRACT_WORDS, k=40)),
                authors=tuple(rng.sample(AUTHORS, rng.randint(1, 3))),
                categories=tuple(rng.sample(CATEGORIES, rng.randint(1, 2))),
                versions=tuple(versions),
            )
        )
    return papers


def make_mention_lines(papers, n: int, rng: random.Random) -> list[str]:
    lines = []
    for i in range(n):
        paper = rng.choice(papers)
        when = paper.latest_date + timedelta(hours=rng.randrange(1, 24 * 30))
        event = {
            "tweet_id": str(90_000_000 + i),
            "arxiv_id": paper.arxiv_id,
            "timestamp": when.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "url": f"https://twitter.com/i/status/{90_000_000 + i}",
        }
        if rng.random() < 0.7:
            event["author_handle"] = f"reader{rng.randrange(40)}"
        lines.append(json.dumps(event))
    return lines


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", default="demo_data")
    parser.add_argument("--config-out", default="demo_config.json")
    parser.add_argument("--papers", type=int, default=24)
    parser.add_argument("--mentions", type=int, default=160)
    parser.add_argument("--seed", type=int, default=2017)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    config = PortalConfig(data_dir=args.data_dir)
    portal = Portal.open(config)

    papers = make_papers(args.papers, rng)
    for paper in papers:
        portal.papers.upsert(paper)
        portal.index.index_paper(paper)

    report = portal.ingest_mentions(make_mention_lines(papers, args.mentions, rng))

    users = ("alice", "bob", "carol")
    added = 0
    for user in users:
        for paper in rng.sample(papers, rng.randint(2, 6)):
            portal.add_to_collection(user, paper.arxiv_id)
            added += 1

    portal.save_all()
    portal.close()
    config.save(args.config_out)

    print(f"seeded {len(papers)} papers, {report.accepted} mentions, {added} collection entries")
    print(f"data dir: {args.data_dir}")
    print(f"next:     portal serve --config {args.config_out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
