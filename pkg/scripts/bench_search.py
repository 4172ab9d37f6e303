"""Search latency benchmark over a synthetic corpus.

Builds an in-memory index of --docs records drawn from a fixed-size
vocabulary, fires --queries random one- and two-term relevance queries,
and reports build time plus latency percentiles. Numbers are for the
pure index path; the HTTP layer adds roughly a millisecond on top.

Usage:
    python3 scripts/bench_search.py --docs 50000 --queries 200
"""

from __future__ import annotations

import argparse
import random
import statistics
import time
from datetime import datetime, timedelta, timezone

from preprint_portal.index import SearchIndex
from preprint_portal.models import PaperRecord, SearchQuery, SortMode, VersionInfo


def synthetic_corpus(n_docs: int, vocab_size: int, rng: random.Random):
    vocab = [f"term{i:04d}" for i in range(vocab_size)]
    epoch = datetime(2017, 1, 1, tzinfo=timezone.utc)
    records = []
    for i in range(n_docs):
        when = epoch + timedelta(seconds=rng.randrange(3 * 365 * 86400))
        records.append(
            PaperRecord(
                arxiv_id=f"17{(i % 12) + 1:02d}.{50000 + i:05d}",
                title=" ".join(rng.choices(vocab, k=4)),
                abstract=" ".join(rng.choices(vocab, k=25)),
                authors=("Benchmark Author",),
                categories=("cs.IR",),
                versions=(VersionInfo(1, when),),
            )
        )
    return records, vocab


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=50_000)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--vocab", type=int, default=6_000)
    parser.add_argument("--seed", type=int, default=41)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    records, vocab = synthetic_corpus(args.docs, args.vocab, rng)

    t0 = time.perf_counter()
    index = SearchIndex()
    for record in records:
        index.index_paper(record)
    build = time.perf_counter() - t0
    print(f"indexed {args.docs} docs in {build:.2f}s")

    class _NullSignals:
        # relevance mode only touches scores, which search supplies itself
        def latest_date(self, pid):
            raise LookupError(pid)

        def mention_count(self, pid, time_range):
            return 0

        def collection_count(self, pid):
            return 0

        def relevance(self, pid):
            return 0.0

    signals = _NullSignals()
    timings = []
    for _ in range(args.queries):
        terms = rng.sample(vocab, rng.choice((1, 2)))
        query = SearchQuery(text=" ".join(terms), sort=SortMode.RELEVANCE, per_page=20)
        t0 = time.perf_counter()
        index.search(query, signals)
        timings.append(time.perf_counter() - t0)

    timings.sort()
    pct = statistics.quantiles(timings, n=100)
    print(f"queries   {args.queries}")
    print(f"p50       {pct[49] * 1000:.2f} ms")
    print(f"p95       {pct[94] * 1000:.2f} ms")
    print(f"p99       {pct[98] * 1000:.2f} ms")
    print(f"max       {timings[-1] * 1000:.2f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
