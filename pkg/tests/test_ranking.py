import random
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, settings, strategies as st

from preprint_portal.errors import MissingSignal
from preprint_portal.models import SortMode, TimeRange
from preprint_portal.ranking import filter_by_date, rank

from tests.conftest import make_corpus, make_entries, make_mention_log
from tests.oracles import rank_reference

UTC = timezone.utc


class DictSignals:
    def __init__(self, latest=None, mentions=None, collections=None, scores=None):
        self.latest = latest or {}
        self.mentions = mentions or {}
        self.collections = collections or {}
        self.scores = scores or {}

    def latest_date(self, arxiv_id):
        return self.latest[arxiv_id]

    def mention_count(self, arxiv_id, time_range):
        events = self.mentions.get(arxiv_id, ())
        if time_range is None:
            return len(events)
        return sum(1 for ts in events if time_range.start <= ts < time_range.end)

    def collection_count(self, arxiv_id):
        return self.collections.get(arxiv_id, 0)

    def relevance(self, arxiv_id):
        return self.scores.get(arxiv_id, 0.0)


def dt(day, hour=0):
    return datetime(2017, 12, day, hour, tzinfo=UTC)


def ids(hits):
    return [h.arxiv_id for h in hits]


def test_twitter_without_range_keeps_zero_count_papers():
    signals = DictSignals(
        mentions={"1712.0000%d" % i: [dt(d) for d in days] for i, days in ((1, (1, 2, 3)), (2, (5,)), (3, ()))}
    )
    hits = rank({"1712.00001", "1712.00002", "1712.00003"}, SortMode.TWITTER, None, signals)
    assert ids(hits) == ["1712.00001", "1712.00002", "1712.00003"]
    assert [h.sort_key for h in hits] == [3, 1, 0]


def test_twitter_with_range_counts_and_excludes_in_window():
    signals = DictSignals(
        mentions={
            "1712.00001": [dt(1, 9), dt(1, 15), dt(20)],
            "1712.00002": [dt(20)],
        }
    )
    window = TimeRange(dt(1), dt(2))
    hits = rank({"1712.00001", "1712.00002"}, SortMode.TWITTER, window, signals)
    assert ids(hits) == ["1712.00001"]
    assert hits[0].sort_key == 2


def test_date_ties_break_by_id_descending():
    signals = DictSignals(latest={"1712.00001": dt(5), "1712.00009": dt(5)})
    hits = rank({"1712.00001", "1712.00009"}, SortMode.DATE, None, signals)
    assert ids(hits) == ["1712.00009", "1712.00001"]


@pytest.mark.parametrize("mode", [SortMode.DATE, SortMode.RELEVANCE, SortMode.COLLECTION])
def test_range_excludes_papers_dated_outside(mode):
    signals = DictSignals(
        latest={"1712.00001": dt(1), "1712.00002": dt(10)},
        collections={"1712.00001": 4, "1712.00002": 9},
        scores={"1712.00001": 2.0, "1712.00002": 5.0},
    )
    hits = rank({"1712.00001", "1712.00002"}, mode, TimeRange(dt(1), dt(2)), signals)
    assert ids(hits) == ["1712.00001"]


def test_filter_by_date_boundaries():
    latest = {"a": dt(1), "b": dt(2)}
    window = TimeRange(dt(1), dt(2))
    kept = filter_by_date({"a", "b"}, window, latest.__getitem__)
    assert kept == {"a"}  # start inclusive, end exclusive


def test_missing_signal_is_reported():
    with pytest.raises(MissingSignal):
        rank({"1712.00001"}, SortMode.DATE, None, DictSignals())


def test_relevance_scores_survive_mode_switches():
    signals = DictSignals(
        latest={"1712.00001": dt(1), "1712.00002": dt(2)},
        scores={"1712.00001": 1.5, "1712.00002": 0.5},
    )
    for mode in SortMode:
        hits = rank({"1712.00001", "1712.00002"}, mode, None, signals)
        assert {h.arxiv_id: h.relevance_score for h in hits} == {
            "1712.00001": 1.5,
            "1712.00002": 0.5,
        }


# --- randomized equivalence with the brute-force oracle -------------------


def build_fixture(seed):
    rng = random.Random(seed)
    papers = make_corpus(rng.randrange(1, 40), seed=seed)
    pids = [p.arxiv_id for p in papers]
    _, events = make_mention_log(pids, rng.randrange(0, 120), seed=seed + 1)
    entries = make_entries(pids, rng.randrange(0, 60), seed=seed + 2)
    scores = {pid: rng.random() * 5 for pid in rng.sample(pids, len(pids) // 2)}

    mentions_by_paper = {}
    for event in events:
        mentions_by_paper.setdefault(event.arxiv_id, []).append(event.timestamp)
    users_by_paper = {}
    for entry in entries:
        users_by_paper.setdefault(entry.arxiv_id, set()).add(entry.user_id)
    signals = DictSignals(
        latest={p.arxiv_id: p.latest_date for p in papers},
        mentions=mentions_by_paper,
        collections={pid: len(users) for pid, users in users_by_paper.items()},
        scores=scores,
    )
    return papers, events, entries, scores, signals


def random_range(rng):
    if rng.random() < 0.3:
        return None
    start = datetime(2016, 1, 1, tzinfo=UTC) + timedelta(days=rng.randrange(0, 1400))
    return TimeRange(start, start + timedelta(days=rng.randrange(1, 400)))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 100_000), mode=st.sampled_from(list(SortMode)))
def test_rank_equals_brute_force(seed, mode):
    rng = random.Random(seed ^ 0xBEEF)
    papers, events, entries, scores, signals = build_fixture(seed)
    window = random_range(rng)
    candidates = {p.arxiv_id for p in papers}

    hits = rank(candidates, mode, window, signals)
    expected = rank_reference(
        candidates,
        mode.value,
        window,
        latest={p.arxiv_id: p.latest_date for p in papers},
        events=events,
        entries=entries,
        scores=scores,
    )
    assert ids(hits) == expected


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000), mode=st.sampled_from(list(SortMode)))
def test_rank_output_is_a_sorted_permutation(seed, mode):
    rng = random.Random(seed)
    papers, _, _, _, signals = build_fixture(seed)
    window = random_range(rng)
    candidates = {p.arxiv_id for p in papers}
    hits = rank(candidates, mode, window, signals)

    got = ids(hits)
    assert len(got) == len(set(got))
    assert set(got) <= candidates
    # keys never increase; equal keys strictly decreasing ids
    for left, right in zip(hits, hits[1:]):
        assert left.sort_key >= right.sort_key
        if left.sort_key == right.sort_key:
            assert left.arxiv_id > right.arxiv_id


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_wider_window_never_shrinks_twitter_results(seed):
    rng = random.Random(seed + 5)
    papers, _, _, _, signals = build_fixture(seed)
    candidates = {p.arxiv_id for p in papers}
    start = datetime(2016, 6, 1, tzinfo=UTC) + timedelta(days=rng.randrange(0, 600))
    inner = TimeRange(start, start + timedelta(days=rng.randrange(1, 200)))
    outer = TimeRange(
        inner.start - timedelta(days=rng.randrange(0, 200)),
        inner.end + timedelta(days=rng.randrange(0, 200) + 1),
    )
    narrow = set(ids(rank(candidates, SortMode.TWITTER, inner, signals)))
    wide = set(ids(rank(candidates, SortMode.TWITTER, outer, signals)))
    assert narrow <= wide
