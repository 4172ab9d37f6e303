import json
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, settings, strategies as st

from preprint_portal.errors import StorageFailure
from preprint_portal.mentions import MentionStore
from preprint_portal.models import TimeRange

from tests.conftest import make_corpus, make_mention_log
from tests.oracles import mention_counts_reference

UTC = timezone.utc

PIDS = [p.arxiv_id for p in make_corpus(30, seed=21)]


def line(tweet_id, pid=None, ts="2017-12-01T10:00:00Z", **extra):
    payload = {
        "tweet_id": tweet_id,
        "arxiv_id": pid or PIDS[0],
        "timestamp": ts,
        "url": f"https://twitter.example/{tweet_id}",
    }
    payload.update(extra)
    return json.dumps(payload)


def test_empty_stream():
    report = MentionStore().ingest([])
    assert (report.accepted, report.duplicates, report.rejected) == (0, 0, 0)


def test_duplicate_tweet_ids_counted_not_stored():
    store = MentionStore()
    report = store.ingest([line("tw-1"), line("tw-2"), line("tw-1")])
    assert report.accepted == 2
    assert report.duplicates == 1
    assert store.mention_count(PIDS[0]) == 2


def test_malformed_lines_rejected_without_derailing_the_rest():
    store = MentionStore()
    lines = [
        line("tw-1"),
        '{"tweet_id": "tw-2", "arxiv_id": "%s", "url": "u"}' % PIDS[0],  # no timestamp
        "not json at all",
        '{"tweet_id": "", "arxiv_id": "%s", "timestamp": "2017-12-01T10:00:00Z", "url": "u"}' % PIDS[0],
        line("tw-3"),
    ]
    report = store.ingest(lines)
    assert report.accepted == 2
    assert report.rejected == 3


def test_blank_lines_are_not_rejections():
    report = MentionStore().ingest(["", "   ", line("tw-1"), "\n"])
    assert report.accepted == 1
    assert report.rejected == 0


def test_reingesting_a_file_changes_nothing():
    lines, _ = make_mention_log(PIDS, 300, dup_fraction=0.1, seed=5)
    store = MentionStore()
    first = store.ingest(lines)
    size = len(store)
    second = store.ingest(lines)
    assert second.accepted == 0
    assert second.duplicates == first.accepted + first.duplicates
    assert len(store) == size


def test_persist_failure_carries_partial_progress():
    calls = []

    def flaky(event):
        if len(calls) == 2:
            raise OSError("disk full")
        calls.append(event)

    store = MentionStore()
    with pytest.raises(StorageFailure) as excinfo:
        store.ingest([line("tw-1"), line("tw-2"), line("tw-3")], persist=flaky)
    assert excinfo.value.partial_report.accepted == 2


def test_windowed_count_example():
    # events at t1 < t2 < t3, window covering only t2
    store = MentionStore()
    base = datetime(2017, 12, 1, tzinfo=UTC)
    store.ingest(
        [
            line("tw-%d" % i, ts=(base + timedelta(days=i)).strftime("%Y-%m-%dT%H:%M:%SZ"))
            for i in range(3)
        ]
    )
    window = TimeRange(base + timedelta(hours=12), base + timedelta(days=1, hours=12))
    assert store.mention_count(PIDS[0], window) == 1
    assert store.mention_count(PIDS[0]) == 3
    assert store.mention_count("2001.00001") == 0


def test_mentions_for_orders_newest_first_with_id_tiebreak():
    store = MentionStore()
    same_ts = "2017-12-05T10:00:00Z"
    store.ingest([line("tw-a", ts=same_ts), line("tw-c", ts=same_ts), line("tw-b", ts="2017-12-06T10:00:00Z")])
    got = store.mentions_for(PIDS[0], limit=10)
    assert [e.tweet_id for e in got] == ["tw-b", "tw-c", "tw-a"]
    assert [e.tweet_id for e in store.mentions_for(PIDS[0], limit=2)] == ["tw-b", "tw-c"]
    assert store.mentions_for("2001.00001", limit=3) == []
    with pytest.raises(ValueError):
        store.mentions_for(PIDS[0], limit=0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), span_days=st.integers(1, 500), offset=st.integers(0, 1000))
def test_windowed_counts_match_group_by(seed, span_days, offset):
    lines, events = make_mention_log(PIDS, 150, dup_fraction=0.2, seed=seed)
    store = MentionStore()
    store.ingest(lines)
    start = datetime(2016, 1, 1, tzinfo=UTC) + timedelta(days=offset)
    window = TimeRange(start, start + timedelta(days=span_days))
    expected = mention_counts_reference(events, window)
    for pid in PIDS:
        assert store.mention_count(pid, window) == expected.get(pid, 0)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), cut_days=st.integers(1, 1459))
def test_disjoint_windows_sum_to_all_time(seed, cut_days):
    lines, _ = make_mention_log(PIDS, 200, seed=seed)
    store = MentionStore()
    store.ingest(lines)
    lo = datetime(2015, 1, 1, tzinfo=UTC)
    cut = lo + timedelta(days=cut_days)
    hi = datetime(2021, 1, 1, tzinfo=UTC)
    for pid in PIDS[:10]:
        total = store.mention_count(pid)
        left = store.mention_count(pid, TimeRange(lo, cut))
        right = store.mention_count(pid, TimeRange(cut, hi))
        assert left + right == total


def test_save_load_round_trip(tmp_path):
    lines, _ = make_mention_log(PIDS, 80, dup_fraction=0.1, seed=3)
    store = MentionStore()
    store.ingest(lines)
    path = tmp_path / "mentions.jsonl"
    store.save(path)
    loaded = MentionStore.load(path)
    assert len(loaded) == len(store)
    for pid in PIDS:
        assert loaded.mention_count(pid) == store.mention_count(pid)
