"""Forge client, record serialization, cache semantics and fix resolution."""

import json

import pytest
import requests

from bugscope.miner import (
    AuthError,
    FileDiff,
    FixRecord,
    ForgeClient,
    IssueRecord,
    MissingTimestamp,
    NetworkError,
    OfflineError,
    PullRequestRecord,
    RateLimited,
    RepoCache,
    days_to_close,
    fetch_issues,
    fetch_pulls,
    message_count,
    resolve_fix,
)

# ---- fake transport ----


class FakeResponse:
    def __init__(self, status_code=200, payload=None, headers=None):
        self.status_code = status_code
        self._payload = payload if payload is not None else []
        self.headers = headers or {}

    def json(self):
        return self._payload


class FakeSession:
    """Scripted responses keyed by path; records every request made."""

    def __init__(self, routes=None, script=None):
        self.routes = routes or {}
        self.script = list(script or [])
        self.calls = []

    def get(self, url, headers=None, params=None, timeout=None):
        self.calls.append((url, dict(params or {})))
        if self.script:
            item = self.script.pop(0)
            if isinstance(item, Exception):
                raise item
            return item
        path = url.split("example.test", 1)[1]
        handler = self.routes[path]
        return handler(params or {}) if callable(handler) else handler


def make_client(session, **kwargs):
    kwargs.setdefault("sleep", lambda s: None)
    return ForgeClient(base_url="https://example.test", token="t0k", session=session, **kwargs)


def test_paged_request_walks_pages():
    items = [{"number": i} for i in range(250)]

    def issues(params):
        page = params["page"]
        per = params["per_page"]
        chunk = items[(page - 1) * per : page * per]
        return FakeResponse(payload=chunk)

    session = FakeSession(routes={"/repos/o/r/issues": issues})
    client = make_client(session)
    got = client.list_issues("o", "r")
    assert [g["number"] for g in got] == list(range(250))
    assert [params["page"] for _, params in session.calls] == [1, 2, 3]


def test_list_issues_drops_interleaved_pull_requests():
    payload = [{"number": 1}, {"number": 2, "pull_request": {"url": "x"}}]
    session = FakeSession(routes={"/repos/o/r/issues": FakeResponse(payload=payload)})
    assert [i["number"] for i in make_client(session).list_issues("o", "r")] == [1]


def test_unauthorized_raises_immediately():
    session = FakeSession(script=[FakeResponse(status_code=401)])
    with pytest.raises(AuthError):
        make_client(session)._get("/repos/o/r/issues")
    assert len(session.calls) == 1


def test_rate_limit_retries_then_gives_up():
    sleeps = []
    limited = FakeResponse(status_code=403, headers={"X-RateLimit-Remaining": "0", "Retry-After": "7"})
    session = FakeSession(script=[limited] * 6)
    client = make_client(session, sleep=sleeps.append)
    with pytest.raises(RateLimited):
        client._get("/x")
    assert len(session.calls) == 6
    assert sleeps == [7.0] * 6


def test_rate_limit_recovers_midway():
    limited = FakeResponse(status_code=429, headers={"Retry-After": "1"})
    ok = FakeResponse(payload={"number": 5})
    session = FakeSession(script=[limited, limited, ok])
    assert make_client(session)._get("/x") == {"number": 5}


def test_rate_limit_reset_header_uses_clock():
    sleeps = []
    limited = FakeResponse(status_code=403, headers={"X-RateLimit-Remaining": "0", "X-RateLimit-Reset": "1100"})
    ok = FakeResponse(payload=[])
    session = FakeSession(script=[limited, ok])
    client = make_client(session, sleep=sleeps.append, clock=lambda: 1000.0)
    client._get("/x")
    assert sleeps == [100.0]


def test_connection_errors_exhaust_to_network_error():
    session = FakeSession(script=[requests.ConnectionError("boom")] * 6)
    with pytest.raises(NetworkError):
        make_client(session)._get("/x")


def test_offline_never_touches_session():
    session = FakeSession()
    client = make_client(session, offline=True)
    with pytest.raises(OfflineError):
        client._get("/x")
    assert session.calls == []


def test_forbidden_without_limit_headers_is_plain_error():
    session = FakeSession(script=[FakeResponse(status_code=404)])
    with pytest.raises(NetworkError):
        make_client(session)._get("/x")


# ---- records ----


def _issue(number=3, **over):
    base = dict(
        number=number,
        title="x flops",
        labels=["Type:Bug"],
        state="closed",
        created_at="2021-02-01T00:00:00Z",
        closed_at="2021-02-11T00:00:00Z",
        comment_count=4,
        linked_prs=[10],
        body="",
    )
    base.update(over)
    return IssueRecord(**base)


def test_record_jsonl_round_trips():
    issue = _issue()
    fd = FileDiff("rtl/a.sv", 3, 1, "module a; endmodule", "module a; logic x; endmodule", True)
    pr = PullRequestRecord(10, "2021-02-10T00:00:00Z", 6, ["abc", "def"], [fd])
    fix = FixRecord(bug=3, source=["pr:10"], files=[fd])
    for rec, cls in [(issue, IssueRecord), (pr, PullRequestRecord), (fix, FixRecord)]:
        wire = json.dumps(rec.to_json_dict())
        assert cls.from_json_dict(json.loads(wire)) == rec


def test_days_to_close():
    assert days_to_close(_issue()) == pytest.approx(10.0)
    same = _issue(closed_at="2021-02-01T00:00:00Z")
    assert days_to_close(same) == 0.0
    with pytest.raises(MissingTimestamp):
        days_to_close(_issue(closed_at=None))


def test_message_count_sums_issue_and_pr_messages():
    pulls = {10: PullRequestRecord(10, "2021-02-10T00:00:00Z", 6, [], [])}
    fix = FixRecord(bug=3, source=["pr:10"])
    assert message_count(_issue(), fix, pulls) == 10
    assert message_count(_issue(), FixRecord(bug=3, source=["commit:abc"]), pulls) == 4
    assert message_count(_issue(), fix, {}) == 4


# ---- cache ----


def test_cache_round_trip_and_missing(tmp_path):
    cache = RepoCache(tmp_path, "o/r")
    assert cache.load("issues") is None
    rows = [{"number": 1}, {"number": 2}]
    cache.save("issues", rows)
    assert cache.load("issues") == rows
    assert (tmp_path / "o__r" / "issues.jsonl").exists()
    assert [p.name for p in (tmp_path / "o__r").glob("*.tmp*")] == []


def test_cache_meta(tmp_path):
    cache = RepoCache(tmp_path, "o/r")
    assert cache.load_meta() == {}
    cache.save_meta({"repo": "o/r"})
    assert cache.load_meta() == {"repo": "o/r"}


# ---- fetch + resolve over fakes ----


def _timeline_event(pr_number):
    return {
        "event": "cross-referenced",
        "source": {"issue": {"number": pr_number, "pull_request": {"url": "x"}}},
    }


def test_fetch_issues_links_prs_and_caches(tmp_path):
    raw_issue = {
        "number": 3,
        "title": "x flops",
        "labels": [{"name": "Type:Bug"}],
        "state": "closed",
        "created_at": "2021-02-01T00:00:00Z",
        "closed_at": "2021-02-11T00:00:00Z",
        "comments": 4,
        "body": "b",
    }
    session = FakeSession(
        routes={
            "/repos/o/r/issues": FakeResponse(payload=[raw_issue]),
            "/repos/o/r/issues/3/timeline": FakeResponse(
                payload=[_timeline_event(10), {"event": "labeled"}, _timeline_event(10)]
            ),
        }
    )
    cache = RepoCache(tmp_path, "o/r")
    records = fetch_issues(make_client(session), cache, "o/r", labels=["Type:Bug"])
    assert records[0].linked_prs == [10]
    assert cache.load_meta()["labels"] == ["Type:Bug"]

    # warm cache: no session calls at all
    session2 = FakeSession()
    again = fetch_issues(make_client(session2), cache, "o/r", labels=["Type:Bug"])
    assert again == records
    assert session2.calls == []


def test_fetch_issues_bot_filter_counts_humans_only(tmp_path):
    raw_issue = {"number": 1, "comments": 9, "created_at": "2021-01-01T00:00:00Z"}
    comments = [
        {"user": {"login": "alice", "type": "User"}},
        {"user": {"login": "ci[bot]", "type": "User"}},
        {"user": {"login": "robo", "type": "Bot"}},
    ]
    session = FakeSession(
        routes={
            "/repos/o/r/issues": FakeResponse(payload=[raw_issue]),
            "/repos/o/r/issues/1/timeline": FakeResponse(payload=[]),
            "/repos/o/r/issues/1/comments": FakeResponse(payload=comments),
        }
    )
    cache = RepoCache(tmp_path, "o/r")
    records = fetch_issues(make_client(session), cache, "o/r", bot_filter=True)
    assert records[0].comment_count == 1


def test_fetch_pulls_appends_merge_commit_last(tmp_path):
    session = FakeSession(
        routes={
            "/repos/o/r/pulls/10": FakeResponse(
                payload={
                    "number": 10,
                    "merged_at": "2021-02-10T00:00:00Z",
                    "merge_commit_sha": "m3rge",
                    "comments": 2,
                    "review_comments": 3,
                }
            ),
            "/repos/o/r/pulls/10/commits": FakeResponse(payload=[{"sha": "abc"}]),
        }
    )
    cache = RepoCache(tmp_path, "o/r")
    pulls = fetch_pulls(make_client(session), cache, "o/r", [_issue()])
    assert pulls[10].commits == ["abc", "m3rge"]
    assert pulls[10].message_count == 5


def test_resolve_fix_without_any_source_is_excluded():
    fix = resolve_fix(_issue(linked_prs=[]), None, {})
    assert fix.excluded and fix.reason == "no fix found"
    assert fix.files == []


def test_resolve_fix_prefers_merged_pr_files():
    fd = FileDiff("rtl/a.sv", 1, 0, "x", "y", False)
    pulls = {10: PullRequestRecord(10, "2021-02-10T00:00:00Z", 0, ["abc"], [fd])}
    fix = resolve_fix(_issue(), None, pulls)
    assert fix.source == ["pr:10"]
    assert fix.files == [fd]


def test_resolve_fix_ignores_unmerged_pr():
    pulls = {10: PullRequestRecord(10, None, 0, ["abc"], [])}
    fix = resolve_fix(_issue(), None, pulls)
    assert fix.excluded


def test_resolve_fix_applies_file_filter():
    keep = FileDiff("rtl/a.sv", 1, 0, "x", "y", False)
    drop = FileDiff("doc/readme.md", 1, 0, "x", "y", False)
    pulls = {10: PullRequestRecord(10, "2021-02-10T00:00:00Z", 0, [], [keep, drop])}
    fix = resolve_fix(_issue(), None, pulls, file_filter=lambda fs: [f for f in fs if f.path.endswith(".sv")])
    assert [f.path for f in fix.files] == ["rtl/a.sv"]
