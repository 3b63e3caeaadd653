"""Issue fetching and bug-fix resolution over client, cache and clone."""

from __future__ import annotations

from typing import Callable

from .cache import RepoCache
from .github import ForgeClient
from .gitrepo import CloneMissing, GitClone
from .records import FileDiff, FixRecord, IssueRecord, PullRequestRecord

__all__ = [
    "fetch_issues",
    "fetch_pulls",
    "message_count",
    "resolve_fix",
    "resolve_fixes",
]


def _is_bot(user: dict | None) -> bool:
    if not user:
        return False
    return user.get("type") == "Bot" or str(user.get("login", "")).endswith("[bot]")


def _linked_pr_numbers(timeline: list[dict]) -> list[int]:
    numbers = set()
    for event in timeline:
        if event.get("event") != "cross-referenced":
            continue
        source_issue = (event.get("source") or {}).get("issue") or {}
        if "pull_request" in source_issue and "number" in source_issue:
            numbers.add(int(source_issue["number"]))
    return sorted(numbers)


def fetch_issues(
    client: ForgeClient,
    cache: RepoCache,
    repo: str,
    labels: list[str] | None = None,
    since: str | None = None,
    bot_filter: bool = False,
    refresh: bool = False,
) -> list[IssueRecord]:
    """Closed issues matching any of the labels, cached as issues.jsonl.

    With a warm cache (and refresh false) this never touches the network and
    returns exactly what a previous run persisted.
    """
    if not refresh:
        cached = cache.load("issues")
        if cached is not None:
            return [IssueRecord.from_json_dict(r) for r in cached]
    owner, name = repo.split("/", 1)
    records: list[IssueRecord] = []
    for raw in client.list_issues(owner, name, labels=labels, state="closed", since=since):
        number = int(raw["number"])
        timeline = client.issue_timeline(owner, name, number)
        if bot_filter:
            comments = client.issue_comments(owner, name, number)
            comment_count = sum(1 for c in comments if not _is_bot(c.get("user")))
        else:
            comment_count = int(raw.get("comments", 0))
        records.append(
            IssueRecord(
                number=number,
                title=raw.get("title", ""),
                labels=[lb["name"] if isinstance(lb, dict) else str(lb) for lb in raw.get("labels", [])],
                state=raw.get("state", "closed"),
                created_at=raw.get("created_at", ""),
                closed_at=raw.get("closed_at"),
                comment_count=comment_count,
                linked_prs=_linked_pr_numbers(timeline),
                body=raw.get("body") or "",
            )
        )
    records.sort(key=lambda r: r.number)
    cache.save("issues", [r.to_json_dict() for r in records])
    meta = cache.load_meta()
    meta.update({"repo": repo, "labels": list(labels or []), "since": since})
    cache.save_meta(meta)
    return records


def fetch_pulls(
    client: ForgeClient,
    cache: RepoCache,
    repo: str,
    issues: list[IssueRecord],
    bot_filter: bool = False,
    refresh: bool = False,
) -> dict[int, PullRequestRecord]:
    """Pull-request metadata for every PR linked from the issues."""
    if not refresh:
        cached = cache.load("pulls")
        if cached is not None:
            pulls = [PullRequestRecord.from_json_dict(r) for r in cached]
            return {p.number: p for p in pulls}
    owner, name = repo.split("/", 1)
    wanted = sorted({n for iss in issues for n in iss.linked_prs})
    pulls: dict[int, PullRequestRecord] = {}
    for number in wanted:
        raw = client.get_pull(owner, name, number)
        commits = [c["sha"] for c in client.pull_commits(owner, name, number)]
        merge_sha = raw.get("merge_commit_sha")
        if raw.get("merged_at") and merge_sha and merge_sha not in commits:
            commits.append(merge_sha)  # keep the landed commit last
        if bot_filter:
            discussion = client.issue_comments(owner, name, number)
            reviews = client.pull_review_comments(owner, name, number)
            message_total = sum(
                1 for c in [*discussion, *reviews] if not _is_bot(c.get("user"))
            )
        else:
            message_total = int(raw.get("comments", 0)) + int(raw.get("review_comments", 0))
        pulls[number] = PullRequestRecord(
            number=number,
            merged_at=raw.get("merged_at"),
            message_count=message_total,
            commits=commits,
        )
    cache.save("pulls", [pulls[n].to_json_dict() for n in sorted(pulls)])
    return pulls


def _extract_commit_files(clone: GitClone, sha: str) -> list[FileDiff]:
    parent = clone.parent(sha)
    files = []
    for added, removed, path in clone.numstat(sha):
        before = clone.show_file(parent, path) if parent else None
        after = clone.show_file(sha, path)
        files.append(
            FileDiff(
                path=path,
                lines_added=added,
                lines_removed=removed,
                before_content=before,
                after_content=after,
            )
        )
    return files


def _merge_file_lists(file_lists: list[list[FileDiff]]) -> list[FileDiff]:
    """Union per-commit diffs: first-seen before, last-seen after, summed lines."""
    merged: dict[str, FileDiff] = {}
    for files in file_lists:
        for fd in files:
            prev = merged.get(fd.path)
            if prev is None:
                merged[fd.path] = FileDiff(
                    path=fd.path,
                    lines_added=fd.lines_added,
                    lines_removed=fd.lines_removed,
                    before_content=fd.before_content,
                    after_content=fd.after_content,
                    generated_flag=fd.generated_flag,
                )
            else:
                prev.lines_added += fd.lines_added
                prev.lines_removed += fd.lines_removed
                prev.after_content = fd.after_content
    return [merged[p] for p in sorted(merged)]


def resolve_fix(
    issue: IssueRecord,
    clone: GitClone | None,
    pulls_by_number: dict[int, PullRequestRecord],
    overrides: dict[int, list[str]] | None = None,
    file_filter: Callable[[list[FileDiff]], list[FileDiff]] | None = None,
) -> FixRecord:
    """Locate the fix for one closed issue and extract its file diffs.

    Discovery order: merged PRs cross-referenced from the issue, then
    commits whose message carries a fixes/closes trailer, then a manual
    override (issue -> commit ids). No hit means excluded=true.
    """
    sources: list[str] = []
    file_lists: list[list[FileDiff]] = []
    merged_prs = [
        pulls_by_number[n]
        for n in issue.linked_prs
        if n in pulls_by_number and pulls_by_number[n].merged_at
    ]
    if merged_prs:
        for pr in merged_prs:
            sources.append(f"pr:{pr.number}")
            if pr.files:
                file_lists.append(pr.files)
            elif pr.commits:
                if clone is None:
                    raise CloneMissing(
                        f"clone required to extract files for PR #{pr.number}"
                    )
                file_lists.append(_extract_commit_files(clone, pr.commits[-1]))
    else:
        shas: list[str] = []
        if clone is not None:
            shas = clone.find_fix_commits(issue.number)
        if not shas and overrides:
            shas = list(overrides.get(issue.number, []))
        for sha in shas:
            if clone is None:
                raise CloneMissing(f"clone required to extract commit {sha}")
            sources.append(f"commit:{sha}")
            file_lists.append(_extract_commit_files(clone, sha))
    if not sources:
        return FixRecord(bug=issue.number, excluded=True, reason="no fix found")
    files = _merge_file_lists(file_lists)
    if file_filter is not None:
        files = file_filter(files)
    return FixRecord(bug=issue.number, source=sources, files=files)


def resolve_fixes(
    cache: RepoCache,
    issues: list[IssueRecord],
    clone: GitClone | None = None,
    pulls_by_number: dict[int, PullRequestRecord] | None = None,
    overrides: dict[int, list[str]] | None = None,
    file_filter: Callable[[list[FileDiff]], list[FileDiff]] | None = None,
    refresh: bool = False,
) -> list[FixRecord]:
    """Resolve all fixes, reusing fixes.jsonl when already cached."""
    if not refresh:
        cached = cache.load("fixes")
        if cached is not None:
            return [FixRecord.from_json_dict(r) for r in cached]
    if pulls_by_number is None:
        raw = cache.load("pulls") or []
        pulls_by_number = {
            p.number: p for p in (PullRequestRecord.from_json_dict(r) for r in raw)
        }
    fixes = [
        resolve_fix(issue, clone, pulls_by_number, overrides, file_filter)
        for issue in sorted(issues, key=lambda i: i.number)
    ]
    cache.save("fixes", [f.to_json_dict() for f in fixes])
    return fixes


def message_count(
    issue: IssueRecord,
    fix: FixRecord,
    pulls_by_number: dict[int, PullRequestRecord] | None = None,
) -> int:
    """Issue comments plus fix-PR messages, opening descriptions excluded."""
    total = issue.comment_count
    if pulls_by_number:
        for src in fix.source:
            kind, _, value = src.partition(":")
            if kind == "pr" and value.isdigit():
                pr = pulls_by_number.get(int(value))
                if pr is not None:
                    total += pr.message_count
    return total
