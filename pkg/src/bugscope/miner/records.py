"""Record types for mined issues, pull requests and fixes.

Timestamps are kept as ISO-8601 UTC strings ("2020-01-01T00:00:00Z") so the
JSON round-trip is the identity and cache files diff cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone

__all__ = [
    "FileDiff",
    "FixRecord",
    "IssueRecord",
    "MissingTimestamp",
    "PullRequestRecord",
    "days_to_close",
    "parse_utc",
]


class MissingTimestamp(Exception):
    pass


def parse_utc(stamp: str) -> datetime:
    if stamp.endswith("Z"):
        stamp = stamp[:-1] + "+00:00"
    dt = datetime.fromisoformat(stamp)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


@dataclass
class IssueRecord:
    number: int
    title: str = ""
    labels: list[str] = field(default_factory=list)
    state: str = "closed"
    created_at: str = ""
    closed_at: str | None = None
    comment_count: int = 0  # excludes the opening description
    linked_prs: list[int] = field(default_factory=list)
    body: str = ""

    def to_json_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "labels": list(self.labels),
            "state": self.state,
            "created_at": self.created_at,
            "closed_at": self.closed_at,
            "comment_count": self.comment_count,
            "linked_prs": list(self.linked_prs),
            "body": self.body,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "IssueRecord":
        return cls(
            number=obj["number"],
            title=obj.get("title", ""),
            labels=list(obj.get("labels", [])),
            state=obj.get("state", "closed"),
            created_at=obj.get("created_at", ""),
            closed_at=obj.get("closed_at"),
            comment_count=obj.get("comment_count", 0),
            linked_prs=list(obj.get("linked_prs", [])),
            body=obj.get("body", ""),
        )


@dataclass
class FileDiff:
    path: str
    lines_added: int = 0
    lines_removed: int = 0
    before_content: str | None = None  # None for a file added by the fix
    after_content: str | None = None  # None for a file deleted by the fix
    generated_flag: bool = False

    def to_json_dict(self) -> dict:
        return {
            "path": self.path,
            "lines_added": self.lines_added,
            "lines_removed": self.lines_removed,
            "before_content": self.before_content,
            "after_content": self.after_content,
            "generated_flag": self.generated_flag,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FileDiff":
        return cls(
            path=obj["path"],
            lines_added=obj.get("lines_added", 0),
            lines_removed=obj.get("lines_removed", 0),
            before_content=obj.get("before_content"),
            after_content=obj.get("after_content"),
            generated_flag=obj.get("generated_flag", False),
        )


@dataclass
class PullRequestRecord:
    number: int
    merged_at: str | None = None
    message_count: int = 0  # review + discussion messages, opener excluded
    commits: list[str] = field(default_factory=list)  # last = landed commit
    files: list[FileDiff] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "number": self.number,
            "merged_at": self.merged_at,
            "message_count": self.message_count,
            "commits": list(self.commits),
            "files": [f.to_json_dict() for f in self.files],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PullRequestRecord":
        return cls(
            number=obj["number"],
            merged_at=obj.get("merged_at"),
            message_count=obj.get("message_count", 0),
            commits=list(obj.get("commits", [])),
            files=[FileDiff.from_json_dict(f) for f in obj.get("files", [])],
        )


@dataclass
class FixRecord:
    bug: int
    source: list[str] = field(default_factory=list)  # "pr:N" or "commit:SHA"
    files: list[FileDiff] = field(default_factory=list)
    excluded: bool = False
    reason: str = ""

    def to_json_dict(self) -> dict:
        return {
            "bug": self.bug,
            "source": list(self.source),
            "files": [f.to_json_dict() for f in self.files],
            "excluded": self.excluded,
            "reason": self.reason,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FixRecord":
        return cls(
            bug=obj["bug"],
            source=list(obj.get("source", [])),
            files=[FileDiff.from_json_dict(f) for f in obj.get("files", [])],
            excluded=obj.get("excluded", False),
            reason=obj.get("reason", ""),
        )


def days_to_close(issue: IssueRecord) -> float:
    """Fractional days from creation to close."""
    if not issue.created_at or not issue.closed_at:
        raise MissingTimestamp(f"issue #{issue.number} lacks created/closed timestamps")
    opened = parse_utc(issue.created_at)
    closed = parse_utc(issue.closed_at)
    return (closed - opened).total_seconds() / 86400.0
