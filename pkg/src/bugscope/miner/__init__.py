"""Issue/PR mining, fix resolution and the offline cache."""

from .cache import RepoCache
from .github import AuthError, ForgeClient, NetworkError, OfflineError, RateLimited
from .gitrepo import CloneMissing, GitClone
from .records import (
    FileDiff,
    FixRecord,
    IssueRecord,
    MissingTimestamp,
    PullRequestRecord,
    days_to_close,
    parse_utc,
)
from .resolve import fetch_issues, fetch_pulls, message_count, resolve_fix, resolve_fixes

__all__ = [
    "AuthError",
    "CloneMissing",
    "FileDiff",
    "FixRecord",
    "ForgeClient",
    "GitClone",
    "IssueRecord",
    "MissingTimestamp",
    "NetworkError",
    "OfflineError",
    "PullRequestRecord",
    "RateLimited",
    "RepoCache",
    "days_to_close",
    "fetch_issues",
    "fetch_pulls",
    "message_count",
    "parse_utc",
    "resolve_fix",
    "resolve_fixes",
]
