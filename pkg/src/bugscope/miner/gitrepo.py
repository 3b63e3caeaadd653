"""Read-only access to a local clone through the git command line."""

from __future__ import annotations

import re
import subprocess
from pathlib import Path

__all__ = ["CloneMissing", "GitClone"]


class CloneMissing(Exception):
    pass


_FIX_KEYWORDS = r"(?:fix(?:es|ed)?|close[sd]?|resolve[sd]?)"


class GitClone:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        if not self.path.is_dir():
            raise CloneMissing(f"clone path does not exist: {self.path}")
        try:
            self._git("rev-parse", "--git-dir")
        except (OSError, subprocess.CalledProcessError) as exc:
            raise CloneMissing(f"not a git repository: {self.path}") from exc

    def _git(self, *args: str) -> str:
        proc = subprocess.run(
            ["git", "-C", str(self.path), *args],
            capture_output=True,
            text=True,
            check=True,
        )
        return proc.stdout

    def show_file(self, commit: str, path: str) -> str | None:
        """File content at a commit, or None when absent there."""
        try:
            return self._git("show", f"{commit}:{path}")
        except subprocess.CalledProcessError:
            return None

    def parent(self, commit: str) -> str | None:
        try:
            return self._git("rev-parse", f"{commit}^").strip()
        except subprocess.CalledProcessError:
            return None  # root commit

    def numstat(self, commit: str) -> list[tuple[int, int, str]]:
        """(lines_added, lines_removed, path) per file changed by a commit.

        Binary entries (numstat "-") are reported with zero counts.
        """
        out = self._git(
            "diff-tree", "--numstat", "--no-renames", "--root", "-r",
            "--no-commit-id", commit,
        )
        rows = []
        for line in out.splitlines():
            parts = line.split("\t")
            if len(parts) != 3:
                continue
            added = int(parts[0]) if parts[0].isdigit() else 0
            removed = int(parts[1]) if parts[1].isdigit() else 0
            rows.append((added, removed, parts[2]))
        return rows

    def find_fix_commits(self, issue_number: int) -> list[str]:
        """Commits whose message closes the given issue via a fix trailer."""
        out = self._git("log", "--all", "--format=%H%x01%B%x02")
        pattern = re.compile(
            rf"\b{_FIX_KEYWORDS}\s*:?\s+#{issue_number}(?![0-9])", re.IGNORECASE
        )
        shas = []
        for entry in out.split("\x02"):
            entry = entry.strip("\n")
            if not entry:
                continue
            sha, _, message = entry.partition("\x01")
            sha = sha.strip()
            if sha and pattern.search(message):
                shas.append(sha)
        return shas
