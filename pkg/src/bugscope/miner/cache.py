"""Per-repository offline cache: JSON Lines files, atomically replaced."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable

__all__ = ["RepoCache"]


class RepoCache:
    """Directory of JSONL record files for one repository.

    Layout: <root>/<owner>__<name>/{issues,pulls,fixes}.jsonl plus meta.json.
    Writes go to a temp file in the same directory and are renamed into
    place, so readers never observe a partial file.
    """

    def __init__(self, root: str | Path, repo: str):
        self.repo = repo
        self.dir = Path(root) / repo.replace("/", "__")

    def path(self, name: str) -> Path:
        return self.dir / f"{name}.jsonl"

    def has(self, name: str) -> bool:
        return self.path(name).is_file()

    def load(self, name: str) -> list[dict] | None:
        """All records from <name>.jsonl, or None when the file is absent."""
        p = self.path(name)
        if not p.is_file():
            return None
        records = []
        with open(p, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records

    def save(self, name: str, records: Iterable[dict]) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        target = self.path(name)
        fd, tmp = tempfile.mkstemp(prefix=f".{name}.", suffix=".tmp", dir=self.dir)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                for rec in records:
                    fh.write(json.dumps(rec, ensure_ascii=False))
                    fh.write("\n")
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def load_meta(self) -> dict:
        p = self.dir / "meta.json"
        if not p.is_file():
            return {}
        return json.loads(p.read_text(encoding="utf-8"))

    def save_meta(self, meta: dict) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        target = self.dir / "meta.json"
        fd, tmp = tempfile.mkstemp(prefix=".meta.", suffix=".tmp", dir=self.dir)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(meta, fh, indent=2, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
