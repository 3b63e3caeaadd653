"""Histogram diffing over parsed trees and per-fix construct profiles.

A fix is characterized by parsing the before/after version of every changed
design file, counting nodes of each kind, and subtracting the counts. The
method is count-based on purpose: a balanced edit (one assignment swapped for
another) produces a zero delta and is invisible here. Tests pin that behavior
down so it stays a documented limitation rather than becoming a silent one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .svparse import (
    CATEGORY_ORDER,
    LexError,
    NodeHistogram,
    SourceFile,
    UnbalancedDelimiters,
    category_map,
    count_nodes,
    parse_source,
)

__all__ = [
    "CATEGORY_ORDER",
    "FixAstProfile",
    "HistogramDelta",
    "NodeHistogram",
    "category_map",
    "diff_histograms",
    "negate",
    "profile_fix",
    "touched_categories",
]


class HistogramDelta(dict):
    """Mapping of node kind name to signed count change (after - before).

    Zero entries are omitted; missing kinds read as zero.
    """

    def __missing__(self, key: str) -> int:
        return 0


def diff_histograms(before: NodeHistogram, after: NodeHistogram) -> HistogramDelta:
    """Pointwise subtraction over the union of keys, zeros dropped."""
    delta = HistogramDelta()
    for kind in sorted(set(before) | set(after)):
        d = after[kind] - before[kind]
        if d:
            delta[kind] = d
    return delta


def negate(delta: HistogramDelta) -> HistogramDelta:
    return HistogramDelta({k: -v for k, v in delta.items()})


def touched_categories(
    delta: HistogramDelta,
    mapping: dict[str, str] | None = None,
    post_merge: bool = False,
) -> set[str]:
    """Report categories with at least one added or removed node.

    The nonzero test runs per node kind before kinds are merged into
    categories, so +1 NonBlockingAssignment with -1 BlockingAssignment still
    marks "as" as touched. `post_merge=True` switches to testing the summed
    category delta instead (a strictly less sensitive variant, kept for
    comparison runs).
    """
    if mapping is None:
        mapping = category_map()
    touched: set[str] = set()
    if post_merge:
        sums: dict[str, int] = {}
        for kind, d in delta.items():
            cat = mapping.get(kind)
            if cat is not None:
                sums[cat] = sums.get(cat, 0) + d
        touched = {cat for cat, d in sums.items() if d}
    else:
        for kind, d in delta.items():
            cat = mapping.get(kind)
            if cat is not None and d:
                touched.add(cat)
    return touched


@dataclass
class FixAstProfile:
    """Construct-level footprint of one bug fix."""

    fix_id: int
    touched: set[str] = field(default_factory=set)
    per_file_deltas: list[tuple[str, HistogramDelta]] = field(default_factory=list)
    skipped_files: list[tuple[str, str]] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        order = {c: n for n, c in enumerate(CATEGORY_ORDER)}
        return {
            "fix_id": self.fix_id,
            "touched": sorted(self.touched, key=lambda c: order.get(c, len(order))),
            "per_file": [
                {"path": path, "deltas": {k: delta[k] for k in sorted(delta)}}
                for path, delta in self.per_file_deltas
            ],
            "skipped": [
                {"path": path, "reason": reason} for path, reason in self.skipped_files
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FixAstProfile":
        return cls(
            fix_id=obj["fix_id"],
            touched=set(obj.get("touched", [])),
            per_file_deltas=[
                (f["path"], HistogramDelta(f.get("deltas", {})))
                for f in obj.get("per_file", [])
            ],
            skipped_files=[
                (s["path"], s["reason"]) for s in obj.get("skipped", [])
            ],
        )


def _count_content(path: str, content: str) -> NodeHistogram:
    return count_nodes(parse_source(SourceFile(path=path, content=content)))


def profile_fix(
    fix,
    count_content: Callable[[str, str], NodeHistogram] = _count_content,
    mapping: dict[str, str] | None = None,
    post_merge: bool = False,
) -> FixAstProfile:
    """Profile one fix's construct footprint.

    `fix` needs a `bug` id and `files`, each file with `path`,
    `before_content` and `after_content` (None for added/deleted sides; the
    missing side counts as an empty histogram). Files that fail to parse on
    either side are skipped with the error recorded, never raised.
    """
    profile = FixAstProfile(fix_id=fix.bug)
    for fd in fix.files:
        try:
            before = (
                NodeHistogram()
                if fd.before_content is None
                else count_content(fd.path, fd.before_content)
            )
            after = (
                NodeHistogram()
                if fd.after_content is None
                else count_content(fd.path, fd.after_content)
            )
        except (LexError, UnbalancedDelimiters, RecursionError) as exc:
            profile.skipped_files.append((fd.path, str(exc)))
            continue
        delta = diff_histograms(before, after)
        profile.per_file_deltas.append((fd.path, delta))
        profile.touched |= touched_categories(delta, mapping, post_merge=post_merge)
    return profile
