"""The annotated bug dataset: classes, impact sets, IP locations, filters.

Classification (functional vs security, CIA impacts) is a human judgment
ingested from an annotation CSV; nothing here infers it. Location is derived
mechanically from the fix's file paths via a configurable IP-category table.
"""

from __future__ import annotations

import csv
import fnmatch
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path

from .miner.records import FileDiff, FixRecord, IssueRecord, parse_utc

__all__ = [
    "Annotation",
    "BugClass",
    "BugRecord",
    "ConflictError",
    "DESIGN_EXTENSIONS",
    "GENERATED_GLOBS",
    "IpCategory",
    "SchemaError",
    "apply_outlier_exclusion",
    "build_bug_records",
    "categorize_path",
    "filter_design_files",
    "load_annotations",
    "load_ip_categories",
]


class SchemaError(Exception):
    pass


class ConflictError(Exception):
    pass


class BugClass(Enum):
    FUNCTIONAL = "functional"
    SECURITY = "security"


class IpCategory(Enum):
    CRYPTOGRAPHY = "Cryptography"
    MEMORY = "Memory"
    IO = "IO"
    DEVICE_MANAGER = "DeviceManager"
    PROCESSOR = "Processor"
    DEBUG = "Debug"
    OTHER = "Other"


IMPACT_LETTERS = ("C", "I", "A")

ANNOTATION_COLUMNS = ("issue", "class", "impacts", "excluded", "note")


@dataclass(frozen=True)
class Annotation:
    bug_class: BugClass
    impacts: frozenset[str]
    excluded: bool = False
    note: str = ""


def load_annotations(path: str | Path) -> tuple[dict[int, Annotation], list[str]]:
    """Parse the annotation CSV into issue number -> Annotation.

    Returns (annotations, warnings). Header must be exactly
    issue,class,impacts,excluded,note. A security row must carry at least one
    impact letter and a functional row none, unless the row is excluded.
    """
    warnings: list[str] = []
    annotations: dict[int, Annotation] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != ANNOTATION_COLUMNS:
            raise SchemaError(
                f"annotation header must be {','.join(ANNOTATION_COLUMNS)}, "
                f"got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            raw_issue = (row["issue"] or "").strip()
            if not raw_issue:
                continue
            try:
                issue = int(raw_issue)
            except ValueError:
                raise SchemaError(f"line {lineno}: issue must be an integer, got {raw_issue!r}")
            cls_text = (row["class"] or "").strip().lower()
            try:
                bug_class = BugClass(cls_text) if cls_text else BugClass.FUNCTIONAL
            except ValueError:
                raise SchemaError(f"line {lineno}: unknown class {cls_text!r}")
            impacts_text = (row["impacts"] or "").strip().upper()
            bad = set(impacts_text) - set(IMPACT_LETTERS)
            if bad:
                raise SchemaError(
                    f"line {lineno}: impacts may only contain C, I, A; got {impacts_text!r}"
                )
            impacts = frozenset(impacts_text)
            excluded_text = (row["excluded"] or "").strip().lower()
            if excluded_text not in ("", "yes"):
                raise SchemaError(
                    f"line {lineno}: excluded must be empty or 'yes', got {excluded_text!r}"
                )
            excluded = excluded_text == "yes"
            if not excluded:
                if bug_class is BugClass.SECURITY and not impacts:
                    raise SchemaError(f"line {lineno}: security bug #{issue} has no impacts")
                if bug_class is BugClass.FUNCTIONAL and impacts:
                    raise SchemaError(f"line {lineno}: functional bug #{issue} lists impacts")
            ann = Annotation(bug_class, impacts, excluded, (row["note"] or "").strip())
            if issue in annotations:
                if annotations[issue] != ann:
                    raise ConflictError(f"issue #{issue} annotated twice with different labels")
                warnings.append(f"issue #{issue} annotated twice (identical rows)")
                continue
            annotations[issue] = ann
    return annotations, warnings


def load_ip_categories(path: str | Path | None = None) -> dict[str, IpCategory]:
    """IP name -> category from a JSON config (packaged default table)."""
    if path is None:
        text = (
            resources.files("bugscope.data")
            .joinpath("opentitan_ip_categories.json")
            .read_text(encoding="utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    raw = json.loads(text)
    mapping: dict[str, IpCategory] = {}
    for category_name, ip_names in raw.items():
        try:
            category = IpCategory(category_name)
        except ValueError:
            raise SchemaError(f"unknown IP category {category_name!r}")
        for ip in ip_names:
            mapping[str(ip)] = category
    return mapping


def categorize_path(path: str, ip_map: dict[str, IpCategory]) -> IpCategory:
    """Map a repo-relative file path to its IP category.

    The IP name is the path component after hw/ip/ or hw/top_*/ip/; failing
    that, the longest configured IP name occurring as a segment (or a
    segment prefix like `clkmgr_byp.sv`) wins. Unmatched paths are Other.
    """
    parts = [p for p in path.replace("\\", "/").split("/") if p]
    for i, seg in enumerate(parts[:-1]):
        if seg != "ip" or i == 0:
            continue
        prev = parts[i - 1]
        if prev == "hw" or (prev.startswith("top_") and i >= 2 and parts[i - 2] == "hw"):
            return ip_map.get(parts[i + 1], IpCategory.OTHER)
    best: str | None = None
    for name in ip_map:
        for seg in parts:
            if seg == name or seg.startswith(name + "_") or seg.startswith(name + "."):
                if best is None or len(name) > len(best) or (len(name) == len(best) and name < best):
                    best = name
                break
    if best is not None:
        return ip_map[best]
    return IpCategory.OTHER


DESIGN_EXTENSIONS = (".sv", ".svh", ".v", ".vh")
GENERATED_GLOBS = ("*_reg_top.sv",)


def filter_design_files(
    files: list[FileDiff], generated_globs: tuple[str, ...] = GENERATED_GLOBS
) -> list[FileDiff]:
    """Keep design files only; flag auto-generated ones.

    Extensions .sv/.svh/.v/.vh are design files; .hjson generator inputs and
    everything else (docs, scripts, DV collateral) are dropped. Kept files
    matching a generated glob get generated_flag=True.
    """
    kept = []
    for fd in files:
        name = fd.path.rsplit("/", 1)[-1]
        if not name.lower().endswith(DESIGN_EXTENSIONS):
            continue
        generated = any(fnmatch.fnmatch(name, pat) for pat in generated_globs)
        kept.append(replace(fd, generated_flag=generated))
    return kept


@dataclass
class BugRecord:
    issue: int
    bug_class: BugClass
    impacts: frozenset[str]
    year: int
    locations: set[IpCategory] = field(default_factory=set)
    fix: FixRecord | None = None
    annotation_note: str = ""


def build_bug_records(
    issues: list[IssueRecord],
    fixes_by_bug: dict[int, FixRecord],
    annotations: dict[int, Annotation],
    ip_map: dict[str, IpCategory],
) -> tuple[list[BugRecord], list[str]]:
    """Join issues, fixes and annotations into the retained dataset.

    A bug is retained when it is annotated, not marked excluded, and has a
    non-excluded fix. Returns (retained records, audit messages covering
    every drop and every annotation without a matching issue).
    """
    audit: list[str] = []
    issue_numbers = {iss.number for iss in issues}
    for number in sorted(annotations):
        if number not in issue_numbers:
            audit.append(f"annotation for unknown issue #{number}")
    records: list[BugRecord] = []
    for iss in sorted(issues, key=lambda i: i.number):
        ann = annotations.get(iss.number)
        if ann is None:
            audit.append(f"issue #{iss.number}: no annotation, dropped")
            continue
        if ann.excluded:
            audit.append(f"issue #{iss.number}: excluded by annotation ({ann.note or 'no note'})")
            continue
        fix = fixes_by_bug.get(iss.number)
        if fix is None or fix.excluded:
            reason = fix.reason if fix is not None else "fix not resolved"
            audit.append(f"issue #{iss.number}: excluded ({reason})")
            continue
        year = parse_utc(iss.created_at).year if iss.created_at else 0
        locations = {categorize_path(fd.path, ip_map) for fd in fix.files}
        records.append(
            BugRecord(
                issue=iss.number,
                bug_class=ann.bug_class,
                impacts=ann.impacts,
                year=year,
                locations=locations,
                fix=fix,
                annotation_note=ann.note,
            )
        )
    return records, audit


def apply_outlier_exclusion(
    bugs: list[BugRecord], max_files: int = 40
) -> tuple[list[BugRecord], list[str]]:
    """Drop bugs whose fix touches more design files than max_files (exclusive)."""
    retained: list[BugRecord] = []
    audit: list[str] = []
    for bug in bugs:
        count = len(bug.fix.files) if bug.fix is not None else 0
        if count > max_files:
            audit.append(f"issue #{bug.issue}: fix touches {count} files (> {max_files}), excluded")
        else:
            retained.append(bug)
    return retained, audit
