"""Aggregate statistics over the annotated corpus, packaged as a ReportBundle.

Percentages are emitted with one decimal (round-half-even) and always carry
their numerator and denominator. Means use two decimals; medians are emitted
alongside and flagged as extensions in the note column. All outputs are
deterministic functions of (dataset, config); the bundle records dataset and
config hashes so reruns are comparable.
"""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from .astdiff import FixAstProfile
from .corpus import BugClass, BugRecord, IpCategory
from .svparse import CATEGORY_ORDER

__all__ = [
    "EmptyDataset",
    "Histogram",
    "Matrix",
    "ReportBundle",
    "Table",
    "compute_bundle",
    "files_changed_stats",
    "footprint_stats",
    "impact_counts",
    "impact_location_matrix",
    "mean2",
    "message_stats",
    "node_involvement",
    "pct",
    "security_share",
    "time_to_close_histogram",
]


class EmptyDataset(Exception):
    pass


IMPACTS = ("C", "I", "A")
IMPACT_NAMES = {"C": "Confidentiality", "I": "Integrity", "A": "Availability"}
CATEGORY_COLUMNS = tuple(c.value for c in IpCategory)
FILE_BUCKETS = ("0", "1", "2", "3", "4", "5", ">5")
CLASS_NAMES = {BugClass.FUNCTIONAL: "functional", BugClass.SECURITY: "security"}


def pct(numerator: int, denominator: int) -> str:
    """Percentage with one decimal, banker's rounding; empty when undefined."""
    if denominator == 0:
        return ""
    value = Decimal(numerator) * 100 / Decimal(denominator)
    return str(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_EVEN))


def mean2(values) -> str:
    values = list(values)
    if not values:
        return ""
    total = sum(Decimal(str(v)) for v in values)
    return str((total / len(values)).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def median2(values) -> str:
    values = list(values)
    if not values:
        return ""
    return str(
        Decimal(str(statistics.median(values))).quantize(
            Decimal("0.01"), rounding=ROUND_HALF_EVEN
        )
    )


# ---- bundle containers ----


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.columns)
            writer.writerows(self.rows)


@dataclass
class Histogram:
    name: str
    bin_labels: list[str]
    series: dict[str, list[int]] = field(default_factory=dict)

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin", *self.series.keys()])
            for i, label in enumerate(self.bin_labels):
                writer.writerow([label, *(counts[i] for counts in self.series.values())])


@dataclass
class Matrix:
    name: str
    row_labels: list[str]
    col_labels: list[str]
    cells: list[list] = field(default_factory=list)

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["", *self.col_labels])
            for label, row in zip(self.row_labels, self.cells):
                writer.writerow([label, *row])


@dataclass
class ReportBundle:
    tables: dict[str, Table] = field(default_factory=dict)
    histograms: dict[str, Histogram] = field(default_factory=dict)
    matrices: dict[str, Matrix] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def add(self, entry) -> None:
        if isinstance(entry, Table):
            self.tables[entry.name] = entry
        elif isinstance(entry, Histogram):
            self.histograms[entry.name] = entry
        elif isinstance(entry, Matrix):
            self.matrices[entry.name] = entry
        else:
            raise TypeError(f"not a bundle entry: {entry!r}")

    def write(self, outdir: str | Path) -> list[Path]:
        """One CSV per entry plus index.json (the only file with a timestamp)."""
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        for group in (self.tables, self.histograms, self.matrices):
            for name in sorted(group):
                path = outdir / f"{name}.csv"
                group[name].write_csv(path)
                written.append(path)
        index = {
            "tables": sorted(self.tables),
            "histograms": sorted(self.histograms),
            "matrices": sorted(self.matrices),
            "metadata": {
                **self.metadata,
                "written_at": datetime.now(timezone.utc)
                .replace(microsecond=0)
                .isoformat()
                .replace("+00:00", "Z"),
            },
        }
        index_path = outdir / "index.json"
        index_path.write_text(
            json.dumps(index, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        written.append(index_path)
        return written


# ---- statistic operations ----


def security_share(bugs: list[BugRecord], group_by: str = "overall") -> Table:
    """Security-bug share, overall or per creation year."""
    if not bugs:
        raise EmptyDataset("no bugs to aggregate")
    if group_by == "overall":
        groups = {"overall": bugs}
        name = "security_share"
    elif group_by == "year":
        groups = {}
        for bug in bugs:
            groups.setdefault(str(bug.year), []).append(bug)
        name = "security_share_by_year"
    else:
        raise ValueError(f"group_by must be overall or year, got {group_by!r}")
    table = Table(name, ["group", "security", "total", "share_pct"])
    for label in sorted(groups):
        members = groups[label]
        sec = sum(1 for b in members if b.bug_class is BugClass.SECURITY)
        table.rows.append([label, sec, len(members), pct(sec, len(members))])
    return table


def impact_counts(bugs: list[BugRecord]) -> Table:
    """Per-impact security-bug counts; multi-impact bugs count everywhere."""
    security = [b for b in bugs if b.bug_class is BugClass.SECURITY]
    table = Table("impact_counts", ["impact", "count", "security_total", "share_pct"])
    for letter in IMPACTS:
        n = sum(1 for b in security if letter in b.impacts)
        table.rows.append([IMPACT_NAMES[letter], n, len(security), pct(n, len(security))])
    return table


def impact_location_matrix(bugs: list[BugRecord]) -> tuple[Matrix, Matrix]:
    """Impact x IP-category counts and row shares over security bugs.

    A bug appears in every impact row and every location column it carries,
    so cells are not disjoint. Row shares divide by the per-impact bug count.
    """
    security = [b for b in bugs if b.bug_class is BugClass.SECURITY]
    counts = Matrix(
        "impact_location_matrix",
        [IMPACT_NAMES[i] for i in IMPACTS],
        list(CATEGORY_COLUMNS),
    )
    shares = Matrix(
        "impact_location_row_share",
        [IMPACT_NAMES[i] for i in IMPACTS],
        list(CATEGORY_COLUMNS),
    )
    for letter in IMPACTS:
        with_impact = [b for b in security if letter in b.impacts]
        row = []
        for column in CATEGORY_COLUMNS:
            category = IpCategory(column)
            row.append(sum(1 for b in with_impact if category in b.locations))
        counts.cells.append(row)
        shares.cells.append([pct(cell, len(with_impact)) for cell in row])
    return counts, shares


def message_stats(bugs: list[BugRecord], messages: dict[int, int]) -> tuple[Table, Histogram]:
    """Discussion-volume distribution and means by class.

    `messages` maps issue number to its total message count (issue comments
    plus fix-PR messages, opening posts excluded).
    """
    table = Table("message_stats", ["stat", "value", "numerator", "denominator", "note"])
    hist = Histogram(
        "messages_histogram",
        [str(n) for n in range(11)] + [">10"],
        {"functional": [0] * 12, "security": [0] * 12},
    )
    per_class: dict[str, list[int]] = {"functional": [], "security": []}
    over10 = {"functional": 0, "security": 0}
    for bug in bugs:
        count = messages.get(bug.issue, 0)
        cls = CLASS_NAMES[bug.bug_class]
        per_class[cls].append(count)
        hist.series[cls][count if count <= 10 else 11] += 1
        if count > 10:
            over10[cls] += 1
    for cls in ("functional", "security"):
        table.rows.append([f"mean_messages_{cls}", mean2(per_class[cls]), "", len(per_class[cls]), ""])
        table.rows.append(
            [f"median_messages_{cls}", median2(per_class[cls]), "", len(per_class[cls]), "extension"]
        )
    total_over = over10["functional"] + over10["security"]
    table.rows.append(["bugs_over_10_messages", total_over, total_over, len(bugs), ""])
    table.rows.append(
        [
            "security_share_over_10_messages",
            pct(over10["security"], total_over),
            over10["security"],
            total_over,
            "",
        ]
    )
    return table, hist


def time_to_close_histogram(
    bugs: list[BugRecord], days: dict[int, float], bin_days: int = 10
) -> tuple[Table, Histogram]:
    """Right-open day bins per class: a 10.0-day close lands in [10,20)."""
    per_class: dict[str, list[float]] = {"functional": [], "security": []}
    for bug in bugs:
        if bug.issue in days:
            per_class[CLASS_NAMES[bug.bug_class]].append(days[bug.issue])
    everything = per_class["functional"] + per_class["security"]
    n_bins = int(max(everything) // bin_days) + 1 if everything else 0
    labels = [f"[{i * bin_days},{(i + 1) * bin_days})" for i in range(n_bins)]
    hist = Histogram(
        "time_to_close_histogram",
        labels,
        {"functional": [0] * n_bins, "security": [0] * n_bins},
    )
    for cls, values in per_class.items():
        for value in values:
            hist.series[cls][int(value // bin_days)] += 1
    table = Table("time_to_close_stats", ["stat", "value", "numerator", "denominator", "note"])
    for cls in ("functional", "security"):
        table.rows.append([f"mean_days_{cls}", mean2(per_class[cls]), "", len(per_class[cls]), ""])
        table.rows.append(
            [f"median_days_{cls}", median2(per_class[cls]), "", len(per_class[cls]), "extension"]
        )
    return table, hist


def _file_bucket(n: int) -> int:
    return n if n <= 5 else 6


def files_changed_stats(bugs: list[BugRecord]) -> tuple[Table, Histogram]:
    """Design files changed per fix: distribution, means, single-file share."""
    hist = Histogram(
        "files_changed_histogram",
        list(FILE_BUCKETS),
        {"functional": [0] * len(FILE_BUCKETS), "security": [0] * len(FILE_BUCKETS)},
    )
    per_class: dict[str, list[int]] = {"functional": [], "security": []}
    for bug in bugs:
        n = len(bug.fix.files) if bug.fix is not None else 0
        cls = CLASS_NAMES[bug.bug_class]
        per_class[cls].append(n)
        hist.series[cls][_file_bucket(n)] += 1
    counts = per_class["functional"] + per_class["security"]
    single = sum(1 for n in counts if n == 1)
    table = Table("files_changed_stats", ["stat", "value", "numerator", "denominator", "note"])
    table.rows.append(["mean_files_overall", mean2(counts), "", len(counts), ""])
    table.rows.append(["mean_files_functional", mean2(per_class["functional"]), "", len(per_class["functional"]), ""])
    table.rows.append(["mean_files_security", mean2(per_class["security"]), "", len(per_class["security"]), ""])
    table.rows.append(["median_files_overall", median2(counts), "", len(counts), "extension"])
    table.rows.append(["single_file_share_pct", pct(single, len(counts)), single, len(counts), ""])
    return table, hist


def _footprint(bug: BugRecord) -> int:
    if bug.fix is None:
        return 0
    return sum(fd.lines_added + fd.lines_removed for fd in bug.fix.files)


def footprint_stats(bugs: list[BugRecord]) -> tuple[Table, Histogram]:
    """Fix footprint (lines added + removed over design files).

    The histogram groups footprint decades by file-count bucket; cumulative
    shares use exact ≤10 / ≤30 comparisons, not the bin edges.
    """
    footprints = [(_footprint(b), len(b.fix.files) if b.fix else 0) for b in bugs]
    table = Table("footprint_stats", ["stat", "value", "numerator", "denominator", "note"])
    n = len(footprints)
    le10 = sum(1 for fp, _ in footprints if fp <= 10)
    le30 = sum(1 for fp, _ in footprints if fp <= 30)
    table.rows.append(["footprint_le_10_share_pct", pct(le10, n), le10, n, ""])
    table.rows.append(["footprint_le_30_share_pct", pct(le30, n), le30, n, ""])
    table.rows.append(["mean_footprint", mean2([fp for fp, _ in footprints]), "", n, ""])
    table.rows.append(
        ["median_footprint", median2([fp for fp, _ in footprints]), "", n, "extension"]
    )
    max_fp = max((fp for fp, _ in footprints), default=0)
    n_bins = min(int(max_fp // 10) + 1, 6) if footprints else 0
    labels = [f"[{i * 10},{(i + 1) * 10})" for i in range(max(n_bins - 1, 0))]
    if n_bins:
        labels.append(f"[{(n_bins - 1) * 10},+)")
    hist = Histogram(
        "footprint_by_files_histogram",
        labels,
        {f"files_{b}": [0] * n_bins for b in FILE_BUCKETS},
    )
    for fp, file_count in footprints:
        bin_index = min(int(fp // 10), n_bins - 1)
        hist.series[f"files_{FILE_BUCKETS[_file_bucket(file_count)]}"][bin_index] += 1
    return table, hist


def node_involvement(profiles: list[FixAstProfile], bugs: list[BugRecord]) -> Table:
    """Per construct category, share of fixes whose profile touched it.

    Only profiles joined to the given bugs count; both class series are
    emitted with a security/functional ratio column, asserting nothing about
    their closeness.
    """
    by_issue = {b.issue: b for b in bugs}
    joined = [(p, by_issue[p.fix_id]) for p in profiles if p.fix_id in by_issue]
    table = Table(
        "node_involvement",
        [
            "category",
            "touched",
            "total",
            "share_pct",
            "functional_touched",
            "functional_total",
            "functional_share_pct",
            "security_touched",
            "security_total",
            "security_share_pct",
            "security_functional_ratio",
        ],
    )
    functional = [(p, b) for p, b in joined if b.bug_class is BugClass.FUNCTIONAL]
    security = [(p, b) for p, b in joined if b.bug_class is BugClass.SECURITY]
    for category in CATEGORY_ORDER:
        touched = sum(1 for p, _ in joined if category in p.touched)
        f_touched = sum(1 for p, _ in functional if category in p.touched)
        s_touched = sum(1 for p, _ in security if category in p.touched)
        f_pct = pct(f_touched, len(functional))
        s_pct = pct(s_touched, len(security))
        if f_pct and s_pct and Decimal(f_pct) != 0:
            ratio = str((Decimal(s_pct) / Decimal(f_pct)).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))
        else:
            ratio = ""
        table.rows.append(
            [
                category,
                touched,
                len(joined),
                pct(touched, len(joined)),
                f_touched,
                len(functional),
                f_pct,
                s_touched,
                len(security),
                s_pct,
                ratio,
            ]
        )
    return table


# ---- bundle assembly ----


def _dataset_hash(bugs: list[BugRecord], profiles: list[FixAstProfile]) -> str:
    canonical = {
        "bugs": [
            {
                "issue": b.issue,
                "class": b.bug_class.value,
                "impacts": sorted(b.impacts),
                "year": b.year,
                "locations": sorted(loc.value for loc in b.locations),
                "files": [
                    [fd.path, fd.lines_added, fd.lines_removed]
                    for fd in (b.fix.files if b.fix else [])
                ],
            }
            for b in sorted(bugs, key=lambda b: b.issue)
        ],
        "profiles": [
            {"fix_id": p.fix_id, "touched": sorted(p.touched)}
            for p in sorted(profiles, key=lambda p: p.fix_id)
        ],
    }
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def compute_bundle(
    bugs: list[BugRecord],
    rq2_bugs: list[BugRecord],
    profiles: list[FixAstProfile],
    messages: dict[int, int],
    days: dict[int, float],
    config: dict | None = None,
    bin_days: int = 10,
) -> ReportBundle:
    """All report entries.

    Report-quality aggregates (shares, impacts, discussion, time-to-close)
    run over the full retained set; fix-shape aggregates (files, footprint,
    node involvement) run over the outlier-filtered set `rq2_bugs`.
    """
    bundle = ReportBundle()
    bundle.add(security_share(bugs, "overall"))
    bundle.add(security_share(bugs, "year"))
    bundle.add(impact_counts(bugs))
    counts, shares = impact_location_matrix(bugs)
    bundle.add(counts)
    bundle.add(shares)
    msg_table, msg_hist = message_stats(bugs, messages)
    bundle.add(msg_table)
    bundle.add(msg_hist)
    ttc_table, ttc_hist = time_to_close_histogram(bugs, days, bin_days)
    bundle.add(ttc_table)
    bundle.add(ttc_hist)
    fc_table, fc_hist = files_changed_stats(rq2_bugs)
    bundle.add(fc_table)
    bundle.add(fc_hist)
    fp_table, fp_hist = footprint_stats(rq2_bugs)
    bundle.add(fp_table)
    bundle.add(fp_hist)
    bundle.add(node_involvement(profiles, rq2_bugs))
    bundle.metadata = {
        "dataset_hash": _dataset_hash(bugs, profiles),
        "config_hash": config_hash(config or {}),
        "bug_count": len(bugs),
        "rq2_bug_count": len(rq2_bugs),
    }
    return bundle
