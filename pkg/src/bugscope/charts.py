"""Render the report bundle's figures as deterministic SVG files.

Rerunning on an identical bundle must yield byte-identical SVGs: the Agg
backend is forced, the SVG id hash salt is pinned, and the Date metadata is
suppressed. Each chart embeds its source data as an XML comment right after
the declaration so a chart can be audited without the CSVs.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .metrics import Histogram, Matrix, ReportBundle, Table  # noqa: E402

__all__ = ["emit_charts"]

_SALT = "bugscope"
matplotlib.rcParams["svg.hashsalt"] = _SALT  # stable element ids across runs
_COLORS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3")
_FIGSIZE = (8.0, 4.5)


def _new_figure(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return fig, ax


def _no_data(ax) -> None:
    ax.text(0.5, 0.5, "no data", ha="center", va="center", transform=ax.transAxes)
    ax.set_xticks([])
    ax.set_yticks([])


def _grouped_bars(ax, bin_labels: list[str], series: dict[str, list[int]]) -> bool:
    live = {k: v for k, v in series.items() if any(v)}
    if not bin_labels or not live:
        return False
    width = 0.8 / len(live)
    xs = list(range(len(bin_labels)))
    for idx, (label, counts) in enumerate(live.items()):
        offsets = [x - 0.4 + width * (idx + 0.5) for x in xs]
        ax.bar(offsets, counts, width=width, label=label, color=_COLORS[idx % len(_COLORS)])
    ax.set_xticks(xs)
    ax.set_xticklabels(bin_labels, rotation=45, ha="right")
    ax.legend()
    return True


def _stacked_bars(ax, bin_labels: list[str], series: dict[str, list[int]]) -> bool:
    live = {k: v for k, v in series.items() if any(v)}
    if not bin_labels or not live:
        return False
    xs = list(range(len(bin_labels)))
    bottoms = [0] * len(bin_labels)
    for idx, (label, counts) in enumerate(live.items()):
        ax.bar(xs, counts, bottom=bottoms, label=label, color=_COLORS[idx % len(_COLORS)])
        bottoms = [b + c for b, c in zip(bottoms, counts)]
    ax.set_xticks(xs)
    ax.set_xticklabels(bin_labels, rotation=45, ha="right")
    ax.legend()
    return True


def _save(fig, path: Path, source_data: dict) -> None:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    _embed_source(path, source_data)


def _embed_source(path: Path, data: dict) -> None:
    payload = json.dumps(data, sort_keys=True, separators=(",", ":"))
    payload = payload.replace("--", "- -")  # keep the XML comment well-formed
    text = path.read_text(encoding="utf-8")
    head, sep, rest = text.partition("\n")
    path.write_text(
        f"{head}{sep}<!-- source-data: {payload} -->\n{rest}", encoding="utf-8"
    )


def _histogram_chart(hist: Histogram, path: Path, title: str, xlabel: str, stacked: bool) -> None:
    fig, ax = _new_figure(title, xlabel, "bugs")
    drawer = _stacked_bars if stacked else _grouped_bars
    if not drawer(ax, hist.bin_labels, hist.series):
        _no_data(ax)
    _save(fig, path, {"bins": hist.bin_labels, "series": hist.series})


def _matrix_chart(matrix: Matrix, path: Path, title: str) -> None:
    fig, ax = _new_figure(title, "IP category", "bugs")
    series = {label: row for label, row in zip(matrix.row_labels, matrix.cells)}
    if not _grouped_bars(ax, matrix.col_labels, series):
        _no_data(ax)
    _save(
        fig,
        path,
        {"rows": matrix.row_labels, "cols": matrix.col_labels, "cells": matrix.cells},
    )


def _involvement_chart(table: Table, path: Path) -> None:
    fig, ax = _new_figure("Fix involvement by construct category", "construct category", "share of fixes (%)")
    idx = {c: i for i, c in enumerate(table.columns)}
    labels = [row[idx["category"]] for row in table.rows]

    def column(name: str) -> list[float]:
        return [float(row[idx[name]]) if row[idx[name]] != "" else 0.0 for row in table.rows]

    series = {
        "functional": column("functional_share_pct"),
        "security": column("security_share_pct"),
    }
    if not labels or not any(any(v) for v in series.values()):
        _no_data(ax)
    else:
        _grouped_bars(ax, labels, series)
    _save(fig, path, {"categories": labels, "series": series})


def emit_charts(bundle: ReportBundle, outdir: str | Path) -> list[Path]:
    """One SVG per report figure; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def out(name: str) -> Path:
        path = outdir / f"{name}.svg"
        written.append(path)
        return path

    _matrix_chart(
        bundle.matrices["impact_location_matrix"],
        out("impact_by_location"),
        "Security bugs by impact and IP category",
    )
    _histogram_chart(
        bundle.histograms["messages_histogram"],
        out("messages_by_class"),
        "Bug-report discussion volume",
        "messages per bug",
        stacked=False,
    )
    _histogram_chart(
        bundle.histograms["time_to_close_histogram"],
        out("time_to_close"),
        "Time to close",
        "days to close",
        stacked=False,
    )
    _histogram_chart(
        bundle.histograms["files_changed_histogram"],
        out("files_changed"),
        "Design files changed per fix",
        "files changed",
        stacked=False,
    )
    _histogram_chart(
        bundle.histograms["footprint_by_files_histogram"],
        out("footprint_by_files"),
        "Fix footprint grouped by files changed",
        "lines added + removed",
        stacked=True,
    )
    _involvement_chart(bundle.tables["node_involvement"], out("node_involvement"))
    return written
