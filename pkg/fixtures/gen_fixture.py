#!/usr/bin/env python3
"""Regenerate the bundled offline fixture corpus (cache + annotations).

The fixture models a repository "acme/chipsoc" with 176 closed bug issues:
  - #1..#170 are annotated and have resolvable single-PR fixes (retained)
  - #171..#175 are annotated as excluded (not design bugs)
  - #176 closed without any linked fix
  - annotation row #999 references no issue (exercises the unknown warning)

Dataset shape (all deterministic, no RNG):
  - years 2018..2022 with 30/34/31/35/40 bugs, security 15/18/17/18/22 (90 total)
  - impact combos over the 90 security bugs: C:14 I:23 A:23 CI:10 CA:6 IA:10 CIA:4
  - design files per fix: #1..94 -> 1, ..124 -> 2, ..144 -> 3, ..154 -> 4,
    ..162 -> 5, ..169 -> 6, #170 -> 42 (outlier past the default 40 threshold)
  - fix footprint: #1..56 in 3..10 lines, #57..103 in 11..30, #104..169 above 30
  - every fix is a pure line insertion, so lines_added comes straight out of
    difflib and lines_removed is 0

Run from anywhere: writes into the directory containing this script.
"""

from __future__ import annotations

import csv
import difflib
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

HERE = Path(__file__).resolve().parent
CACHE_DIR = HERE / "cache" / "acme__chipsoc"

REPO = "acme/chipsoc"
LABEL = "Type:Bug"

YEAR_BLOCKS = [  # (year, first issue, count, security count)
    (2018, 1, 30, 15),
    (2019, 31, 34, 18),
    (2020, 65, 31, 17),
    (2021, 96, 35, 18),
    (2022, 131, 40, 22),
]

IMPACT_COMBOS = [("C", 14), ("I", 23), ("A", 23), ("CI", 10), ("CA", 6), ("IA", 10), ("CIA", 4)]

IPS = [
    "aes", "keymgr", "hmac", "flash_ctrl", "otp_ctrl", "spi_device", "pinmux",
    "rstmgr", "clkmgr", "otbn", "ibex", "rv_dm", "tlul", "prim", "aon_timer",
]

CATEGORY_CYCLE = ["as", "gen", "a_c", "a_ff", "ca", "t", "co", "i", "m"]

# inserted-into-module-body lines per category (unique per issue via {n})
BODY_TEMPLATES = {
    "as": ["  always_comb z_{n} = r[0];"],
    "gen": ["  for (genvar g_{n} = 0; g_{n} < 2; g_{n}++) begin : gen_{n}", "  end"],
    "a_c": ["  always_comb y_{n} = r[1];"],
    "a_ff": ["  always_ff @(posedge clk) s_{n} <= d[0];"],
    "ca": ["  always_comb case (r[1:0]) default: ; endcase"],
    "t": ["  assign w_{n} = r[0] ? d[1] : d[2];"],
    "co": ["  always_comb if (r[2]) ; "],
    "i": ["  sub_unit u_extra_{n} (.clk(clk));"],
}
# "m" appends a helper module after endmodule instead
TAIL_TEMPLATE = ["module helper_{n};", "endmodule"]


def year_and_class(i: int) -> tuple[int, bool]:
    for year, first, count, sec in YEAR_BLOCKS:
        if first <= i < first + count:
            return year, (i - first) < sec
    raise ValueError(f"issue {i} outside year blocks")


def impacts_for(security_ordinal: int) -> str:
    offset = 0
    for letters, count in IMPACT_COMBOS:
        if security_ordinal < offset + count:
            return letters
        offset += count
    raise ValueError(f"security ordinal {security_ordinal} out of range")


def file_count(i: int) -> int:
    if i <= 94:
        return 1
    if i <= 124:
        return 2
    if i <= 144:
        return 3
    if i <= 154:
        return 4
    if i <= 162:
        return 5
    if i <= 169:
        return 6
    return 42  # the outlier


def footprint(i: int) -> int:
    if i <= 56:
        return 3 + (i % 8)
    if i <= 103:
        return 11 + (i % 20)
    if i <= 169:
        return 31 + (i % 50)
    return 42 * 3


def categories_for(i: int) -> list[str]:
    cats = [CATEGORY_CYCLE[i % 9]]
    if i % 3 == 0:
        extra = CATEGORY_CYCLE[(i // 9) % 9]
        if extra not in cats:
            cats.append(extra)
    return cats


def base_module(i: int, k: int) -> list[str]:
    name = f"mod_{i}_{k}"
    return [
        f"module {name} (",
        "  input  logic clk,",
        "  input  logic rst_n,",
        "  input  logic [7:0] d,",
        "  output logic [7:0] q",
        ");",
        "  logic [7:0] r;",
        "  always_ff @(posedge clk or negedge rst_n) begin",
        "    if (!rst_n) r <= '0;",
        "    else r <= d;",
        "  end",
        "  assign q = r;",
        "endmodule",
    ]


def build_fix_files(i: int) -> list[dict]:
    """FileDiff dicts with difflib-verified line counts."""
    n_files = file_count(i)
    total = footprint(i)
    ip = IPS[i % len(IPS)]
    cats = categories_for(i)

    body_lines: list[str] = []
    tail_lines: list[str] = []
    for cat in cats:
        if cat == "m":
            tail_lines.extend(line.format(n=i) for line in TAIL_TEMPLATE)
        else:
            body_lines.extend(line.format(n=i) for line in BODY_TEMPLATES[cat])
    template_cost = len(body_lines) + len(tail_lines)

    # one inserted line minimum per extra file, remainder padded into file 0
    extra_budget = n_files - 1
    pad_main = total - template_cost - extra_budget
    assert pad_main >= 0, (i, total, template_cost, n_files)

    files = []
    for k in range(n_files):
        before = base_module(i, k)
        if k == 0:
            inserted = body_lines + [f"  // pad {i}_{k}_{p}" for p in range(pad_main)]
            after = before[:-1] + inserted + [before[-1]] + tail_lines
        else:
            after = before[:-1] + [f"  // pad {i}_{k}_0"] + [before[-1]]
        before_text = "\n".join(before) + "\n"
        after_text = "\n".join(after) + "\n"
        added = removed = 0
        for line in difflib.unified_diff(
            before_text.splitlines(keepends=True),
            after_text.splitlines(keepends=True),
            n=0,
        ):
            if line.startswith("+") and not line.startswith("+++"):
                added += 1
            elif line.startswith("-") and not line.startswith("---"):
                removed += 1
        if i % 12 == 0 and k == 1:
            name = f"{ip}_reg_top.sv"
            generated = True
        else:
            name = f"mod_{i}_{k}.sv"
            generated = False
        files.append(
            {
                "path": f"hw/ip/{ip}/rtl/{name}",
                "lines_added": added,
                "lines_removed": removed,
                "before_content": before_text,
                "after_content": after_text,
                "generated_flag": generated,
            }
        )
    return files


def stamp(dt: datetime) -> str:
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def main() -> None:
    CACHE_DIR.mkdir(parents=True, exist_ok=True)

    issues = []
    pulls = []
    fixes = []
    for i in range(1, 177):
        year, _ = year_and_class(i) if i <= 170 else (2022, False)
        created = datetime(year, 1, 1, tzinfo=timezone.utc) + timedelta(
            days=(i * 3) % 300, hours=(i * 5) % 24
        )
        closed = created + timedelta(days=(i * 13) % 120, hours=6 * (i % 4))
        has_fix = i <= 175
        issues.append(
            {
                "number": i,
                "title": f"bug report {i}",
                "labels": [LABEL],
                "state": "closed",
                "created_at": stamp(created),
                "closed_at": stamp(closed),
                "comment_count": (3 * i) % 7,
                "linked_prs": [10000 + i] if has_fix else [],
                "body": f"observed misbehavior number {i}",
            }
        )
        if has_fix:
            pulls.append(
                {
                    "number": 10000 + i,
                    "merged_at": stamp(closed),
                    "message_count": (5 * i) % 11,
                    "commits": [f"{i:040x}"],
                    "files": [],
                }
            )
            fixes.append(
                {
                    "bug": i,
                    "source": [f"pr:{10000 + i}"],
                    "files": build_fix_files(i),
                    "excluded": False,
                    "reason": "",
                }
            )
        else:
            fixes.append(
                {
                    "bug": i,
                    "source": [],
                    "files": [],
                    "excluded": True,
                    "reason": "no fix found",
                }
            )

    for name, records in (("issues", issues), ("pulls", pulls), ("fixes", fixes)):
        with open(CACHE_DIR / f"{name}.jsonl", "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, ensure_ascii=False))
                fh.write("\n")
    with open(CACHE_DIR / "meta.json", "w", encoding="utf-8") as fh:
        json.dump({"labels": [LABEL], "repo": REPO, "since": None}, fh, indent=2, sort_keys=True)
        fh.write("\n")

    security_ordinal = 0
    with open(HERE / "annotations.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["issue", "class", "impacts", "excluded", "note"])
        for i in range(1, 171):
            _, is_security = year_and_class(i)
            if is_security:
                writer.writerow([i, "security", impacts_for(security_ordinal), "", ""])
                security_ordinal += 1
            else:
                writer.writerow([i, "functional", "", "", ""])
        for i in range(171, 176):
            writer.writerow([i, "functional", "", "yes", "not a design bug"])
        writer.writerow([176, "functional", "", "", "fix never landed"])
        writer.writerow([999, "functional", "", "", "stale row"])
    assert security_ordinal == 90, security_ordinal
    print(f"fixture written under {HERE}")


if __name__ == "__main__":
    main()
