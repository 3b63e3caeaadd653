"""Command-line pipeline: fetch -> resolve -> ast -> stats -> report.

Every subcommand reads and writes only its declared files: the cache
directory during fetch/resolve, the --out directory for everything else.
Exit codes: 0 success, 1 pipeline error (stage named on stderr), 2 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import astdiff, corpus, metrics
from .miner import (
    CloneMissing,
    FixRecord,
    ForgeClient,
    GitClone,
    IssueRecord,
    PullRequestRecord,
    RepoCache,
    days_to_close,
    fetch_issues,
    fetch_pulls,
    message_count,
    resolve_fixes,
)
from .svparse import SourceFile, count_nodes, parse_source

__all__ = ["main"]


@dataclass
class RunConfig:
    repo: str | None = None
    clone: str | None = None
    labels: list[str] = field(default_factory=list)
    annotations: str | None = None
    ip_config: str | None = None
    cache: str = "cache"
    out: str = "out"
    offline: bool = False
    max_files: int = 40
    bin_days: int = 10
    merge_continuous_assign: bool = False
    token_env: str = "BUGSCOPE_TOKEN"
    bot_filter: bool = False
    since: str | None = None
    overrides: str | None = None


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bugscope",
        description="Mine bug reports and bug-fix diffs from a Git-hosted "
        "HDL project and characterize the fixes.",
    )
    parser.add_argument("--config", help="JSON config file; flags override its values")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--repo", help="owner/name of the repository")
    common.add_argument("--clone", help="path to a local clone (read-only)")
    common.add_argument("--labels", help="comma-separated issue labels to match")
    common.add_argument("--annotations", help="annotation CSV path")
    common.add_argument("--ip-config", dest="ip_config", help="IP-category JSON path")
    common.add_argument("--cache", help="cache directory (default: cache)")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--offline", action="store_true", default=None,
                        help="forbid all network access")
    common.add_argument("--max-files", dest="max_files", type=int,
                        help="outlier threshold on design files per fix (default: 40)")
    common.add_argument("--bin-days", dest="bin_days", type=int,
                        help="time-to-close bin width in days (default: 10)")
    common.add_argument("--merge-continuous-assign", dest="merge_continuous_assign",
                        action="store_true", default=None,
                        help="count continuous assigns in the assignment category")
    common.add_argument("--token-env", dest="token_env",
                        help="environment variable holding the API token "
                        "(default: BUGSCOPE_TOKEN)")
    common.add_argument("--bot-filter", dest="bot_filter", action="store_true",
                        default=None, help="exclude bot-authored comments from message counts")
    common.add_argument("--since", help="only fetch issues updated since this ISO date")
    common.add_argument("--overrides", help="JSON file mapping issue number to fix commit ids")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("fetch", parents=[common], help="fetch issues and pull requests into the cache")
    sub.add_parser("resolve", parents=[common], help="resolve bug fixes and extract file diffs")
    sub.add_parser("annotate-check", parents=[common], help="validate the annotation file against the cache")
    ast_cmd = sub.add_parser("ast", parents=[common],
                             help="parse design files; diff two versions or profile all fixes")
    ast_cmd.add_argument("--before", help="pre-change file for a two-file diff")
    ast_cmd.add_argument("--after", help="post-change file for a two-file diff")
    ast_cmd.add_argument("--file", dest="single_file", help="parse one file and print its node counts")
    ast_cmd.add_argument("--dump-tree", action="store_true", help="with --file, print the tree instead")
    sub.add_parser("stats", parents=[common], help="compute report tables from the cache")
    sub.add_parser("report", parents=[common], help="render charts from the computed tables")
    sub.add_parser("all", parents=[common], help="run fetch, resolve, ast, stats, report in order")
    return parser


_LIST_KEYS = ("labels",)


def load_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    file_values: dict = {}
    if getattr(args, "config", None):
        file_values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        unknown = set(file_values) - set(asdict(cfg))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in asdict(cfg):
        flag = getattr(args, key, None)
        if flag is None and key in file_values:
            flag = file_values[key]
        if flag is None:
            continue
        if key in _LIST_KEYS and isinstance(flag, str):
            flag = [part.strip() for part in flag.split(",") if part.strip()]
        setattr(cfg, key, flag)
    return cfg


def _require(cfg: RunConfig, *names: str) -> None:
    for name in names:
        if not getattr(cfg, name):
            raise ValueError(f"--{name.replace('_', '-')} is required for this command")


def _cache(cfg: RunConfig) -> RepoCache:
    _require(cfg, "repo")
    return RepoCache(cfg.cache, cfg.repo)


def _client(cfg: RunConfig) -> ForgeClient:
    return ForgeClient(token_env=cfg.token_env, offline=cfg.offline)


def _load_issues(cache: RepoCache) -> list[IssueRecord]:
    raw = cache.load("issues")
    if raw is None:
        raise FileNotFoundError(f"no issues cached under {cache.dir}; run fetch first")
    return [IssueRecord.from_json_dict(r) for r in raw]


def _load_fixes(cache: RepoCache) -> list[FixRecord]:
    raw = cache.load("fixes")
    if raw is None:
        raise FileNotFoundError(f"no fixes cached under {cache.dir}; run resolve first")
    return [FixRecord.from_json_dict(r) for r in raw]


def _load_pulls(cache: RepoCache) -> dict[int, PullRequestRecord]:
    raw = cache.load("pulls") or []
    pulls = [PullRequestRecord.from_json_dict(r) for r in raw]
    return {p.number: p for p in pulls}


# ---- stages ----


def cmd_fetch(cfg: RunConfig) -> None:
    cache = _cache(cfg)
    client = _client(cfg)
    issues = fetch_issues(
        client, cache, cfg.repo, labels=cfg.labels or None, since=cfg.since,
        bot_filter=cfg.bot_filter,
    )
    pulls = fetch_pulls(client, cache, cfg.repo, issues, bot_filter=cfg.bot_filter)
    print(f"fetch: {len(issues)} issues, {len(pulls)} pull requests cached under {cache.dir}")


def cmd_resolve(cfg: RunConfig) -> None:
    cache = _cache(cfg)
    issues = _load_issues(cache)
    clone = GitClone(cfg.clone) if cfg.clone else None
    overrides = None
    if cfg.overrides:
        raw = json.loads(Path(cfg.overrides).read_text(encoding="utf-8"))
        overrides = {int(k): list(v) for k, v in raw.items()}
    fixes = resolve_fixes(
        cache,
        issues,
        clone=clone,
        overrides=overrides,
        file_filter=corpus.filter_design_files,
    )
    found = sum(1 for f in fixes if not f.excluded)
    print(f"resolve: {found} fixes found, {len(fixes) - found} issues without a fix")


def cmd_annotate_check(cfg: RunConfig) -> None:
    _require(cfg, "annotations")
    annotations, warnings = corpus.load_annotations(cfg.annotations)
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)
    retained = {n for n, a in annotations.items() if not a.excluded}
    security = sum(1 for n in retained if annotations[n].bug_class is corpus.BugClass.SECURITY)
    print(
        f"annotate-check: {len(annotations)} rows, {len(retained)} retained "
        f"({security} security), {len(annotations) - len(retained)} excluded"
    )
    if cfg.repo:
        cache = RepoCache(cfg.cache, cfg.repo)
        raw = cache.load("issues")
        if raw is not None:
            known = {r["number"] for r in raw}
            for number in sorted(set(annotations) - known):
                print(f"warning: annotation for unknown issue #{number}", file=sys.stderr)


def _profile_all(cfg: RunConfig, fixes: list[FixRecord]) -> list[astdiff.FixAstProfile]:
    mapping = astdiff.category_map(cfg.merge_continuous_assign)
    return [
        astdiff.profile_fix(fix, mapping=mapping)
        for fix in fixes
        if not fix.excluded
    ]


def cmd_ast(cfg: RunConfig, args: argparse.Namespace) -> None:
    if getattr(args, "before", None) or getattr(args, "after", None):
        if not (getattr(args, "before", None) and getattr(args, "after", None)):
            raise ValueError("--before and --after must be given together")
        histograms = []
        for path in (args.before, args.after):
            content = Path(path).read_text(encoding="utf-8")
            histograms.append(count_nodes(parse_source(SourceFile(path=path, content=content))))
        delta = astdiff.diff_histograms(histograms[0], histograms[1])
        print(json.dumps({k: delta[k] for k in sorted(delta)}, indent=2))
        return
    if getattr(args, "single_file", None):
        content = Path(args.single_file).read_text(encoding="utf-8")
        tree = parse_source(SourceFile(path=args.single_file, content=content))
        if getattr(args, "dump_tree", False):
            print(tree.dump())
        else:
            hist = count_nodes(tree)
            print(json.dumps({k: hist[k] for k in sorted(hist)}, indent=2))
        return
    cache = _cache(cfg)
    fixes = _load_fixes(cache)
    profiles = _profile_all(cfg, fixes)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    target = outdir / "profiles.jsonl"
    with open(target, "w", encoding="utf-8") as fh:
        for profile in profiles:
            fh.write(json.dumps(profile.to_json_dict(), ensure_ascii=False))
            fh.write("\n")
    skipped = sum(len(p.skipped_files) for p in profiles)
    print(f"ast: {len(profiles)} fix profiles written to {target} ({skipped} files skipped)")


def _assemble(cfg: RunConfig):
    """Shared dataset assembly for stats and report."""
    _require(cfg, "annotations")
    cache = _cache(cfg)
    issues = _load_issues(cache)
    fixes = _load_fixes(cache)
    pulls = _load_pulls(cache)
    annotations, warnings = corpus.load_annotations(cfg.annotations)
    ip_map = corpus.load_ip_categories(cfg.ip_config)
    fixes_by_bug = {f.bug: f for f in fixes}
    bugs, audit = corpus.build_bug_records(issues, fixes_by_bug, annotations, ip_map)
    rq2_bugs, outlier_audit = corpus.apply_outlier_exclusion(bugs, cfg.max_files)
    audit.extend(outlier_audit)
    audit.extend(warnings)

    profiles_path = Path(cfg.out) / "profiles.jsonl"
    if profiles_path.is_file():
        profiles = [
            astdiff.FixAstProfile.from_json_dict(json.loads(line))
            for line in profiles_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    else:
        profiles = _profile_all(cfg, fixes)

    issues_by_number = {i.number: i for i in issues}
    messages: dict[int, int] = {}
    days: dict[int, float] = {}
    for bug in bugs:
        issue = issues_by_number[bug.issue]
        messages[bug.issue] = message_count(issue, bug.fix, pulls)
        if issue.closed_at:
            days[bug.issue] = days_to_close(issue)
        else:
            audit.append(f"issue #{bug.issue}: no closed_at, omitted from time-to-close")
    analysis_config = {
        "repo": cfg.repo,
        "labels": cfg.labels,
        "max_files": cfg.max_files,
        "bin_days": cfg.bin_days,
        "merge_continuous_assign": cfg.merge_continuous_assign,
        "bot_filter": cfg.bot_filter,
    }
    bundle = metrics.compute_bundle(
        bugs, rq2_bugs, profiles, messages, days,
        config=analysis_config, bin_days=cfg.bin_days,
    )
    return bundle, audit


def cmd_stats(cfg: RunConfig) -> None:
    bundle, audit = _assemble(cfg)
    tables_dir = Path(cfg.out) / "tables"
    written = bundle.write(tables_dir)
    audit_path = Path(cfg.out) / "audit.txt"
    audit_path.write_text("".join(line + "\n" for line in audit), encoding="utf-8")
    print(f"stats: {len(written)} files written to {tables_dir} (audit: {audit_path})")


def cmd_report(cfg: RunConfig) -> None:
    from . import charts  # deferred: pulls in matplotlib

    bundle, _ = _assemble(cfg)
    written = charts.emit_charts(bundle, Path(cfg.out) / "charts")
    print(f"report: {len(written)} charts written to {Path(cfg.out) / 'charts'}")


_PIPELINE = ("fetch", "resolve", "ast", "stats", "report")


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_run_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        parser.error(str(exc))  # exits 2
    stages: list[tuple[str, object]] = []
    if args.command == "all":
        stages = [
            ("fetch", lambda: cmd_fetch(cfg)),
            ("resolve", lambda: cmd_resolve(cfg)),
            ("ast", lambda: cmd_ast(cfg, args)),
            ("stats", lambda: cmd_stats(cfg)),
            ("report", lambda: cmd_report(cfg)),
        ]
    elif args.command == "fetch":
        stages = [("fetch", lambda: cmd_fetch(cfg))]
    elif args.command == "resolve":
        stages = [("resolve", lambda: cmd_resolve(cfg))]
    elif args.command == "annotate-check":
        stages = [("annotate-check", lambda: cmd_annotate_check(cfg))]
    elif args.command == "ast":
        stages = [("ast", lambda: cmd_ast(cfg, args))]
    elif args.command == "stats":
        stages = [("stats", lambda: cmd_stats(cfg))]
    elif args.command == "report":
        stages = [("report", lambda: cmd_report(cfg))]
    for name, stage in stages:
        try:
            stage()
        except Exception as exc:  # noqa: BLE001 - every failure must name its stage
            print(f"error in stage '{name}': {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
