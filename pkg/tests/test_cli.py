"""Exit codes, config merging and subcommand behavior."""

import json

import pytest

from bugscope.cli import build_arg_parser, load_run_config, main


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["stats", "--what"])
    assert exc.value.code == 2


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_pipeline_error_names_stage(tmp_path, capsys):
    rc = main(
        ["resolve", "--repo", "o/r", "--cache", str(tmp_path / "empty"), "--out", str(tmp_path)]
    )
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("error in stage 'resolve':")


def test_offline_fetch_without_cache_fails_cleanly(tmp_path, capsys):
    rc = main(
        ["fetch", "--offline", "--repo", "o/r", "--cache", str(tmp_path), "--out", str(tmp_path)]
    )
    assert rc == 1
    assert "error in stage 'fetch'" in capsys.readouterr().err


def test_config_file_merges_and_flags_win(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(
        json.dumps({"repo": "o/r", "labels": ["Type:Bug"], "max_files": 7, "offline": True})
    )
    parser = build_arg_parser()
    args = parser.parse_args(["--config", str(config), "stats", "--max-files", "9"])
    cfg = load_run_config(args)
    assert cfg.repo == "o/r"
    assert cfg.labels == ["Type:Bug"]
    assert cfg.max_files == 9  # the flag overrides the file
    assert cfg.offline is True


def test_labels_flag_splits_on_commas():
    parser = build_arg_parser()
    args = parser.parse_args(["stats", "--labels", "Type:Bug, Hotlist:Security"])
    cfg = load_run_config(args)
    assert cfg.labels == ["Type:Bug", "Hotlist:Security"]


def test_unknown_config_key_is_usage_error(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"repo": "o/r", "turbo": True}))
    with pytest.raises(SystemExit) as exc:
        main(["--config", str(config), "stats"])
    assert exc.value.code == 2
    assert "turbo" in capsys.readouterr().err


def test_ast_two_file_diff_prints_delta(tmp_path, capsys):
    before = tmp_path / "before.sv"
    after = tmp_path / "after.sv"
    before.write_text("module m; assign y = a; endmodule\n")
    after.write_text("module m; assign y = s ? a : b; assign z = a; endmodule\n")
    rc = main(["ast", "--before", str(before), "--after", str(after)])
    assert rc == 0
    delta = json.loads(capsys.readouterr().out)
    assert delta == {"ConditionalExpression": 1, "ContinuousAssign": 1}


def test_ast_before_requires_after(tmp_path, capsys):
    before = tmp_path / "before.sv"
    before.write_text("module m; endmodule\n")
    rc = main(["ast", "--before", str(before)])
    assert rc == 1
    assert "together" in capsys.readouterr().err


def test_ast_single_file_counts_and_tree(tmp_path, capsys):
    src = tmp_path / "one.sv"
    src.write_text("module m; always_comb y = s ? a : b; endmodule\n")
    rc = main(["ast", "--file", str(src)])
    assert rc == 0
    counts = json.loads(capsys.readouterr().out)
    assert counts["ModuleDeclaration"] == 1
    assert counts["ConditionalExpression"] == 1

    rc = main(["ast", "--file", str(src), "--dump-tree"])
    assert rc == 0
    dump = capsys.readouterr().out
    assert "ModuleDeclaration" in dump and "AlwaysCombBlock" in dump


def test_ast_unparseable_file_fails_with_stage(tmp_path, capsys):
    src = tmp_path / "bad.sv"
    src.write_text("module m; assign y = (a; endmodule\n")
    rc = main(["ast", "--file", str(src)])
    assert rc == 1
    assert "error in stage 'ast'" in capsys.readouterr().err


def test_stats_requires_annotations(tmp_path, capsys):
    rc = main(["stats", "--repo", "o/r", "--cache", str(tmp_path), "--out", str(tmp_path)])
    assert rc == 1
    assert "--annotations is required" in capsys.readouterr().err


def test_stats_on_fixture_cache(fixture_cache, fixture_annotations, tmp_path, capsys):
    rc = main(
        [
            "stats",
            "--repo", "acme/chipsoc",
            "--cache", str(fixture_cache),
            "--annotations", str(fixture_annotations),
            "--out", str(tmp_path / "out"),
        ]
    )
    assert rc == 0
    tables = tmp_path / "out" / "tables"
    assert (tables / "security_share.csv").is_file()
    assert (tables / "index.json").is_file()
    assert (tmp_path / "out" / "audit.txt").is_file()
    meta = json.loads((tables / "index.json").read_text())["metadata"]
    assert meta["bug_count"] == 170
    assert meta["rq2_bug_count"] == 169


def test_annotate_check_reports_counts(fixture_annotations, capsys):
    rc = main(["annotate-check", "--annotations", str(fixture_annotations)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "annotate-check:" in out
    assert "90 security" in out
