"""Tests for the command-line interface."""

from unittest.mock import patch

import pytest
from conftest import fixture_path

from locbench.cli import main, parse_args
from locbench.utils.report import JsonReport


def test_parse_check():
    """Test that check takes a family and a document"""
    args = parse_args(["check", "t0", "doc.cat", "--setup", "L"])
    assert args.family == "t0"
    assert args.document == "doc.cat"
    assert args.setup == "L"


def test_parse_fuzz_audit_needs_no_document():
    """Test that fuzz-audit runs on generated input"""
    args = parse_args(["fuzz-audit", "--seed", "3", "--implication", "riou=>t0"])
    assert args.document is None
    assert args.seed == 3
    assert args.implication == ["riou=>t0"]


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "doc.cat"],
        ["check", "nope", "doc.cat"],
        ["validate"],
        ["validate", "a.cat", "b.cat"],
        ["frobnicate", "a.cat"],
    ],
)
def test_usage_errors_are_invalid_input(argv):
    """Test that usage errors exit with the invalid input code"""
    with pytest.raises(SystemExit) as exc:
        parse_args(argv)
    assert exc.value.code == 3


@patch("locbench.cli.LocalisationWorkbench")
def test_main_exits_with_report_code(mock_workbench, tmp_path):
    """Test that main exits with the report exit code and passes budgets"""
    report = JsonReport("check t0")
    report.add("t0.0", "Fails", "fail")
    instance = mock_workbench.return_value
    instance.check.return_value = report

    with pytest.raises(SystemExit) as exc:
        main(["check", "t0", "doc.cat", "--pi1-budget", "5", "--output", str(tmp_path / "out.json")])

    assert exc.value.code == 1
    instance.set_budgets.assert_called_once_with(max_cosets=5, kb_max_rules=None, poset_bound=None, envelope_k=None)
    instance.save.assert_called_once()
    assert (tmp_path / "out.json").read_text(encoding="utf-8") == report.to_json()


@patch("locbench.cli.LocalisationWorkbench")
def test_no_save(mock_workbench):
    """Test that --no-save skips writing the report"""
    instance = mock_workbench.return_value
    instance.validate.return_value = JsonReport("validate")

    with pytest.raises(SystemExit) as exc:
        main(["validate", "doc.cat", "--no-save"])

    assert exc.value.code == 0
    instance.save.assert_not_called()


def test_comma_needs_index(config_file):
    """Test that comma without --index is invalid input"""
    with pytest.raises(SystemExit) as exc:
        main(["comma", fixture_path("riou.cat"), "--config", config_file, "--no-save"])
    assert exc.value.code == 3


def test_invalid_config(tmp_path):
    """Test that an unparsable configuration is invalid input"""
    path = tmp_path / "bad.yml"
    path.write_text("budgets: [unclosed\n", encoding="utf-8")
    with pytest.raises(SystemExit) as exc:
        main(["validate", fixture_path("riou.cat"), "--config", str(path)])
    assert exc.value.code == 3


def test_end_to_end_check(config_file, capsys):
    """Test that check t0 on the fixture prints a passing report"""
    with pytest.raises(SystemExit) as exc:
        main(["check", "t0", fixture_path("riou.cat"), "--config", config_file, "--no-save"])
    assert exc.value.code == 0
    assert '"command": "check t0"' in capsys.readouterr().out
