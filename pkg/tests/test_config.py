"""Tests for configuration loading and budgets."""

import re

import pytest

from locbench.utils.config import Budgets, generate_file_name, load_config


@pytest.fixture()
def yaml_file(tmp_path):
    """Create a configuration file with environment references"""
    path = tmp_path / "cfg.yml"
    path.write_text(
        "log_level: ${LOCBENCH_TEST_LEVEL:-INFO}\n"
        "results_dir: ${LOCBENCH_TEST_DIR}\n"
        "budgets:\n"
        "  max_cosets: 7\n"
        "  unknown_budget: 3\n",
        encoding="utf-8",
    )
    return str(path)


def test_default_is_used_when_unset(yaml_file, monkeypatch):
    """Test that ${NAME:-default} falls back to the default"""
    monkeypatch.delenv("LOCBENCH_TEST_LEVEL", raising=False)
    monkeypatch.delenv("LOCBENCH_TEST_DIR", raising=False)
    config = load_config(yaml_file)
    assert config["log_level"] == "INFO"
    assert config["results_dir"] == "${LOCBENCH_TEST_DIR}"


def test_environment_overrides(yaml_file, monkeypatch):
    """Test that set variables are substituted"""
    monkeypatch.setenv("LOCBENCH_TEST_LEVEL", "DEBUG")
    monkeypatch.setenv("LOCBENCH_TEST_DIR", "out")
    config = load_config(yaml_file)
    assert config["log_level"] == "DEBUG"
    assert config["results_dir"] == "out"


def test_empty_file_gives_empty_config(tmp_path):
    """Test that an empty configuration loads as an empty mapping"""
    path = tmp_path / "empty.yml"
    path.write_text("", encoding="utf-8")
    assert load_config(str(path)) == {}


def test_budgets_from_config(yaml_file):
    """Test that unknown budget keys are ignored"""
    budgets = Budgets.from_config(load_config(yaml_file))
    assert budgets.max_cosets == 7
    assert budgets.kb_max_rules == Budgets().kb_max_rules
    assert Budgets.from_config(None) == Budgets()


def test_budget_override():
    """Test that override only replaces given values"""
    budgets = Budgets().override(poset_bound=1, envelope_k=None)
    assert budgets.poset_bound == 1
    assert budgets.envelope_k == Budgets().envelope_k
    assert budgets.as_dict()["poset_bound"] == 1
    assert set(budgets.as_dict()) >= {"morphism_cap", "max_cosets", "word_length"}


def test_generate_file_name():
    """Test that file names carry every given parameter"""
    name = generate_file_name({"command": "fuzz-audit", "setup": "a b", "seed": 0}, "bundle", "cat")
    assert re.fullmatch(r"bundle_\d{8}_\d{6}_fuzz-audit_setup_a-b_seed0\.cat", name)
    assert re.fullmatch(r"log_\d{8}_\d{6}\.log", generate_file_name({}, "log", "log"))
