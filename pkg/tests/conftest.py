"""Shared fixtures for the workbench tests."""

from pathlib import Path

import pytest
import yaml

from locbench import LocalisationWorkbench

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


@pytest.fixture()
def config_file(tmp_path):
    """Create a configuration that keeps every output under tmp_path"""
    config = {
        "log_level": "WARNING",
        "results_dir": str(tmp_path / "results"),
        "logs_dir": str(tmp_path / "results" / "logs"),
        "reports_dir": str(tmp_path / "results" / "reports"),
        "bundles_dir": str(tmp_path / "results" / "bundles"),
        "budgets": {"poset_bound": 2, "envelope_k": 2},
    }
    path = tmp_path / "workbench_config.yml"
    path.write_text(yaml.safe_dump(config), encoding="utf-8")
    return str(path)


@pytest.fixture()
def workbench(config_file):
    """Create a workbench instance for testing"""
    return LocalisationWorkbench(config_file)
