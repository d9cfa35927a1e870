"""Tests for the workbench commands."""

import json

import pytest
from conftest import fixture_path

from locbench.utils.report import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK


def records(report):
    return {r["id"]: r for r in report.to_dict()["records"]}


def test_budgets_come_from_config(workbench):
    """Test that the configured budgets are applied"""
    assert workbench.budgets.poset_bound == 2
    assert workbench.set_budgets(max_cosets=5, kb_max_rules=None).max_cosets == 5
    assert workbench.budgets.envelope_k == 2


def test_validate_fixture(workbench):
    """Test that the fixture document validates"""
    report = workbench.validate(fixture_path("riou.cat"))
    assert report.exit_code == EXIT_OK
    assert "setup.RiouFix" in records(report)
    assert report.input_digest


def test_check_t0_holds(workbench):
    """Test that t0 holds on the fixture"""
    report = workbench.check(fixture_path("riou.cat"), "t0")
    assert report.exit_code == EXIT_OK
    assert records(report)["t0.0"]["status"] == "Holds"


def test_exhausted_budget_is_inconclusive(workbench):
    """Test that a zero morphism budget makes t0 inconclusive"""
    workbench.set_budgets(morphism_cap=0)
    report = workbench.check(fixture_path("riou.cat"), "t0")
    assert report.exit_code == EXIT_INCONCLUSIVE


def test_equivalence_failure_still_runs_oracle(workbench):
    """Test that a failed certificate is a failure and the oracle disagrees"""
    report = workbench.equivalence(fixture_path("ptpt.cat"))
    assert report.exit_code == EXIT_FAIL
    data = records(report)
    assert data["certificate"]["outcome"] == "fail"
    assert data["oracle"]["status"] == "NotEquivalence"


def test_equivalence_certified(workbench):
    """Test that the lattice certificate agrees with the oracle"""
    report = workbench.equivalence(fixture_path("lattice.cat"))
    assert report.exit_code == EXIT_OK
    assert records(report)["agreement"]["status"] == "Agree"


def test_bad_composite_is_invalid_input(workbench):
    """Test that an ill-typed document exits with the invalid input code"""
    report = workbench.validate(fixture_path("bad_compose.cat"))
    assert report.exit_code == EXIT_INVALID
    error = report.to_dict()["error"]
    assert error["kind"] == "CompositionError"
    assert error["line"] == 5


def test_missing_document(workbench, tmp_path):
    """Test that an unreadable document is an io error"""
    report = workbench.validate(str(tmp_path / "missing.cat"))
    assert report.exit_code == EXIT_INVALID
    assert report.error["kind"] == "io"


def test_unknown_setup_is_invalid_input(workbench):
    """Test that naming an undeclared setup is invalid input"""
    report = workbench.localize(fixture_path("riou.cat"), "Nope")
    assert report.exit_code == EXIT_INVALID
    assert report.error["kind"] == "UnresolvedReference"


def test_kan_extension(workbench):
    """Test that the declared functor extends along the localisation"""
    report = workbench.kan(fixture_path("kan.cat"), "F")
    assert report.exit_code == EXIT_OK
    assert records(report)["kan.F"]["status"] == "Certified"


def test_envelope_lift(workbench):
    """Test that the certified fixture lifts to the envelope"""
    report = workbench.envelope(fixture_path("riou.cat"))
    assert report.exit_code == EXIT_OK
    assert "envelope.2" in records(report)


def test_comma_slice(workbench):
    """Test that the comma command reports I at 0"""
    report = workbench.comma(fixture_path("riou.cat"), "0")
    assert report.exit_code == EXIT_OK
    assert "comma.I.0" in records(report)


def test_comma_rejects_unknown_index(workbench):
    """Test that an index outside D is invalid input"""
    report = workbench.comma(fixture_path("riou.cat"), "zz")
    assert report.exit_code == EXIT_INVALID


def test_comma_rejects_unknown_kind(workbench):
    """Test that an unknown slice kind is refused"""
    with pytest.raises(ValueError):
        workbench.comma(fixture_path("riou.cat"), "0", kind="K")


def test_connectivity_of_category(workbench):
    """Test that the parallel pair is decided"""
    report = workbench.connectivity(fixture_path("par.cat"), category="Par")
    assert report.exit_code == EXIT_OK
    assert "connectivity.Par" in records(report)


def test_connectivity_needs_a_target(workbench):
    """Test that connectivity without category or index is invalid input"""
    report = workbench.connectivity(fixture_path("riou.cat"))
    assert report.exit_code == EXIT_INVALID


def test_localize(workbench):
    """Test that both localisations of the fixture are decided"""
    report = workbench.localize(fixture_path("riou.cat"))
    assert report.exit_code == EXIT_OK
    assert set(records(report)) == {"localize.C", "localize.D"}


def test_fuzz_audit(workbench):
    """Test that a short stream is audited"""
    workbench.set_budgets(poset_bound=1)
    report = workbench.fuzz_audit(seed=0, count=3, max_objects=3, max_morphisms=4)
    stream_record = records(report)["audit.stream"]
    assert stream_record["cases"] + stream_record["skipped"] == 3
    assert report.seed == 0


def test_reports_are_reproducible(workbench):
    """Test that two runs give byte-identical reports"""
    first = workbench.check(fixture_path("riou.cat"), "c2").to_json()
    second = workbench.check(fixture_path("riou.cat"), "c2").to_json()
    assert first == second
    assert json.loads(first)["command"] == "check c2"


def test_save_writes_under_reports_dir(workbench):
    """Test that saved reports land in the configured directory"""
    report = workbench.validate(fixture_path("riou.cat"))
    path = workbench.save(report, {"setup": None, "hypothesis": None, "seed": None})
    assert path.parent == workbench.reports_dir
    assert path.name.startswith("report_")
