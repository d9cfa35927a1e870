"""Tests for the hypothesis checkers and their witnesses."""

import pytest

from locbench.categories.catalog import (
    arrow,
    identity_setup,
    meet_lattice_setup,
    point_into_two_points,
    riou_fixture,
)
from locbench.categories.core import build_category, closure_class
from locbench.errors import PreconditionViolation
from locbench.categories.setup import LocalisationSetup
from locbench.theory.hypotheses import (
    FAILS,
    FAMILIES,
    HOLDS,
    T1V_IDS,
    UNKNOWN,
    KSelector,
    check_c1,
    check_c2,
    check_p1,
    check_p2,
    check_p3,
    check_referee,
    check_riou,
    check_t0,
    check_t1v,
    check_tu0,
    grade_status,
    replay,
    run_family,
    slice_status,
    summarise,
)
from locbench.utils.config import Budgets


@pytest.fixture()
def riou():
    """The one-arrow localisation fixture"""
    return riou_fixture()


@pytest.fixture()
def ptpt():
    """The point included into two points"""
    return point_into_two_points()


def by_id(reports):
    return {r.hypothesis: r for r in reports}


def test_grade_status_of_empty_category():
    """Test that an empty category fails every grade"""
    empty = build_category("Empty", [], [], {})
    assert grade_status(empty, -1, Budgets()) == (FAILS, {"nonempty": False})


def test_grade_status_of_arrow():
    """Test the grades of a contractible category"""
    for grade in (-1, 0, 1):
        assert grade_status(arrow(), grade, Budgets()) == (HOLDS, {})


def test_t0_holds_on_fixture(riou):
    """Test that t0 holds for the one-arrow fixture"""
    reports = check_t0(riou)
    assert [r.hypothesis for r in reports] == ["t0.0", "t0.1", "t0.2"]
    assert all(r.status == HOLDS for r in reports)
    assert summarise(reports) == HOLDS


def test_t0_fails_on_missing_object(ptpt):
    """Test that the empty slice at pt2 is the witness"""
    report = by_id(check_t0(ptpt))["t0.0"]
    assert report.status == FAILS
    assert report.witness == {"d": "pt2", "nonempty": False}
    assert replay(ptpt, report)


def test_budget_gives_unknown(riou):
    """Test that an exhausted budget gives Unknown with the budget name"""
    reports = check_t0(riou, Budgets(morphism_cap=0))
    assert reports[0].status == UNKNOWN
    assert reports[0].witness["budget"] == "morphism_cap"
    assert summarise(reports) == UNKNOWN


def test_c2_cofinality_fails_on_fixture(riou):
    """Test that Phi_0 misses the identity of 0 in 0\\D"""
    reports = by_id(check_c2(riou))
    assert reports["c2.0"].status == HOLDS
    assert reports["c2.1'"].status == FAILS
    assert reports["c2.1'"].witness["d"] == "0"


def test_c2_holds_for_identities():
    """Test that c2 holds for an identity setup"""
    assert summarise(check_c2(meet_lattice_setup())) == HOLDS


def test_riou_hypotheses_on_fixture(riou):
    """Test that every Riou hypothesis holds for the fixture"""
    reports = check_riou(riou)
    assert [r.hypothesis for r in reports] == ["riou.i", "riou.ii", "riou.iii", "riou.iv"]
    assert all(r.holds for r in reports)
    assert not by_id(reports)["riou.iii"].blocking


def test_riou_iv_fails_without_section(ptpt):
    """Test that pt2 has no S' arrow into the image of T"""
    report = by_id(check_riou(ptpt))["riou.iv"]
    assert report.status == FAILS
    assert report.witness == {"d": "pt2"}


def test_riou_i_needs_reflected_classes():
    """Test that T must reflect the marked class"""
    setup = identity_setup(arrow(), ["f"])
    setup = LocalisationSetup(setup.name, setup.C, setup.D, setup.T, closure_class(arrow(), []), setup.Sprime)
    report = by_id(check_riou(setup))["riou.i"]
    assert report.status == FAILS
    assert report.witness["morphism"] == "f"


def test_invalid_setup_is_rejected():
    """Test that checkers refuse a setup breaking T(S) in S'"""
    setup = identity_setup(arrow(), ["f"])
    broken = LocalisationSetup("Broken", setup.C, setup.D, setup.T, setup.S, closure_class(arrow(), []))
    with pytest.raises(PreconditionViolation) as info:
        check_t0(broken)
    assert info.value.check == "setup.valid"


def test_p3_stops_on_failed_base(ptpt):
    """Test that p3 reports the failing base hypothesis only"""
    reports = check_p3(ptpt, 2)
    assert len(reports) == 1
    assert reports[0].hypothesis == "p3.pre"
    assert reports[0].witness["hypothesis"] == "riou.iv"


@pytest.mark.slow
def test_p3_on_fixture(riou):
    """Test the lifted hypotheses on small posets"""
    reports = by_id(check_p3(riou, 2))
    assert reports["p3.pre"].holds
    assert reports["p3.a"].holds
    assert reports["p3.b"].holds


def test_referee_records_consequence(riou):
    """Test the bounded referee condition and its consequence"""
    report = check_referee(riou, 2)
    assert report.status == HOLDS
    assert report.witness == {"consequence": {"0": HOLDS, "1": HOLDS}}
    assert "bounded" in report.detail


def test_p1_products(riou):
    """Test that the one-object category has preserved products"""
    reports = by_id(check_p1(riou))
    assert reports["p1.c0"].status == HOLDS
    assert reports["p1.b2"].status == HOLDS


def test_p1_rejects_unknown_selection(riou):
    """Test that a K-selection outside d\\T is reported"""
    selector = KSelector("K", {"0": frozenset({("1", "id_1")})})
    report = by_id(check_p1(riou, selector))["p1.c1"]
    assert report.status == FAILS
    assert report.witness["d"] == "0"


def test_p2_reports_every_condition(riou):
    """Test the identifiers of the good position conditions"""
    ids = [r.hypothesis for r in check_p2(riou)]
    assert ids == ["p2.d1", "p2.d2", "p2.d3", "p2.d4", "p2.d5", "p2.shape"]


def test_tu0_star(riou):
    """Test two-out-of-three closure on the fixture"""
    reports = by_id(check_tu0(riou))
    assert reports["tu0.star"].status == HOLDS
    assert {"tu0.0", "tu0.1", "tu0.2"} <= set(reports)


def test_t1v_identifiers(riou):
    """Test that the weak replacement checks report every identifier"""
    assert tuple(r.hypothesis for r in check_t1v(riou)) == T1V_IDS


def test_c1_under_categories(riou):
    """Test the under-category checks at the only object of C"""
    reports = check_c1(riou, "1")
    ids = [r.hypothesis for r in reports]
    assert all(i.startswith("c1.") for i in ids)
    assert "c1.iso" in ids
    assert all(r.witness.get("c", "1") == "1" for r in reports)


def test_c1_unknown_object(riou):
    """Test that c1 needs an object of C"""
    with pytest.raises(PreconditionViolation):
        check_c1(riou, "0")


@pytest.mark.parametrize("family", [f for f in FAMILIES if f not in ("c1", "p3")])
def test_run_family_dispatch(riou, family):
    """Test that every family runs on the fixture"""
    reports = run_family(family, riou, Budgets(poset_bound=1))
    assert reports
    assert all(r.hypothesis.startswith(family) for r in reports)


def test_run_family_errors(riou):
    """Test dispatch errors"""
    with pytest.raises(ValueError):
        run_family("nope", riou)
    with pytest.raises(PreconditionViolation) as info:
        run_family("c1", riou)
    assert info.value.check == "c1.object"


def test_slice_status_without_assembly(ptpt):
    """Test that low grades are decided from components alone"""
    budgets = Budgets()
    assert slice_status(ptpt, "pt2", 0, budgets) == (FAILS, {"nonempty": False})
    assert slice_status(ptpt, "pt2", -1, budgets) == (FAILS, {"nonempty": False})
    assert slice_status(ptpt, "pt", 0, budgets) == (HOLDS, {})
    assert not any(key[0] == "I" for key in ptpt.slices)


def test_checks_share_slices(riou):
    """Test that t0 and the referee reuse the slices cached on the setup"""
    check_t0(riou)
    built = {key for key in riou.slices if key[0] == "I"}
    assert built
    check_referee(riou, poset_bound=1)
    assert built <= set(riou.slices)
    assert check_t0(riou) == check_t0(riou_fixture())
