"""Tests for the truncated coproduct envelope and the lifted setup."""

import pytest

from locbench.categories.catalog import arrow, identity_setup, point, point_into_two_points, riou_fixture
from locbench.categories.core import identities_class, is_coproduct, validate_category, validate_class, validate_functor
from locbench.categories.envelope import (
    EMPTY,
    check_envelope_lift,
    coproduct,
    coproduct_envelope,
    envelope_class,
    lifted_setup,
)
from locbench.errors import PreconditionViolation


@pytest.fixture()
def env():
    """Envelope of the point with families of size at most two"""
    return coproduct_envelope(point(), 2)


def test_envelope_objects(env):
    """Test one object per family size"""
    assert env.category.objects == ("()", "(pt)", "(pt,pt)")
    assert env.to_dict()["objects"] == 3
    assert validate_category(env.category).passed


@pytest.mark.parametrize(
    ("src", "dst", "count"),
    [("(pt)", "(pt,pt)", 2), ("(pt,pt)", "(pt,pt)", 4), ("(pt,pt)", "(pt)", 1), ("(pt)", "()", 0)],
)
def test_envelope_hom_sizes(env, src, dst, count):
    """Test that maps of families are index maps with components"""
    assert len(env.category.hom(src, dst)) == count


def test_empty_family_is_initial(env):
    """Test that the empty family maps uniquely everywhere"""
    assert all(len(env.category.hom(EMPTY, x)) == 1 for x in env.category.objects)


def test_inclusion_is_fully_faithful(env):
    """Test the inclusion of the base category"""
    assert validate_functor(env.inclusion).details["fully_faithful"]


def test_concatenation_is_a_coproduct(env):
    """Test coproducts within the truncation"""
    found = coproduct(env, "(pt)", "(pt)")
    assert found is not None
    assert found[0] == "(pt,pt)"
    assert is_coproduct(env.category, *found)
    assert coproduct(env, "(pt,pt)", "(pt)") is None


def test_negative_truncation():
    """Test that the truncation must be non-negative"""
    with pytest.raises(ValueError):
        coproduct_envelope(point(), -1)


def test_lifted_setup_is_valid():
    """Test that the lifted setup satisfies T(S) in S'"""
    assert lifted_setup(riou_fixture(), 2).validate().passed


def test_lift_of_certified_equivalence():
    """Test the lift of the one-arrow fixture"""
    report = check_envelope_lift(riou_fixture(), 2)
    assert report.certified
    assert report.to_dict()["status"] == "Certified-at-2"
    assert set(report.checks) == {"inclusion.C", "inclusion.D", "coproducts.C", "coproducts.D", "oracle"}


def test_lift_needs_certified_base():
    """Test that an uncertified base is refused"""
    with pytest.raises(PreconditionViolation):
        check_envelope_lift(point_into_two_points(), 2)


def test_envelope_class_keeps_bijections(env):
    """Test that S^coprod holds the bijective index maps with components in S"""
    S = envelope_class(env, identities_class(point()))
    assert validate_class(S).passed
    assert len([m for m in env.category.hom("(pt,pt)", "(pt,pt)") if m in S]) == 2
    assert not [m for m in env.category.hom("(pt)", "(pt,pt)") if m in S]


CERTIFIED_FIXTURES = {
    "RiouFix": riou_fixture,
    "IdArrow": lambda: identity_setup(arrow(), ["f"]),
    "IdPt": lambda: identity_setup(point()),
}


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("name", sorted(CERTIFIED_FIXTURES))
def test_lift_is_certified_at_default_budgets(name, k):
    """Test that certified fixtures lift to the envelopes at truncation two and three"""
    report = check_envelope_lift(CERTIFIED_FIXTURES[name](), k)
    assert report.to_dict()["status"] == f"Certified-at-{k}"
    assert report.checks["inclusion.C"]
