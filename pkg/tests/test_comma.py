"""Tests for comma categories, slices and cofinality."""

import pytest

from locbench.categories.catalog import (
    arrow,
    chain_category,
    identity_setup,
    meet_lattice_setup,
    parallel,
    point,
    point_into_two_points,
    riou_fixture,
    square_lattice,
)
from locbench.categories.comma import (
    check_comma_section,
    comma,
    eqcomma_bijection,
    is_cofinal,
    phi_comparison,
    slice_I,
    slice_I_underline,
    slice_J,
    slice_components,
    under_functor,
)
from locbench.categories.connectivity import pi0
from locbench.categories.core import (
    chain_diagram,
    identity_functor,
    inclusion_functor,
    full_subcategory,
    validate_category,
    validate_functor,
)
from locbench.errors import BudgetExceeded


@pytest.fixture()
def riou():
    """The one-arrow localisation fixture"""
    return riou_fixture()


def test_comma_needs_shared_target():
    """Test that the functors of a comma category must share a target"""
    with pytest.raises(ValueError):
        comma(identity_functor(arrow()), identity_functor(point()))


def test_under_functor_objects():
    """Test that Id/1 has one object per arrow into 1"""
    K = under_functor(identity_functor(arrow()), "1")
    assert len(K.carrier.objects) == 2
    assert "(0,pt,f)" in K.carrier.objects
    assert validate_category(K.carrier).passed
    assert validate_functor(K.proj_left).passed


def test_slice_I_payloads(riou):
    """Test the objects of I_0 and I_1 for the one-arrow fixture"""
    at_zero = slice_I(riou, "0")
    assert list(at_zero.payloads.values()) == [("1", "f")]
    assert at_zero.kind == "I"
    assert at_zero.forget.obj(at_zero.least_object()) == "1"
    assert list(slice_I(riou, "1").payloads.values()) == [("1", "id_1")]


def test_slice_J_flavours(riou):
    """Test d\\D and d\\T at the source of the arrow"""
    under_D = slice_J(riou, "0")
    assert len(under_D.category.objects) == 2
    under_T = slice_J(riou, "0", under="T")
    assert list(under_T.payloads.values()) == [("1", "f")]
    with pytest.raises(ValueError):
        slice_J(riou, "0", under="X")


def test_slice_over_chain(riou):
    """Test I indexed by the chain 0 -> 1"""
    family = slice_I(riou, chain_diagram(riou.D, ["f"]))
    assert len(family.category.objects) == 1
    assert not family.is_empty


def test_slice_budget():
    """Test that the morphism cap applies to slices"""
    setup = identity_setup(square_lattice(), square_lattice().non_identities())
    with pytest.raises(BudgetExceeded):
        slice_J(setup, "00", cap=2)


def test_underline_slice(riou):
    """Test that the underlined slice is a category"""
    family = slice_I_underline(riou, "0")
    assert not family.is_empty
    assert validate_category(family.category).passed


def test_phi_comparison_is_a_functor(riou):
    """Test that Phi_d is a valid functor into J_d"""
    phi = phi_comparison(riou, "0")
    assert phi.name == "Phi[0]"
    assert validate_functor(phi).passed
    assert len(phi.target.objects) == 2


def test_identity_is_cofinal():
    """Test that an identity functor is cofinal"""
    report = is_cofinal(identity_functor(chain_category()))
    assert report.cofinal
    assert report.first_failure() is None
    assert report.component_bijection


def test_cofinality_of_inclusions():
    """Test that only the inclusion of the source object is cofinal"""
    D = arrow()
    C = full_subcategory(D, ["0"], "Zero")
    report = is_cofinal(inclusion_functor(C, D))
    assert report.cofinal
    C = full_subcategory(D, ["1"], "One")
    report = is_cofinal(inclusion_functor(C, D))
    assert not report.cofinal
    assert report.first_failure() == "0"


def test_comma_section_round_trip():
    """Test that the comma section is a right inverse"""
    F = identity_functor(arrow())
    assert check_comma_section(F, F, "1")
    assert check_comma_section(F, F, "0")


def test_chain_slice_matches_iterated_comma(riou):
    """Test that the chain slice is the iterated comma category"""
    assert eqcomma_bijection(riou, ["f"])


def test_slices_are_cached_on_the_setup(riou):
    """Test that a second slice request returns the built family"""
    family = slice_I(riou, "0")
    assert slice_I(riou, "0") is family
    assert slice_I(riou, "0", cap=50) is not family
    assert slice_J(riou, "0") is slice_J(riou, "0")
    assert slice_I_underline(riou, "0") is slice_I_underline(riou, "0")


SETUPS = {
    "riou": riou_fixture,
    "ptpt": point_into_two_points,
    "meet": meet_lattice_setup,
    "parallel": lambda: identity_setup(parallel(), parallel().non_identities()),
}


@pytest.mark.parametrize("name", sorted(SETUPS))
@pytest.mark.parametrize("kind", ["I", "I_underline"])
def test_slice_components_match_pi0(name, kind):
    """Test that components from section maps agree with pi0 of the built slice"""
    fresh, built = SETUPS[name](), SETUPS[name]()
    build = slice_I if kind == "I" else slice_I_underline
    indices = list(built.D.objects) + [chain_diagram(built.D, [f]) for f in sorted(built.D.morphisms)]
    for index in indices:
        assert slice_components(fresh, index, kind) == pi0(build(built, index).category)
    assert not any(key[0] == kind for key in fresh.slices)
