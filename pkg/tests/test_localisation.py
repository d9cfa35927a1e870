"""Tests for localisation models, certificates, the oracle and Kan extensions."""

import pytest

from conftest import fixture_path
from locbench.categories.catalog import (
    arrow,
    identity_setup,
    meet_lattice_setup,
    parallel,
    point,
    point_into_two_points,
    riou_fixture,
    square_lattice,
)
from locbench.categories.core import (
    all_class,
    closure_class,
    compose_functors,
    constant_functor,
    identities_class,
    identity_functor,
    inverse_of,
    is_isomorphism,
    validate_category,
    validate_functor,
)
from locbench.errors import BudgetExceeded, NotInverting, PreconditionViolation
from locbench.fuzz import STRATEGIES, GenConfig, stream
from locbench.theory.localisation import (
    CERTIFIED,
    EQUIVALENCE,
    NOT_EQUIVALENCE,
    build_equivalence,
    compare_certificates,
    equivalence_oracle,
    fraction_model,
    hom_fractions,
    induced_functor,
    kan_extend,
    localise,
    localised_functor,
    ore_check,
    rewriting_model,
    saturation,
)
from locbench.utils.config import Budgets
from locbench.utils.dsl import load_document, resolve


def test_right_fractions_of_arrow():
    """Test that inverting f in Arrow gives the indiscrete category"""
    C = arrow()
    model = localise(C, all_class(C))
    assert model.decided
    assert model.engine == "right-fractions"
    assert validate_category(model.category).passed
    assert len(model.category) == 4
    assert is_isomorphism(model.category, model.P("f"))
    assert model.representatives["[id_0/f]"] == [("f", -1)]
    assert model.evaluate("0", [("f", 1), ("f", -1)]) == "id_0"


def test_identities_localise_to_the_category():
    """Test that inverting nothing changes nothing"""
    C = square_lattice()
    model = localise(C, identities_class(C))
    assert model.decided
    assert len(model.category) == len(C)


def test_ore_failure_on_parallel_pair():
    """Test that inverting one of two parallel arrows has no calculus of fractions"""
    C = parallel()
    S = closure_class(C, ["f"])
    report = ore_check(C, S)
    assert not report.holds
    assert report.to_dict()["direction"] == "right"
    assert not ore_check(C, S, "left").holds
    with pytest.raises(PreconditionViolation):
        fraction_model(C, S)


def test_infinite_localisation_is_undecided():
    """Test that a free loop leaves the model undecided with a reason"""
    C = parallel()
    model = localise(C, closure_class(C, ["f"]))
    assert not model.decided
    assert model.engine == "rewriting"
    assert "word length" in model.reason
    assert model.equal("a", [("f", 1), ("f", -1)], [])
    with pytest.raises(ValueError):
        model.evaluate("a", [("f", 1)])


def test_evaluate_rejects_non_inverted_letters():
    """Test that only inverted morphisms may appear inverted"""
    C = arrow()
    model = localise(C, identities_class(C))
    with pytest.raises(ValueError):
        model.evaluate("1", [("f", -1)])


def test_saturation_of_arrow():
    """Test that the saturation is exact when the model is decided"""
    C = arrow()
    result = saturation(C, all_class(C))
    assert result.exact
    assert "f" in result.members
    assert result.inverse_words["f"] == [("f", -1)]


def test_induced_functor():
    """Test the universal property of the localisation"""
    C = arrow()
    model = localise(C, all_class(C))
    with pytest.raises(NotInverting):
        induced_functor(model, identity_functor(C))
    G = induced_functor(model, constant_functor(C, point(), "pt"))
    assert validate_functor(G).passed
    assert G(model.P("f")) == "id_pt"


def test_localised_functor_of_setup():
    """Test that T induces a functor between the localisations"""
    setup = riou_fixture()
    MC = localise(setup.C, setup.S)
    MD = localise(setup.D, setup.Sprime)
    Tbar = localised_functor(setup.T, MC, MD)
    assert validate_functor(Tbar).passed


@pytest.mark.parametrize("setup", [riou_fixture(), meet_lattice_setup()], ids=lambda s: s.name)
def test_certified_equivalences(setup):
    """Test that the certificate verifies on good setups"""
    cert = build_equivalence(setup)
    assert cert.status == CERTIFIED
    assert all(cert.checks.values())
    assert cert.to_dict()["status"] == CERTIFIED
    assert equivalence_oracle(setup).status == EQUIVALENCE


def test_certificate_from_document():
    """Test the certificate on the lattice fixture file"""
    setup = resolve(load_document(fixture_path("lattice.cat"))).setup("Lattice")
    assert build_equivalence(setup).certified


def test_section_choices_are_comparable():
    """Test that certificates for two section choices are isomorphic"""
    setup = riou_fixture()
    first = build_equivalence(setup)
    second = build_equivalence(setup, choice_seed=3)
    assert compare_certificates(first, second)["holds"]


def test_missing_object_is_not_an_equivalence():
    """Test the oracle and the precondition on Pt into Pt+Pt"""
    setup = point_into_two_points()
    verdict = equivalence_oracle(setup)
    assert verdict.status == NOT_EQUIVALENCE
    assert verdict.witness == {"not essentially surjective": "pt2"}
    with pytest.raises(PreconditionViolation) as info:
        build_equivalence(setup)
    assert info.value.check == "t0.0"


def test_kan_extension_along_localisation():
    """Test the pointwise extension of the identity of Arrow"""
    setup = riou_fixture()
    cert = build_equivalence(setup)
    F = identity_functor(setup.D)
    G = induced_functor(cert.source_model, compose_functors(F, setup.T))
    result = kan_extend(setup, F, G, cert)
    assert result.status == CERTIFIED
    assert result.eta == {"0": "f", "1": "id_1"}
    assert validate_functor(result.RF).passed


def test_kan_extension_rejects_mismatched_functor():
    """Test that G must agree with F after T"""
    setup = riou_fixture()
    cert = build_equivalence(setup)
    F = identity_functor(setup.D)
    G = induced_functor(cert.source_model, compose_functors(F, setup.T))
    with pytest.raises(PreconditionViolation):
        kan_extend(setup, identity_functor(point()), G, cert)


def test_hom_fractions_lists_roofs_per_class():
    """Test that inverting f gives one fraction class in each direction"""
    C = arrow()
    assert len(hom_fractions(C, all_class(C), "1", "0")) == 1
    assert len(hom_fractions(C, all_class(C), "0", "1")) == 1
    assert hom_fractions(C, identities_class(C), "1", "0") == []


def test_roofs_are_not_charged_to_the_morphism_cap():
    """Test that a localisation fitting the morphism cap is built from more roofs"""
    C = square_lattice()
    S = all_class(C)
    model = fraction_model(C, S, cap=16)
    assert len(model.category) == 16
    assert sum(len(roofs) for roofs in model.classes.values()) == 25
    assert localise(C, S, Budgets(morphism_cap=16)).engine == "right-fractions"


def test_fraction_budgets_are_named():
    """Test that roofs and classes exhaust different budgets"""
    C = square_lattice()
    S = all_class(C)
    with pytest.raises(BudgetExceeded) as roofs:
        fraction_model(C, S, roof_cap=24)
    assert roofs.value.budget == "roof_cap"
    with pytest.raises(BudgetExceeded) as classes:
        fraction_model(C, S, cap=15)
    assert classes.value.budget == "morphism_cap"


@pytest.mark.slow
def test_fractions_agree_with_rewriting():
    """Test that fractions and rewriting normal forms give the same hom-set sizes"""
    budgets = Budgets()
    compared = 0
    for strategy in STRATEGIES:
        for setup in stream(GenConfig(seed=0, strategy=strategy), 100):
            for K, S in ((setup.C, setup.S), (setup.D, setup.Sprime)):
                if not ore_check(K, S, "right").holds:
                    continue
                fractions = fraction_model(K, S).category
                rewriting = rewriting_model(K, S, budgets)
                if not rewriting.decided:
                    continue
                compared += 1
                for x in K.objects:
                    for y in K.objects:
                        assert len(fractions.hom(x, y)) == len(rewriting.category.hom(x, y)), (setup.name, x, y)
    assert compared >= 100


KAN_FIXTURES = {
    "RiouFix": riou_fixture,
    "SquareAll": meet_lattice_setup,
    "IdArrow": lambda: identity_setup(arrow(), ["f"]),
}


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(KAN_FIXTURES))
def test_kan_unit_from_every_slice_object(name):
    """Test that eta_d is the same from every object of I_d and that eta is natural"""
    setup = KAN_FIXTURES[name]()
    cert = build_equivalence(setup)
    assert cert.certified
    MD = cert.target_model
    F, G = MD.P, cert.Tbar
    result = kan_extend(setup, F, G, cert)
    assert result.status == CERTIFIED
    E = MD.category
    for d in setup.D.objects:
        family = cert.zigzags[d].family
        for c, s in family.payloads.values():
            back_counit = inverse_of(E, G(cert.counit[c]))
            back_section = inverse_of(E, G(cert.Fbar(MD.P(s))))
            assert back_counit is not None and back_section is not None
            assert E.compose(back_section, E.compose(back_counit, F(s))) == result.eta[d]
    for f in setup.D.morphisms:
        d0, d1 = setup.D.src(f), setup.D.dst(f)
        assert E.compose(result.eta[d1], F(f)) == E.compose(result.RF(MD.P(f)), result.eta[d0])
