"""Tests for finite categories, classes, functors, posets and diagrams."""

import pytest

from locbench.categories.catalog import (
    arrow,
    chain_category,
    cospan,
    cyclic_group,
    indiscrete,
    parallel,
    point,
    span,
    square_lattice,
)
from locbench.categories.core import (
    FinPoset,
    FunctorData,
    MorphClass,
    Pushout,
    all_class,
    build_category,
    chain,
    chain_diagram,
    closure_class,
    compose_functors,
    constant_functor,
    diagram_category,
    enumerate_diagrams,
    enumerate_posets,
    find_initial,
    find_isomorphism,
    find_product,
    find_pushouts,
    find_terminal,
    full_subcategory,
    functor_category,
    has_finite_products,
    identities_class,
    identity_functor,
    inclusion_functor,
    inverse_of,
    is_product,
    make_poset,
    opposite,
    poset_category,
    poset_product,
    validate_category,
    validate_class,
    validate_functor,
    validate_poset,
)


@pytest.mark.parametrize(
    "category",
    [point(), arrow(), parallel(), span(), cospan(), indiscrete(3), chain_category(), square_lattice(), cyclic_group()],
    ids=lambda C: C.name,
)
def test_catalog_categories_are_valid(category):
    """Test that every catalog category passes validation"""
    assert validate_category(category).passed


def test_identities_are_generated():
    """Test that identities and their composites are filled in"""
    C = arrow()
    assert C.identity == {"0": "id_0", "1": "id_1"}
    assert C.compose("f", "id_0") == "f"
    assert C.compose("id_1", "f") == "f"
    assert len(C) == 3


def test_reserved_identity_names():
    """Test that arrows may not take identity names"""
    with pytest.raises(ValueError):
        build_category("Bad", ["x"], [("id_y", "x", "x")], {})


def test_missing_composite_is_reported():
    """Test that an incomplete table fails validation"""
    C = build_category("Loop", ["a", "b"], [("f", "a", "b"), ("g", "b", "a")], {})
    report = validate_category(C)
    assert report.status == "fail"
    assert "compose undefined" in report.laws()


def test_associativity_violation_is_reported():
    """Test that a non-associative table is caught"""
    table = {("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"}
    C = build_category("NonAssoc", ["x"], [("a", "x", "x"), ("b", "x", "x")], table)
    assert "associativity" in validate_category(C).laws()


def test_compose_all_is_applicative():
    """Test that compose_all(g, f) is g after f"""
    C = chain_category()
    assert C.compose_all("g", "f") == "gf"
    assert C.compose_all("id_2", "g", "f", "id_0") == "gf"


def test_class_validation():
    """Test identity and closure requirements on marked classes"""
    C = chain_category()
    assert validate_class(closure_class(C, ["f", "g"])).passed
    not_closed = MorphClass(C, frozenset(C.identity.values()) | {"f", "g"})
    assert "not composition-closed" in validate_class(not_closed).laws()
    no_identity = MorphClass(C, frozenset({"f"}))
    assert "missing identity" in validate_class(no_identity).laws()


def test_closure_adds_composites():
    """Test that the closure of f and g contains gf"""
    S = closure_class(chain_category(), ["f", "g"])
    assert "gf" in S
    assert S.non_identities() == ["f", "g", "gf"]


def test_inverses_in_groupoids():
    """Test inverse search in Z2 and Ind(3)"""
    assert inverse_of(cyclic_group(), "t") == "t"
    assert inverse_of(indiscrete(3), "u0_1") == "u1_0"
    assert inverse_of(arrow(), "f") is None


def test_functor_properties():
    """Test the details recorded by functor validation"""
    D = arrow()
    C = full_subcategory(D, ["1"], "One")
    report = validate_functor(inclusion_functor(C, D, "T"), identities_class(C), all_class(D))
    assert report.passed
    assert report.details["fully_faithful"]
    assert not report.details["essentially_surjective"]
    assert report.details["preserves_classes"]

    const = constant_functor(parallel(), point(), "pt")
    details = validate_functor(const).details
    assert not details["faithful"]
    assert details["essentially_surjective"]


def test_broken_functor_is_reported():
    """Test that a functor breaking composition fails validation"""
    C = chain_category()
    F = identity_functor(C)
    broken = FunctorData("Broken", C, C, F.omap, {**F.mmap, "id_0": "f"})
    assert not validate_functor(broken).passed


def test_compose_functors():
    """Test that functor composition composes both maps"""
    D = arrow()
    C = full_subcategory(D, ["1"], "One")
    T = inclusion_functor(C, D, "T")
    composite = compose_functors(identity_functor(D), T)
    assert composite.name == "Id_Arrow.T"
    assert composite.obj("1") == "1"
    assert validate_functor(composite).passed


def test_opposite_and_isomorphism():
    """Test that the span is the opposite of the cospan"""
    assert find_isomorphism(span(), opposite(cospan())) is not None
    assert find_isomorphism(arrow(), parallel()) is None
    assert opposite(opposite(span())) == span()


def test_terminal_and_initial_objects():
    """Test universal objects in the square lattice"""
    C = square_lattice()
    assert find_terminal(C) == "11"
    assert find_initial(C) == "00"
    assert find_terminal(parallel()) is None


def test_products_are_meets():
    """Test that products in the square lattice are meets"""
    C = square_lattice()
    assert is_product(C, "00", "00<01", "00<10")
    assert find_product(C, "01", "10") == ("00", "00<01", "00<10")
    assert has_finite_products(C).holds
    assert not has_finite_products(span()).holds


def test_pushouts():
    """Test that pushouts are joins and that the span has none"""
    C = square_lattice()
    assert find_pushouts(C, "00<01", "00<10") == (Pushout("11", "01<11", "10<11"),)
    assert find_pushouts(span(), "p", "q") == ()


def test_poset_closure_and_validation():
    """Test transitive closure of declared relations"""
    E = make_poset("E", ["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert E.le("a", "c")
    assert not E.lt("c", "a")
    assert validate_poset(E).passed
    assert E.linear_order() == ["a", "b", "c"]

    cyclic = FinPoset("Bad", ("a", "b"), frozenset({("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")}))
    assert "antisymmetry" in validate_poset(cyclic).laws()


def test_chain_and_product():
    """Test chains, products and poset categories"""
    delta = chain(2)
    assert delta.name == "Delta2"
    assert delta.elements == ("0", "1", "2")
    square = poset_product(chain(1), chain(1))
    assert len(square) == 4
    assert square.le("(0,0)", "(1,1)")
    assert not square.le("(0,1)", "(1,0)")
    C = poset_category(delta)
    assert C.compose("1<2", "0<1") == "0<2"


def test_enumerate_posets_counts():
    """Test the number of posets up to isomorphism"""
    assert [len(enumerate_posets(n)) for n in (1, 2, 3)] == [1, 3, 8]


def test_chain_diagram_composes():
    """Test that chain diagrams carry composites"""
    diagram = chain_diagram(chain_category(), ["f", "g"])
    assert diagram.at("0") == "0"
    assert diagram.at("2") == "2"
    assert diagram.arrow("0", "2") == "gf"
    assert diagram.arrow("1", "1") == "id_1"


def test_enumerate_diagrams_of_arrow():
    """Test functors from Delta1 into Arrow"""
    assert len(enumerate_diagrams(arrow(), chain(1))) == 3


def test_diagram_category():
    """Test the functor category Arrow^Delta1 and the class lift"""
    dc = diagram_category(arrow(), chain(1))
    assert len(dc.category.objects) == 3
    assert validate_category(dc.category).passed
    lifted = dc.lift_class(all_class(arrow()))
    assert len(lifted) == len(dc.category)
    assert validate_class(dc.lift_class(identities_class(arrow()))).passed


def test_functor_category_matches_diagram_category():
    """Test that functor_category returns the diagram category and its class lift"""
    category, lift = functor_category(arrow(), chain(1))
    assert category == diagram_category(arrow(), chain(1)).category
    assert validate_class(lift(all_class(arrow()))).passed
