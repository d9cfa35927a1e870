"""Named small categories and setups used as fixtures."""

from .core import (
    FinCategory,
    all_class,
    build_category,
    closure_class,
    full_subcategory,
    identities_class,
    identity_functor,
    inclusion_functor,
    make_poset,
    poset_category,
)
from .setup import LocalisationSetup


def point() -> FinCategory:
    return build_category("Pt", ["pt"], [], {})


def arrow() -> FinCategory:
    return build_category("Arrow", ["0", "1"], [("f", "0", "1")], {})


def parallel() -> FinCategory:
    return build_category("Par", ["a", "b"], [("f", "a", "b"), ("g", "a", "b")], {})


def span() -> FinCategory:
    """b <- a -> c."""
    return build_category("Span", ["a", "b", "c"], [("p", "a", "b"), ("q", "a", "c")], {})


def cospan() -> FinCategory:
    """b -> a <- c; equal to the opposite of :func:`span` up to its name."""
    return build_category("Cospan", ["a", "b", "c"], [("p", "b", "a"), ("q", "c", "a")], {})


def indiscrete(n: int) -> FinCategory:
    """Ind(n): exactly one morphism between any two of n objects."""
    objects = [str(i) for i in range(n)]

    def name(i: str, j: str) -> str:
        return f"u{i}_{j}"

    arrows = [(name(i, j), i, j) for i in objects for j in objects if i != j]
    table = {}
    for i in objects:
        for j in objects:
            for k in objects:
                if i != j and j != k:
                    table[(name(j, k), name(i, j))] = f"id_{i}" if i == k else name(i, k)
    return build_category(f"Ind{n}", objects, arrows, table)


def discrete(n: int) -> FinCategory:
    return build_category(f"Disc{n}", [str(i) for i in range(n)], [], {})


def two_points() -> FinCategory:
    """Pt ⊔ Pt, containing the object of :func:`point`."""
    return build_category("PtPt", ["pt", "pt2"], [], {})


def chain_category() -> FinCategory:
    """0 -f-> 1 -g-> 2 with composite gf."""
    return build_category(
        "Chain", ["0", "1", "2"], [("f", "0", "1"), ("g", "1", "2"), ("gf", "0", "2")], {("g", "f"): "gf"}
    )


def square_lattice() -> FinCategory:
    """The poset {0,1}² as a category; products are meets."""
    order = make_poset(
        "Square",
        ["00", "01", "10", "11"],
        [("00", "01"), ("00", "10"), ("01", "11"), ("10", "11")],
    )
    return poset_category(order)


def cyclic_group() -> FinCategory:
    """ℤ/2 as a one-object groupoid."""
    return build_category("Z2", ["pt"], [("t", "pt", "pt")], {("t", "t"): "id_pt"})


def riou_fixture() -> LocalisationSetup:
    """C = {1} ⊂ D = Arrow, S′ = all of Arrow, S = {id_1}."""
    D = arrow()
    C = full_subcategory(D, ["1"], "One")
    return LocalisationSetup(
        "RiouFix",
        C,
        D,
        inclusion_functor(C, D, "T"),
        identities_class(C, "S"),
        all_class(D, "Sprime"),
    )


def identity_setup(C: FinCategory, seeds=(), name: str = "") -> LocalisationSetup:
    """T = Id with S = S′ the closure of ``seeds``."""
    S = closure_class(C, seeds, "S")
    return LocalisationSetup(
        name or f"Id{C.name}",
        C,
        C,
        identity_functor(C),
        S,
        closure_class(C, seeds, "Sprime"),
    )


def point_into_two_points() -> LocalisationSetup:
    """Pt ↪ Pt ⊔ Pt with trivial classes: not an equivalence after localising."""
    C, D = point(), two_points()
    return LocalisationSetup(
        "PtInPtPt",
        C,
        D,
        inclusion_functor(C, D, "T"),
        identities_class(C, "S"),
        identities_class(D, "Sprime"),
    )


def meet_lattice_setup() -> LocalisationSetup:
    """T = Id on {0,1}² with every arrow marked."""
    C = square_lattice()
    return identity_setup(C, C.non_identities(), "SquareAll")
