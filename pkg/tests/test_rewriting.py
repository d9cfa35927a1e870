"""Tests for word presentations, completion and table saturation."""

import pytest

from locbench.categories.catalog import arrow, parallel
from locbench.categories.core import all_class, closure_class, validate_category
from locbench.errors import BudgetExceeded
from locbench.theory.rewriting import kb_complete, loc_presentation, saturate_table


def test_presentation_of_arrow():
    """Test generators and relators of the localised arrow"""
    P = loc_presentation(arrow(), all_class(arrow()))
    assert P.generators == ("f", "f^-1")
    assert P.typing["f^-1"] == ("1", "0")
    assert (("f", "f^-1"), ()) in P.relators
    assert P.symbols([("id_0", 1), ("f", 1)]) == ("f",)
    with pytest.raises(ValueError):
        loc_presentation(parallel(), closure_class(parallel(), ["f"])).symbols([("g", -1)])


def test_completion_cancels_inverses():
    """Test that the completed system reduces f f^-1 to the empty word"""
    system = kb_complete(loc_presentation(arrow(), all_class(arrow())))
    assert system.complete
    assert system.reduce(("f", "f^-1", "f")) == ("f",)
    assert system.equal(("f", "f^-1"), ())


def test_irreducible_words_of_free_loop():
    """Test that the enumeration reports an infinite hom-set"""
    C = parallel()
    system = kb_complete(loc_presentation(C, closure_class(C, ["f"])))
    words, closed = system.irreducible_words("a", 4)
    assert not closed
    assert () in words
    assert ("f",) in words


def test_saturate_free_composites():
    """Test that free composites are named in composition order"""
    C, names = saturate_table("Comp", ["x", "y", "z"], [("a", "x", "y"), ("b", "y", "z")], [])
    assert validate_category(C).passed
    assert len(C) == 6
    assert C.compose("b", "a") == "b.a"
    assert names == {"a": "a", "b": "b"}


def test_saturate_cyclic_relation():
    """Test that t^3 = 1 closes into three morphisms"""
    C, _ = saturate_table("Z3", ["x"], [("t", "x", "x")], [(("t", "t", "t"), ("id_x",))])
    assert len(C) == 3
    assert C.compose("t", "t.t") == "id_x"


def test_saturate_respects_equations():
    """Test that a declared equation identifies two composites"""
    C, _ = saturate_table(
        "Sq",
        ["a", "b", "c", "d"],
        [("f", "a", "b"), ("g", "b", "d"), ("h", "a", "c"), ("k", "c", "d")],
        [(("f", "g"), ("h", "k"))],
    )
    assert validate_category(C).passed
    assert C.compose("g", "f") == C.compose("k", "h")
    assert len(C.hom("a", "d")) == 1


def test_saturate_infinite_table():
    """Test that a free loop exceeds the morphism cap"""
    with pytest.raises(BudgetExceeded) as info:
        saturate_table("Free", ["x"], [("t", "x", "x")], [], cap=20)
    assert info.value.budget == "morphism_cap"
