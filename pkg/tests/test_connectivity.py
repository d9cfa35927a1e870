"""Tests for components, fundamental groups and filtering conditions."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locbench.categories.catalog import (
    arrow,
    cospan,
    cyclic_group,
    discrete,
    indiscrete,
    parallel,
    point,
    span,
    square_lattice,
)
from locbench.categories.connectivity import (
    SUFFICIENT,
    UNKNOWN,
    connectivity,
    filtering_check,
    infinity_condition,
    nerve_presentation,
    pi0,
    pi1_presentation,
)
from locbench.categories.core import FinCategory, Morphism, build_category, identity_name
from locbench.categories.groups import NONTRIVIAL, TRIVIAL, decide_triviality
from locbench.categories.groups import UNKNOWN as UNKNOWN_PI1
from locbench.fuzz import STRATEGIES, GenConfig, gen_category
from locbench.utils.config import Budgets


def test_components():
    """Test that pi0 splits discrete categories"""
    assert pi0(discrete(3)) == [["0"], ["1"], ["2"]]
    assert pi0(span()) == [["a", "b", "c"]]


def test_parallel_pair_has_a_free_loop():
    """Test that two parallel arrows give a free group of rank one"""
    C = parallel()
    verdict = decide_triviality(pi1_presentation(C, C.objects))
    assert verdict.status == NONTRIVIAL
    assert verdict.certificate["free_rank"] == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_indiscrete_categories_are_simply_connected(n):
    """Test that Ind(n) has trivial fundamental group"""
    C = indiscrete(n)
    assert decide_triviality(pi1_presentation(C, C.objects)).status == TRIVIAL


def test_cyclic_group_has_torsion():
    """Test that the one-object Z2 has fundamental group Z2"""
    C = cyclic_group()
    verdict = decide_triviality(pi1_presentation(C, C.objects))
    assert verdict.status == NONTRIVIAL
    assert verdict.certificate["torsion"] == [2]


@pytest.mark.parametrize(
    "category",
    [point(), arrow(), parallel(), span(), indiscrete(3), cyclic_group(), square_lattice()],
    ids=lambda C: C.name,
)
def test_nerve_oracle_agrees(category):
    """Test that the nerve presentation gives the same verdict"""
    for part in pi0(category):
        fast = decide_triviality(pi1_presentation(category, part))
        slow = decide_triviality(nerve_presentation(category, part))
        assert fast.status == slow.status


def test_empty_component_is_rejected():
    """Test that a presentation needs objects"""
    with pytest.raises(ValueError):
        pi1_presentation(point(), [])


def test_lattice_is_filtering_both_ways():
    """Test the square lattice against both filtering conditions"""
    report = filtering_check(square_lattice())
    assert report.ordered
    assert report.cofiltering
    assert report.filtering
    assert infinity_condition(square_lattice()) == "cofiltering"


def test_parallel_pair_is_not_filtering():
    """Test that the parallel pair fails the equaliser clause"""
    report = filtering_check(parallel())
    assert not report.ordered
    assert not report.cofiltering
    assert report.witnesses["cofiltering"]["clause"] == "equaliser"


def test_infinity_conditions_by_shape():
    """Test which sufficient condition each small shape meets"""
    assert infinity_condition(span()) == "cofiltering"
    assert infinity_condition(cospan()) == "filtering"
    assert infinity_condition(parallel()) is None


def test_connectivity_report():
    """Test the assembled report of the square lattice"""
    report = connectivity(square_lattice())
    assert report.connected0
    assert report.connected1
    assert report.infinity_verdict == SUFFICIENT
    data = report.to_dict()
    assert data["infinity"] == {"verdict": SUFFICIENT, "condition": "cofiltering"}
    assert data["pi1"][0]["status"] == TRIVIAL


def test_disconnected_report():
    """Test that a discrete category is not connected"""
    report = connectivity(discrete(2))
    assert not report.connected0
    assert len(report.pi1) == 2
    assert report.infinity_verdict == UNKNOWN


def test_empty_category():
    """Test that the empty category is reported as empty"""
    report = connectivity(build_category("Empty", [], [], {}))
    assert not report.nonempty
    assert not report.connected0
    assert report.components == []
    assert report.infinity_condition is None


def relabel(C, object_order, morphism_order):
    """Rename objects and non-identity morphisms of C along the given orders"""
    objects = {x: f"o{k}" for k, x in zip(object_order, C.objects)}
    names = {C.identity[x]: identity_name(objects[x]) for x in C.objects}
    names.update({f: f"m{k}" for k, f in zip(morphism_order, C.non_identities())})
    return FinCategory(
        f"{C.name}'",
        objects.values(),
        [Morphism(names[f], objects[C.src(f)], objects[C.dst(f)]) for f in C.morphisms],
        {objects[x]: names[C.identity[x]] for x in C.objects},
        {(names[g], names[f]): names[h] for (g, f), h in C.table.items()},
    )


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_pi1_verdict_is_invariant_under_relabeling(data):
    """Test that renaming objects and morphisms does not change the verdict"""
    C = data.draw(st.sampled_from([parallel(), cyclic_group(), span(), square_lattice(), indiscrete(3)]))
    object_order = data.draw(st.permutations(range(len(C.objects))))
    morphism_order = data.draw(st.permutations(range(len(C.non_identities()))))
    D = relabel(C, object_order, morphism_order)
    before = decide_triviality(pi1_presentation(C, C.objects))
    after = decide_triviality(pi1_presentation(D, D.objects))
    assert after.status == before.status


@pytest.mark.slow
def test_nerve_oracle_agrees_on_generated_categories():
    """Test that pi1 verdicts match the nerve presentation on generated categories"""
    budgets = Budgets()
    categories = [
        gen_category(GenConfig(seed=seed, strategy=strategy, max_objects=5, max_morphisms=10))
        for strategy in STRATEGIES
        for seed in range(60)
    ]
    assert len(categories) >= 200
    components = unknown = 0
    for category in categories:
        assert len(category.objects) <= 5
        for part in pi0(category):
            components += 1
            fast = decide_triviality(pi1_presentation(category, part), budgets)
            slow = decide_triviality(nerve_presentation(category, part), budgets)
            if UNKNOWN_PI1 in (fast.status, slow.status):
                unknown += 1
                continue
            assert fast.status == slow.status, category.name
    assert unknown <= components // 100
