"""Tests for the setup generator and the shrinker."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locbench.categories.catalog import identity_setup, indiscrete, riou_fixture
from locbench.categories.core import is_isomorphism, validate_category, validate_functor
from locbench.fuzz import STRATEGIES, GenConfig, gen_category, gen_setup, setup_size, shrink, stream


def test_config_validation():
    """Test that bad generator settings are rejected"""
    with pytest.raises(ValueError):
        GenConfig(max_objects=0)
    with pytest.raises(ValueError):
        GenConfig(relation_density=1.5)
    with pytest.raises(ValueError):
        GenConfig(strategy="random")


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_generation_is_deterministic(strategy):
    """Test that a seed fixes the generated setup"""
    cfg = GenConfig(seed=11, strategy=strategy)
    first, second = gen_setup(cfg), gen_setup(cfg)
    assert first.name == f"fuzz_{strategy.replace('-', '_')}_11"
    assert first.C == second.C
    assert first.D == second.D
    assert first.S.members == second.S.members
    assert first.Sprime.members == second.Sprime.members


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), strategy=st.sampled_from(STRATEGIES))
def test_generated_setups_are_valid(seed, strategy):
    """Test that every generated setup validates within its bounds"""
    cfg = GenConfig(seed=seed, strategy=strategy, max_objects=3, max_morphisms=6)
    setup = gen_setup(cfg)
    assert setup.validate().passed
    for K in (setup.C, setup.D):
        assert 1 <= len(K.objects) <= cfg.max_objects
        assert len(K.non_identities()) <= cfg.max_morphisms


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_generated_categories_are_valid(seed):
    """Test that saturated quotients of DAGs are categories"""
    assert validate_category(gen_category(GenConfig(seed=seed, strategy="dag-quotient"))).passed


def test_stream_advances_seeds():
    """Test that a stream uses consecutive seeds"""
    names = [s.name for s in stream(GenConfig(seed=5), 3)]
    assert names == ["fuzz_poset_5", "fuzz_poset_6", "fuzz_poset_7"]


def test_shrink_keeps_predicate():
    """Test that shrinking stops at a locally minimal setup"""
    setup = identity_setup(indiscrete(4))
    small = shrink(setup, lambda s: len(s.D.objects) >= 2)
    assert len(small.D.objects) == 2
    assert small.C is small.D
    assert small.validate().passed
    assert setup_size(small) < setup_size(setup)


def test_shrink_without_failure_returns_input():
    """Test that a setup not satisfying the predicate is returned as is"""
    setup = riou_fixture()
    assert shrink(setup, lambda s: False) is setup


def test_monoid_glue_identifies_objects():
    """Test that gluing produces isomorphisms between distinct objects"""
    found = False
    for seed in range(200):
        K = gen_category(GenConfig(seed=seed, strategy="monoid-glue"))
        assert validate_category(K).passed
        if any(K.src(m) != K.dst(m) and is_isomorphism(K, m) for m in K.non_identities()):
            found = True
            break
    assert found


def test_monoid_product_keeps_endomorphisms():
    """Test that the product strategy yields non-identity endomorphisms"""
    categories = [gen_category(GenConfig(seed=seed, strategy="monoid-product")) for seed in range(20)]
    assert any(K.src(m) == K.dst(m) for K in categories for m in K.non_identities())


def test_random_functors_are_drawn():
    """Test that some setup has a functor that is neither constant nor fully faithful"""
    found = False
    for setup in stream(GenConfig(seed=0, strategy="dag-quotient", max_objects=3), 300):
        T = setup.T
        constant = all(setup.D.is_identity(T(f)) for f in setup.C.morphisms)
        if not constant and not validate_functor(T).details["fully_faithful"]:
            assert setup.validate().passed
            found = True
            break
    assert found


@pytest.mark.slow
@pytest.mark.parametrize("strategy", STRATEGIES)
def test_generator_soak(strategy):
    """Test that ten thousand generated setups per strategy all validate"""
    for setup in stream(GenConfig(seed=0, strategy=strategy), 10_000):
        assert setup.validate().passed, setup.name
        assert validate_category(setup.C).passed
