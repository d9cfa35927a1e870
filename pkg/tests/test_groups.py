"""Tests for the group triviality pipeline and its certificates."""

import pytest

from locbench.categories.groups import (
    NONTRIVIAL,
    TRIVIAL,
    UNKNOWN,
    GroupPresentation,
    abelian_invariants,
    cyclic_reduce,
    enumerate_cosets,
    decide_triviality,
    find_permutation_quotient,
    free_reduce,
    tietze_simplify,
    verify_certificate,
    verify_coset_table,
    verify_permutation_quotient,
)
from locbench.errors import BudgetExceeded
from locbench.utils.config import Budgets


def word(text):
    """Parse 'a b^-1 a' into letters."""
    letters = []
    for token in text.split():
        if token.endswith("^-1"):
            letters.append((token[:-3], -1))
        else:
            letters.append((token, 1))
    return tuple(letters)


S3 = GroupPresentation(("a", "b"), (word("a a"), word("b b b"), word("a b a b")))
A5 = GroupPresentation(("a", "b"), (word("a a"), word("b b b"), word("a b a b a b a b a b")))
# trivial, but no generator can be eliminated and the abelianisation vanishes
TRIVIAL_HARD = GroupPresentation(
    ("a", "b"),
    (word("a^-1 b a b^-1 b^-1"), word("b^-1 a b a^-1 a^-1")),
)


def test_reductions():
    """Test free and cyclic reduction"""
    assert free_reduce(word("a a^-1 b")) == word("b")
    assert cyclic_reduce(word("a b a^-1")) == word("b")
    assert cyclic_reduce(word("a a^-1")) == ()


def test_tietze_eliminates_single_occurrences():
    """Test that a generator occurring once is eliminated"""
    P = GroupPresentation(("a", "b"), (word("a b"),))
    simplified, record = tietze_simplify(P)
    assert len(simplified.generators) == 1
    assert record[0]["generator"] == "a"


def test_abelian_invariants():
    """Test free rank and torsion of small abelianisations"""
    assert abelian_invariants(GroupPresentation(("g",))) == (1, [])
    assert abelian_invariants(GroupPresentation(("t",), (word("t t"),))) == (0, [2])
    assert abelian_invariants(S3) == (0, [2])


def test_coset_enumeration_of_s3():
    """Test that S3 has six cosets of the trivial subgroup"""
    table = enumerate_cosets(S3, 100)
    assert len(table) == 6
    assert verify_coset_table(S3, table)


def test_coset_budget():
    """Test that the coset budget is enforced"""
    with pytest.raises(BudgetExceeded) as info:
        enumerate_cosets(S3, 3)
    assert info.value.budget == "max_cosets"


def test_tampered_table_is_rejected():
    """Test that a broken coset table fails verification"""
    table = [list(row) for row in enumerate_cosets(S3, 100)]
    table[0][0] = 0
    assert not verify_coset_table(S3, table)


def test_permutation_quotient_of_s3():
    """Test that S3 maps onto a transitive permutation group"""
    certificate = find_permutation_quotient(S3, 3, 10000)
    assert certificate is not None
    assert certificate["degree"] in (2, 3)
    assert verify_permutation_quotient(S3, certificate)


def test_trivial_group_has_no_quotient():
    """Test that the quotient search finds nothing for a trivial group"""
    assert find_permutation_quotient(TRIVIAL_HARD, 2, 10000) is None


def test_free_group_is_nontrivial():
    """Test that a free generator is detected by the abelianisation"""
    verdict = decide_triviality(GroupPresentation(("g",)))
    assert verdict.status == NONTRIVIAL
    assert verdict.certificate["method"] == "abelianisation"
    assert verdict.certificate["free_rank"] == 1


def test_tietze_verdict():
    """Test that eliminating every generator proves triviality"""
    P = GroupPresentation(("a", "b"), (word("a"), word("a b")))
    verdict = decide_triviality(P)
    assert verdict.status == TRIVIAL
    assert verdict.certificate["method"] == "tietze"
    assert verify_certificate(P, verdict)


def test_torsion_decides_s3():
    """Test that S3 is decided by its abelianisation"""
    verdict = decide_triviality(S3)
    assert verdict.status == NONTRIVIAL
    assert verdict.certificate["torsion"] == [2]
    assert verify_certificate(S3, verdict)


def test_perfect_group_needs_enumeration():
    """Test that A5 is decided by coset enumeration"""
    verdict = decide_triviality(A5)
    assert verdict.status == NONTRIVIAL
    assert verdict.certificate["method"] == "coset-enumeration"
    assert verdict.certificate["index"] == 60
    assert verify_certificate(A5, verdict)


def test_exhausted_budgets_give_unknown():
    """Test that exhausting every stage yields Unknown, never a wrong verdict"""
    verdict = decide_triviality(TRIVIAL_HARD, Budgets(max_cosets=2, quotient_degree=2))
    assert verdict.status == UNKNOWN
    assert verdict.reason
    assert verdict.to_dict()["status"] == UNKNOWN


def test_trivial_by_enumeration():
    """Test that the default budgets prove the hard presentation trivial"""
    verdict = decide_triviality(TRIVIAL_HARD)
    assert verdict.status == TRIVIAL
    assert verdict.certificate["method"] == "coset-enumeration"
    assert verify_certificate(TRIVIAL_HARD, verdict)


def test_forged_certificate_is_rejected():
    """Test that a certificate with the wrong invariants fails replay"""
    P = GroupPresentation(("t",), (word("t t"),))
    verdict = decide_triviality(P)
    verdict.certificate["torsion"] = [3]
    assert not verify_certificate(P, verdict)
