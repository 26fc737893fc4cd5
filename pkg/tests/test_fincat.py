import pytest

from daycalc.errors import CategoryError, DomainMismatch, NotAPoset
from daycalc.fincat import (
    comma_object,
    discrete,
    find_category_iso,
    from_arrows,
    identity_functor,
    opposite,
    partial_op,
    poset_as_category,
    product_category,
    restrict_op,
    strong_equal,
    total_op,
    validate_category,
    weak_equal,
)
from daycalc.gen import chain, random_poset
from hypothesis import given, strategies as st
import random


def test_poset_closure_and_generators():
    P = poset_as_category("abc", [("a", "b"), ("b", "c")])
    assert P.leq("a", "c")
    assert len(P.morphisms) == 6
    assert P.generators() == [("a", "b"), ("b", "c")]
    assert P.is_thin()


def test_poset_antisymmetry_rejected():
    with pytest.raises(NotAPoset):
        poset_as_category("ab", [("a", "b"), ("b", "a")])


def test_product_of_two_chains():
    C = chain(2)
    P, projs = product_category([C, C])
    assert len(P.objects) == 4
    assert len(P.morphisms) == 9
    assert validate_category(P).passed
    assert [p.obj[(0, 1)] for p in projs] == [0, 1]


def test_arrow_category_of_chain():
    C = chain(3)
    idf = identity_functor(C)
    K = comma_object(idf, idf)
    assert len(K.category.objects) == 6
    assert validate_category(K.category).passed


def test_missing_composite_is_reported():
    with pytest.raises(CategoryError):
        from_arrows("st", {"f": ("s", "t"), "l": ("t", "t")}, {})


def test_walk_category_valid():
    W = from_arrows("st", {"f": ("s", "t"), "g": ("s", "t"), "l": ("t", "t")}, {("l", "f"): "g", ("l", "g"): "g", ("l", "l"): "l"})
    assert len(W.hom("s", "t")) == 2
    assert W.chain("l", "l", "f") == "g"


def test_opposite_is_involutive():
    C = chain(3)
    assert opposite(opposite(C)) == C
    assert find_category_iso(C, opposite(C)) is not None


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_random_posets_are_categories(seed, n):
    assert validate_category(random_poset(random.Random(seed), n)).passed


def test_strong_and_weak_equality():
    C = chain(3)
    mx = total_op(C, 2, max)
    part = restrict_op(mx, [(0, 0), (1, 2)])
    other = partial_op(C, 2, {(0, 0): 0, (1, 2): 2, (2, 2): 2})
    assert weak_equal(mx, part) and not strong_equal(mx, part)
    assert weak_equal(part, other) and not strong_equal(part, other)
    bad = partial_op(C, 2, {(0, 0): 1})
    assert not weak_equal(mx, bad)


def test_restrict_outside_domain():
    C = discrete("ab")
    op = partial_op(C, 1, {"a": "b"})
    with pytest.raises(DomainMismatch):
        restrict_op(op, [("b",)])


def test_partial_op_must_be_monotone():
    C = chain(2)
    with pytest.raises(Exception):
        partial_op(C, 1, {0: 1, 1: 0})
