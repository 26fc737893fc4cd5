from hypothesis import given, strategies as st

from daycalc.errors import UnknownElement
from daycalc.finbase import FinFn, FinSet, UnionFind, canon_sorted, disjoint_union, function_set, product, quotient_by_generated
import pytest


def naive_classes(elems, pairs):
    # grow each class to a fixed point
    cls = {x: {x} for x in elems}
    changed = True
    while changed:
        changed = False
        for a, b in pairs:
            merged = cls[a] | cls[b]
            for x in merged:
                if cls[x] != merged:
                    cls[x] = merged
                    changed = True
    return {frozenset(v) for v in cls.values()}


def test_finset_canonical_order_and_duplicates():
    s = FinSet([3, 1, 2])
    assert s.elements == (1, 2, 3)
    assert s.index(2) == 1
    with pytest.raises(UnknownElement):
        s.index(9)
    with pytest.raises(ValueError):
        FinSet([1, 1])


def test_mixed_types_sort_deterministically():
    assert canon_sorted(["b", 2, ("a",), 1]) == canon_sorted([1, ("a",), 2, "b"])


def test_quotient_small():
    q = quotient_by_generated(FinSet([1, 2, 3, 4]), [(1, 2), (2, 3)])
    assert q.classes == ((1, 2, 3), (4,))
    assert q.rep_of(3) == 1
    assert q.class_of(4) == (4,)


def test_quotient_rejects_unknown():
    with pytest.raises(UnknownElement):
        quotient_by_generated(FinSet([1, 2]), [(1, 5)])


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10))))
def test_quotient_matches_naive_closure(case):
    n, pairs = case
    q = quotient_by_generated(FinSet(range(n)), pairs)
    assert {frozenset(c) for c in q.classes} == naive_classes(range(n), pairs)
    for c in q.classes:
        assert all(q.rep_of(x) == min(c) for x in c)


def test_union_find_groups():
    uf = UnionFind("abcd")
    assert uf.union("a", "b")
    assert not uf.union("b", "a")
    assert sorted(map(sorted, uf.groups().values())) == [["a", "b"], ["c"], ["d"]]


def test_finfn_checks_totality():
    with pytest.raises(UnknownElement):
        FinFn(FinSet([1, 2]), FinSet("a"), {1: "a"})
    with pytest.raises(UnknownElement):
        FinFn(FinSet([1]), FinSet("a"), {1: "b"})


def test_set_constructions_sizes():
    a, b = FinSet([1, 2]), FinSet("xyz")
    carrier, (p1, p2) = product([a, b])
    assert len(carrier) == 6
    assert p2((2, "y")) == "y"
    assert len(function_set(a, b)) == 9
    carrier, injections = disjoint_union([a, b])
    assert len(carrier) == 5
    assert injections[1]("x") == (1, "x")
