import random

from hypothesis import given, settings, strategies as st

from builders import heap_model
from daycalc.day import (
    adjunction_check,
    constant,
    day_coend_formula,
    day_extend,
    empty_copresheaf,
    indicator,
    representable,
    residual,
    route_equivalence,
)
from daycalc.errors import ArityMismatch, DomainMismatch
from daycalc.fincat import empty_op, identity_op, total_op
from daycalc.gen import chain, random_copresheaf, random_poset, random_total_op
from daycalc.prof import find_iso
import pytest


def hxy():
    M = heap_model("xy")
    return M, indicator(M.worlds, ["x", "xy"]), indicator(M.worlds, ["xy", "y"])


def test_star_on_disjoint_heaps():
    M, p, q = hxy()
    out = day_extend(M.join, [p, q])
    assert out.support() == {"xy"}
    assert len(out.at("xy")) == 1


def test_residual_on_disjoint_heaps():
    M, p, q = hxy()
    # wand p q: extending h by any disjoint heap in p lands in q
    assert residual(M.join, 1, q, [p]).support() == {"x", "y", "xy"}


def test_star_counts_splittings():
    M = heap_model("xy")
    top = indicator(M.worlds, M.worlds.objects)
    out = day_extend(M.join, [top, top])
    # xy splits four ways, x and y two ways each
    assert {h: len(out.at(h)) for h in M.worlds.objects} == {"e": 1, "x": 2, "y": 2, "xy": 4}


def test_identity_op_is_unit():
    C = chain(3)
    F = random_copresheaf(random.Random(2), C)
    assert find_iso(day_extend(identity_op(C), [F]).value, F) is not None


def test_representables_under_max():
    C = chain(3)
    mx = total_op(C, 2, max)
    out = day_extend(mx, [representable(C, 0), representable(C, 1)])
    assert find_iso(out.value, representable(C, 1)) is not None


def test_empty_op_gives_empty_and_terminal_residual():
    C = chain(2)
    F = constant(C, ["a"])
    assert day_extend(empty_op(C, 2), [F, F]).value.size() == 0
    R = residual(empty_op(C, 2), 1, empty_copresheaf(C), [F])
    assert all(len(R.at(c)) == 1 for c in C.objects)


def test_argument_errors():
    C = chain(2)
    mx = total_op(C, 2, max)
    with pytest.raises(ArityMismatch):
        day_extend(mx, [constant(C, ["a"])])
    with pytest.raises(DomainMismatch):
        day_extend(mx, [constant(C, ["a"]), constant(chain(3), ["a"])])


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_routes_agree(seed):
    rng = random.Random(seed)
    C = random_poset(rng, rng.randint(1, 3))
    theta = random_total_op(rng, C, rng.randint(1, 2))
    fs = [random_copresheaf(rng, C) for _ in range(theta.arity)]
    assert route_equivalence(theta, fs).passed
    a = day_coend_formula(theta, fs, "joint")
    b = day_coend_formula(theta, fs, "fubini")
    assert find_iso(a, b) is not None


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_residual_adjunction(seed, j):
    rng = random.Random(seed)
    C = random_poset(rng, rng.randint(1, 2))
    theta = random_total_op(rng, C, 2)
    fs = [random_copresheaf(rng, C, max_summands=1) for _ in range(2)]
    G = random_copresheaf(rng, C, max_summands=1)
    assert adjunction_check(theta, j, fs, G).passed
