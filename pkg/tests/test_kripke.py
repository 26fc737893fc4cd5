import random

import pytest
from hypothesis import given, settings, strategies as st

from builders import chain3, heap_model
from daycalc.errors import DomainMismatch, MissingStructure, UnknownSymbol
from daycalc.kripke import (
    BOT,
    EMP,
    TOP,
    Evaluator,
    Oracle,
    at,
    atom,
    bi_adjunction_check,
    conj,
    disj,
    eval,
    heyting_ops,
    hybrid_check,
    imp,
    nom,
    semantic_closure_check,
    star,
    up_sets,
    wand,
)

p, q = atom("p"), atom("q")


def test_nominal_is_principal_up_set():
    F = chain3()
    assert Evaluator(F).nominal("b") == {"b", "c"}


def test_at_is_constant():
    F = chain3()
    ev = Evaluator(F)
    assert ev.at("b", frozenset("bc")) == {"a", "b", "c"}
    assert ev.at("a", frozenset("bc")) == frozenset()


def test_rooted_and_span_at_agree():
    F = chain3()
    rooted, span = Evaluator(F, "rooted"), Evaluator(F, "span")
    for s in up_sets(F.worlds):
        for w in "abc":
            assert rooted.at(w, s) == span.at(w, s)


def test_heyting_implication():
    F = chain3()
    H = heyting_ops(F)
    # up(b) -> up(c) holds only where every later world in up(b) is in up(c)
    assert H.implies(frozenset("bc"), frozenset("c")) == {"c"}
    for s in up_sets(F.worlds):
        assert H.implies(s, s) == H.top


def test_hybrid_check_on_chain():
    assert hybrid_check(chain3()).passed


def test_separating_connectives():
    M = heap_model("xy")
    val = {"p": {"x", "xy"}, "q": {"y", "xy"}}
    assert eval(star(p, q), M, val) == {"xy"}
    assert eval(wand(p, q), M, val) == {"x", "y", "xy"}
    assert eval(star(BOT, p), M, val) == frozenset()
    assert eval(EMP, M, val) == {"e"}
    assert eval(imp(p, p), M, val) == {"e", "x", "y", "xy"}


def test_star_commutes():
    M = heap_model("xyz")
    ev = Evaluator(M)
    sets = up_sets(M.worlds)
    rng = random.Random(0)
    for _ in range(30):
        a, b = rng.choice(sets), rng.choice(sets)
        assert ev.star(a, b) == ev.star(b, a)


def test_missing_structure():
    F = chain3()
    with pytest.raises(MissingStructure):
        eval(star(p, p), F, {"p": {"c"}})
    with pytest.raises(MissingStructure):
        eval(EMP, F, {})
    M = heap_model("xy")
    with pytest.raises(MissingStructure):
        eval(at("x", p), M, {"p": {"x"}}, at_mode="rooted")


def test_bad_valuations():
    F = chain3()
    with pytest.raises(DomainMismatch):
        eval(p, F, {"p": {"a"}})
    with pytest.raises(UnknownSymbol):
        eval(p, F, {"p": {"z"}})
    with pytest.raises(UnknownSymbol):
        eval(q, F, {"p": {"c"}})


def test_galois_on_ordered_heaps():
    M = heap_model("xy", ordered=True)
    assert bi_adjunction_check(M, frozenset({"x", "xy"}), samples=200).passed


def test_closure_on_small_model():
    M = heap_model("xy")
    assert semantic_closure_check(M, {"p": {"x", "xy"}, "q": {"y", "xy"}}, depth=2).passed


def formulas(worlds):
    leaves = st.sampled_from([p, q, TOP, BOT, EMP] + [nom(w) for w in worlds])

    def extend(sub):
        return st.one_of(
            st.builds(conj, sub, sub),
            st.builds(disj, sub, sub),
            st.builds(imp, sub, sub),
            st.builds(star, sub, sub),
            st.builds(wand, sub, sub),
            st.builds(at, st.sampled_from(worlds), sub),
        )

    return st.recursive(leaves, extend, max_leaves=6)


_ORDERED = heap_model("xy", ordered=True)
_UPS = up_sets(_ORDERED.worlds)
_WORLDS = sorted(_ORDERED.worlds.objects)


@settings(max_examples=60)
@given(formulas(_WORLDS), st.sampled_from(_UPS), st.sampled_from(_UPS))
def test_eval_matches_oracle(f, a, b):
    val = {"p": a, "q": b}
    assert eval(f, _ORDERED, val, at_mode="span") == Oracle(_ORDERED).eval(f, val)
