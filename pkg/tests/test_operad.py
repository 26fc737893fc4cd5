import random

from hypothesis import given, settings, strategies as st

from builders import heap_model
from daycalc.day import coproduct, indicator
from daycalc.fincat import identity_op, strong_equal, total_op
from daycalc.gen import chain, random_copresheaf, random_partial_op, random_poset, random_total_op
from daycalc.operad import (
    PerturbedWitness,
    coherence_check,
    day_pseudomorphism_check,
    lax_witness_search,
    mate_of_pullback,
    multi_compose,
    multi_compose_pullback,
    parse_term,
    preoperad_laws,
    span_bracketing_iso,
)
from daycalc.prof import is_iso


def test_join_after_identities_absent():
    M = heap_model("xy")
    one = identity_op(M.worlds)
    assert multi_compose(M.join, [one, one]) is None
    assert strong_equal(multi_compose(one, [M.join]), M.join)


def test_pullback_domain_counts_triples():
    # pairwise disjoint triples of subsets of an n-set: each cell picks a part or none
    for cells in ("xy", "xyz"):
        M = heap_model(cells)
        one = identity_op(M.worlds)
        left = multi_compose_pullback(M.join, [M.join, one])
        right = multi_compose_pullback(M.join, [one, M.join])
        assert len(left.domain.objects) == 4 ** len(cells)
        assert strong_equal(left, right)


def test_pullback_mate_invertible_for_total():
    C = chain(2)
    mx = total_op(C, 2, max)
    assert is_iso(mate_of_pullback(mx, [mx, identity_op(C)]))


def test_lax_witness_found():
    r = lax_witness_search(0)
    assert r.passed
    assert "component" in r.data


def test_preoperad_laws_on_max():
    C = chain(3)
    mx = total_op(C, 2, max)
    one = identity_op(C)
    assert preoperad_laws(mx, [mx, one], [[one, one], [one]]).passed


def test_span_bracketing():
    M = heap_model("xy")
    s, one = M.join.as_span(), identity_op(M.worlds).as_span()
    assert span_bracketing_iso(s, [one, s], [[one], [s, one]]).passed


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_pseudomorphism_random(seed):
    rng = random.Random(seed)
    C = random_poset(rng, rng.randint(1, 3))
    theta = random_partial_op(rng, C, 2, 1.0)
    thetas = [random_total_op(rng, C, rng.randint(1, 2)) for _ in range(2)]
    fss = [[random_copresheaf(rng, C) for _ in range(t.arity)] for t in thetas]
    assert day_pseudomorphism_check(theta, thetas, fss).passed


def test_coherence_and_perturbed_control():
    C = chain(2)
    mx = total_op(C, 2, max)
    one = identity_op(C)
    F = coproduct([indicator(C, [0, 1]), indicator(C, [0, 1])])
    fss = [[[F], [F]], [[F]]]
    assert coherence_check(None, mx, [mx, one], [[one, one], [one]], fss).passed
    assert not coherence_check(PerturbedWitness(), mx, [mx, one], [[one, one], [one]], fss).passed


def test_term_parse():
    t = parse_term("m(m(x,y),e)", {"m": 2, "e": 0})
    assert sorted(set(t.symbols())) == [("e", 0), ("m", 2)]


def test_bundled_algebras(bundled):
    from daycalc.operad import check_algebra

    results = {}
    for name in ("MaxMonoid", "EdgeMonoid"):
        th, _, _, interp = bundled.algebra[name]
        results[name] = check_algebra(bundled.theory[th], interp).passed
    assert results == {"MaxMonoid": True, "EdgeMonoid": False}
