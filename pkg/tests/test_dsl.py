import pytest
from hypothesis import given, strategies as st

from daycalc.dsl import lex, parse_formula, parse_workspace, serialize
from daycalc.errors import NotAPoset, ParseError, SemanticError
from daycalc.kripke import BOT, EMP, TOP, at, atom, conj, disj, imp, nom, star, wand

SMALL = """
frame F {
  a <= b <= c
  root a
}
valuation V on F {
  atom p = {b, c}
}
formula f = nom(b) -> @b p
"""


def test_precedence():
    p, q, r = atom("p"), atom("q"), atom("r")
    assert parse_formula("p * q & r") == conj(star(p, q), r)
    assert parse_formula("p -> q -> r") == imp(p, imp(q, r))
    assert parse_formula("p -* q -> r") == wand(p, imp(q, r))
    assert parse_formula("p | q & r") == disj(p, conj(q, r))
    assert parse_formula("@a p * q") == star(at("a", p), q)


def test_lexer_positions():
    toks = lex("p\n  -* q")
    star_tok = [t for t in toks if t.text == "-*"][0]
    assert (star_tok.line, star_tok.col) == (2, 3)


def test_parse_error_location():
    with pytest.raises(ParseError) as e:
        parse_formula("p & (q")
    assert e.value.line == 1


def test_load_small_workspace():
    ws = parse_workspace([SMALL], ["small.day"])
    assert ws.formula["f"] == imp(nom("b"), at("b", atom("p")))
    assert "F" in ws.frame


def test_semantic_error_names_culprit():
    bad = SMALL.replace("atom p = {b, c}", "atom p = {b, zz}")
    with pytest.raises(SemanticError) as e:
        parse_workspace([bad], ["small.day"])
    assert "zz" in str(e.value)
    assert "small.day:" in str(e.value)


def test_cycle_is_not_a_poset():
    with pytest.raises((NotAPoset, SemanticError)):
        parse_workspace(["poset P {\n  a <= b\n  b <= a\n}\n"], ["cyc.day"])


def test_round_trip_small():
    ws = parse_workspace([SMALL], ["small.day"])
    again = parse_workspace([serialize(ws)], ["again.day"])
    assert again == ws


def test_round_trip_bundled(bundled):
    text = serialize(bundled)
    assert parse_workspace([text], ["bundled.day"]) == bundled
    assert serialize(parse_workspace([text], ["bundled.day"])) == text


def _formulas():
    leaves = st.one_of(
        st.sampled_from([TOP, BOT, EMP]),
        st.builds(atom, st.sampled_from(["p", "q", "r1"])),
        st.builds(nom, st.sampled_from(["a", "b"])),
    )

    def extend(sub):
        return st.one_of(
            *(st.builds(f, sub, sub) for f in (conj, disj, imp, star, wand)),
            st.builds(at, st.sampled_from(["a", "b"]), sub),
        )

    return st.recursive(leaves, extend, max_leaves=8)


@given(_formulas())
def test_print_parse_round_trip(f):
    assert parse_formula(str(f)) == f


WALK = """
category Walk {
  objects s t
  arrow f: s -> t
  arrow g: s -> t
  arrow l: t -> t
  compose l.f = g
  compose l.g = g
  compose l.l = l
}
"""


def test_op_on_non_thin_category_needs_arrow_images():
    text = WALK + "op loop : Walk^1 -> Walk {\n  map (t) = t\n}\n"
    with pytest.raises(SemanticError) as e:
        parse_workspace([text], ["walk.day"])
    assert "on-arrows" in str(e.value)
    ok = WALK + "op loop : Walk^1 -> Walk {\n  map (t) = t\n  on-arrows (l) = l\n}\n"
    ws = parse_workspace([ok], ["walk.day"])
    assert ws.op["loop"].action.mor[("l",)] == "l"


def test_non_thin_op_round_trip():
    ok = WALK + "op loop : Walk^1 -> Walk {\n  map (t) = t\n  on-arrows (l) = l\n}\n"
    ws = parse_workspace([ok], ["walk.day"])
    text = serialize(ws)
    assert "on-arrows (l) = l" in text
    assert parse_workspace([text], ["again.day"]) == ws


def test_frame_rejects_parallel_arrows():
    from daycalc.fincat import from_arrows
    from daycalc.kripke import KripkeFrame

    W = from_arrows("st", {"f": ("s", "t"), "g": ("s", "t")})
    with pytest.raises(NotAPoset):
        KripkeFrame(W)
