import pytest
from hypothesis import given, settings, strategies as st

from retractkit.catalog import builtin_group, resolve
from retractkit.errors import WordSyntaxError
from retractkit.groups import center, quotient
from retractkit.perm import Permutation
from retractkit.words import (
    DIHEDRAL_VARIETY,
    OPPOSITE,
    S4_LAWS,
    S4_SECOND_LAW_UNCUBED,
    Comm,
    Const,
    LawSet,
    Pow,
    Prod,
    Var,
    evaluate,
    holds_law,
    holds_law_set,
    normalize_powers,
    parse_equation,
    parse_law,
    parse_word,
    substitute,
    to_text,
    variables,
)

from conftest import small_groups, two_groups
from oracle import ev, naive_law_witness

x, y = Var("x"), Var("y")


def test_parse_nested_commutator():
    w = parse_word("[[x,y]^3, y^3, y^2]")
    assert w == Comm((Pow(Comm((x, y)), 3), Pow(y, 3), Pow(y, 2)))
    assert variables(w) == ["x", "y"]


def test_parse_simple_forms():
    assert parse_word("x^-1") == Pow(x, -1)
    w = parse_word("(x^3 y^3)^4 [x^3, y^6]^3")
    assert w == Prod((Pow(Prod((Pow(x, 3), Pow(y, 3))), 4), Pow(Comm((Pow(x, 3), Pow(y, 6))), 3)))
    assert parse_word("x*y") == Prod((x, y))


@pytest.mark.parametrize("bad", ["x^", "[x]", "(x y", "x ^ y", "x $ y", "", "<(1 2)>", "e"])
def test_syntax_errors(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_error_position():
    with pytest.raises(WordSyntaxError) as info:
        parse_word("x y )")
    assert info.value.pos == 4


def test_mixed_words():
    lhs, rhs = parse_equation("x^2 = <(1 2 3)>")
    assert rhs == Const(((1, 2, 3),))
    assert parse_equation("[x, y] = 1")[1] == parse_word("e", mixed=True)
    with pytest.raises(WordSyntaxError):
        parse_law("x^2 = y")


def test_evaluation_examples():
    s3, s4 = builtin_group("S(3)"), builtin_group("S(4)")
    g = s4.elements[5]
    assert evaluate(parse_word("[x, y]"), {"x": g, "y": g}, s4).is_identity()
    assert evaluate(parse_word("x^12"), {"x": Permutation.from_cycles("(1 2 3 4)")}, s4).is_identity()
    c = evaluate(parse_word("[x, y]"), {"x": Permutation.from_cycles("(1 2)", 3), "y": Permutation.from_cycles("(1 3)", 3)}, s3)
    assert c.order() == 3


def test_s4_laws(s4):
    for law in S4_LAWS.laws:
        assert holds_law(s4, law).holds
        assert holds_law(s4, law, convention=OPPOSITE).holds
    res = holds_law(s4, "x^2 = 1")
    assert not res.holds
    assert sorted(len(c) for c in res.counterexample["x"].cycles()) == [3]


def test_uncubed_second_law_fails(s4):
    res = holds_law(s4, S4_SECOND_LAW_UNCUBED)
    assert not res.holds
    assert {k: str(v) for k, v in res.counterexample.items()} == {"x": "(3 4)", "y": "(2 3)"}


def test_law_sets():
    assert holds_law_set(builtin_group("Dih(4)"), DIHEDRAL_VARIETY).holds
    assert holds_law_set(builtin_group("Q8"), DIHEDRAL_VARIETY).holds
    res = holds_law_set(builtin_group("Dih(8)"), DIHEDRAL_VARIETY)
    assert not res.holds and res.failing.law.name == "x^4 = 1"
    assert holds_law_set(builtin_group("S(1)"), S4_LAWS).holds
    assert holds_law_set(builtin_group("S(1)"), LawSet("x", (parse_law("x y x = 1"),))).holds


def test_substitution():
    w = parse_word("(x y)^4 [x, y^2]^3")
    assert substitute(w, {"x": x, "y": y}) == w
    cubed = substitute(w, {"x": Pow(x, 3), "y": Pow(y, 3)})
    assert normalize_powers(cubed) == parse_word("(x^3 y^3)^4 [x^3, y^6]^3")
    assert substitute(parse_word("x^2"), {"x": parse_word("[a, b]")}) == parse_word("[a, b]^2")


# -- properties ------------------------------------------------------------

names = st.sampled_from(["x", "y", "z"])
words = st.recursive(
    names.map(Var),
    lambda inner: st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(lambda c: Prod(tuple(c))),
        st.tuples(inner, st.integers(-5, 5).filter(bool)).map(lambda t: Pow(*t)),
        st.lists(inner, min_size=2, max_size=3).map(lambda c: Comm(tuple(c))),
    ),
    max_leaves=8,
)


@given(words)
def test_round_trip(w):
    assert parse_word(to_text(w)) == w


@settings(max_examples=60, deadline=None)
@given(words, st.data())
def test_evaluate_matches_reference(w, data):
    g = builtin_group("S(4)")
    env = {v: data.draw(st.sampled_from(g.elements)) for v in variables(w)}
    assert evaluate(w, env, g) == ev(w, env, 4)
    assert evaluate(w, env, g, convention=OPPOSITE) == ev(w, env, 4, opposite=True)


def _homs():
    s4 = builtin_group("S(4)")
    a4 = s4.subgroup([Permutation.from_cycles("(1 2 3)", 4), Permutation.from_cycles("(2 3 4)", 4)])
    v4 = s4.subgroup([p for p in s4.elements if sorted(len(c) for c in p.cycles()) == [2, 2]])
    out = [quotient(s4, a4)[1], quotient(s4, v4)[1]]
    d = builtin_group("Dih(6)")
    out.append(quotient(d, center(d))[1])
    return out


@settings(max_examples=40, deadline=None)
@given(words, st.sampled_from(_homs()), st.data())
def test_evaluation_respects_homomorphisms(w, phi, data):
    g, h = phi.domain, phi.codomain
    env = {v: data.draw(st.sampled_from(g.elements)) for v in variables(w)}
    image_env = {k: phi(p) for k, p in env.items()}
    assert phi(evaluate(w, env, g)) == evaluate(w, image_env, h)


LAWS = ["x^2 = 1", "x^4 = 1", "[x, y] = 1", "[x^2, y] = 1", "(x y)^2 = 1", "[x, y]^3 = 1",
        "x^6 = 1", "[[x, y], y] = 1"]


@pytest.mark.parametrize("g", small_groups(), ids=str)
@pytest.mark.parametrize("text", LAWS)
def test_reduction_agrees_with_full_scan(g, text):
    law = parse_law(text)
    reduced = holds_law(g, law, reduce=True)
    full = holds_law(g, law, reduce=False)
    assert reduced.holds == full.holds
    assert reduced.counterexample == full.counterexample
    if not full.holds:
        assert full.counterexample == naive_law_witness(law.lhs, variables(law.lhs), g)


@pytest.mark.parametrize("g", two_groups(), ids=str)
def test_two_group_law_equivalence(g):
    from retractkit.words import TWO_GROUP_DESCENT

    assert holds_law_set(g, TWO_GROUP_DESCENT).holds == holds_law_set(g, DIHEDRAL_VARIETY).holds


@pytest.mark.parametrize("g", small_groups() + two_groups(), ids=str)
def test_symmetric_law_equivalence(g):
    assert holds_law(g, "[x, y^2] = 1").holds == holds_law(g, "[x^2, y] = 1").holds
