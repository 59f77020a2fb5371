import random

import pytest
from hypothesis import given, settings, strategies as st

from fsrkit import syntax as sx
from fsrkit.acceptance import random_formula, random_term
from fsrkit.syntax import (BOT, Eq, Forall, Imp, InPole, Num, Var, decode, dot_eq,
                           dot_forall, encode, fn, parse_formula, print_formula,
                           sent_L, sent_LR, sent_LT, sub_num, substitute)

x, y = Var("x"), Var("y")
ZERO = Num(0)


def S(t):
    return fn("S", t)


# ---------------------------------------------------------------- parsing and printing


def test_parse_atom():
    assert parse_formula("0=S(0)") == Eq(ZERO, S(ZERO))


def test_negation_is_implication_into_bot():
    assert parse_formula("not (0=0)") == Imp(Eq(ZERO, ZERO), Eq(ZERO, S(ZERO)))
    assert BOT == Eq(ZERO, Num(1))


def test_exists_expands_to_not_forall_not():
    f = parse_formula("exists x. Pole(x)")
    assert f == Imp(Forall("x", Imp(InPole(x), BOT)), BOT)


def test_language_is_enforced():
    with pytest.raises(ValueError):
        parse_formula("Pole(0)", language="L")
    assert sx.is_LT(parse_formula("Tr(⌜0=0⌝)", language="LT"))


def test_print_simple_formulas():
    assert print_formula(Eq(ZERO, ZERO)) == "0=0"
    assert print_formula(Forall("x", InPole(x))) == "forall x. Pole(x)"


def test_print_parse_round_trip_500():
    rng = random.Random(11)
    for _ in range(500):
        f = random_formula(rng, 3)
        assert parse_formula(print_formula(f)) == f


@pytest.mark.parametrize("text", ["0=", "forall . x=x", "(0=0", "Pole(0,1)", "0=0 ->"])
def test_parse_errors(text):
    with pytest.raises(sx.ParseError):
        parse_formula(text)


# ---------------------------------------------------------------- substitution


def test_substitute_free_occurrence():
    assert substitute(Eq(x, ZERO), "x", S(ZERO)) == Eq(S(ZERO), ZERO)


def test_substitute_avoids_capture():
    out = substitute(Forall("x", Eq(x, y)), "y", x)
    assert isinstance(out, Forall) and out.var != "x"
    assert out.body == Eq(Var(out.var), x)
    assert sx.free_vars(out) == {"x"}


def test_substitute_bound_occurrence_is_untouched():
    f = Forall("x", Eq(x, ZERO))
    assert substitute(f, "x", S(ZERO)) == f


# ---------------------------------------------------------------- coding


def test_decode_encode_simple():
    assert decode(encode(Eq(ZERO, ZERO))) == Eq(ZERO, ZERO)


def test_sentence_predicates():
    assert sent_L(encode(parse_formula("forall x. x=x")))
    assert not sent_L(encode(parse_formula("x=0")))
    assert not sent_L(encode(parse_formula("Pole(0)")))
    assert sent_LR(encode(parse_formula("Pole(0)")))


def test_dot_operations():
    assert dot_eq(encode(ZERO), encode(ZERO)) == encode(Eq(ZERO, ZERO))
    assert sub_num(encode(parse_formula("x=0")), 2) == encode(Eq(S(S(ZERO)), ZERO))
    assert dot_forall(encode(ZERO), encode(Eq(ZERO, ZERO))) is None
    assert dot_forall(encode(x), encode(Eq(x, x))) == encode(Forall("x", Eq(x, x)))


def test_non_codes_decode_to_none():
    assert all(decode(c) is None or encode(decode(c)) == c for c in range(2000))


# ---------------------------------------------------------------- properties

formulas = st.builds(lambda seed, d: random_formula(random.Random(seed), d),
                     st.integers(0, 10**9), st.integers(0, 4))
l_formulas = st.builds(lambda seed, d: random_formula(random.Random(seed), d, language="L"),
                       st.integers(0, 10**9), st.integers(0, 4))
terms = st.builds(lambda seed, d: random_term(random.Random(seed), d),
                  st.integers(0, 10**9), st.integers(0, 3))


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_coding_round_trip(f):
    assert decode(encode(f)) == f


@settings(max_examples=200, deadline=None)
@given(terms)
def test_term_coding_round_trip(t):
    assert decode(encode(t)) == t


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_print_parse_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@settings(max_examples=200, deadline=None)
@given(l_formulas)
def test_sentence_hierarchy(f):
    c = encode(f)
    if sent_L(c):
        assert sent_LT(c) and sent_LR(c)


@settings(max_examples=200, deadline=None)
@given(formulas, st.integers(0, 40))
def test_substitution_commutes_with_encoding(f, n):
    # the law is about A(x): other free variables are closed off first
    f = sx.substitute_many(f, {v: Num(3) for v in sx.free_vars(f) - {"x"}})
    assert encode(substitute(f, "x", Num(n))) == sub_num(encode(f), n)


@settings(max_examples=200, deadline=None)
@given(formulas, terms)
def test_substitution_never_captures(f, t):
    out = substitute(f, "x", t)
    expected = sx.free_vars(f) - {"x"}
    if "x" in sx.free_vars(f):
        expected |= sx.term_vars(t)
    assert sx.free_vars(out) == expected
