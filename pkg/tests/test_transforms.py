import random

from hypothesis import given, settings, strategies as st

from fsrkit.acceptance import random_formula
from fsrkit.corpus import lr_corpus
from fsrkit.pole import Pole
from fsrkit.semantics import ct_truth, eval_LR, stage_models
from fsrkit.syntax import (BOT, Num, Var, alpha_equal, conj, decode, encode, fn,
                           is_L, is_LR, is_LT, neg, parse_formula, print_formula,
                           substitute)
from fsrkit.transforms import (BOT_CODE, code_in_rft, code_in_rlz, explicit_form,
                               explicit_realiser, explicit_refuter, tau_empty_code,
                               tau_fs_code, translate_empty, translate_FS, translate_N)

F = parse_formula
s = Var("s")


def test_refuter_of_an_atom():
    assert explicit_refuter(s, F("0=S(0)")) == F("0=S(0) -> Pole(s)")


def test_refuter_of_an_implication():
    A, B = F("0=0"), F("Pole(0)")
    expected = conj(explicit_realiser(fn("p0", s), A), explicit_refuter(fn("p1", s), B))
    assert alpha_equal(explicit_refuter(s, F("0=0 -> Pole(0)")), expected)


def test_refuter_of_an_F_atom():
    assert explicit_refuter(s, F("F(t, u)")) == F("F(s, inrft(t, u))")


def test_realiser_of_an_equation():
    got = explicit_realiser(Num(0), F("0=0"))
    assert alpha_equal(got, F("forall a. ((0=0 -> Pole(a)) -> Pole(pair(0, a)))"))


def test_explicit_form_keeps_a_trace():
    form = explicit_form(s, F("forall x. x=0 -> Pole(x)"), kind="refuter")
    assert form.trace and is_LR(form.result)


def test_code_level_forms():
    assert alpha_equal(decode(code_in_rft(encode(F("0=S(0)")))), F("0=S(0) -> Pole(x)"))
    assert code_in_rlz(encode(Num(3))) == BOT_CODE
    assert code_in_rft(0) == BOT_CODE


def test_translate_FS():
    assert translate_FS(F("0=0")) == F("0=0")
    assert print_formula(translate_FS(F("Tr(⌜0=0⌝)"))) == "T(0, ⌜0=0⌝)"
    assert translate_FS(F("Tr(⌜Tr(⌜0=0⌝)⌝)")) == F("T(0, ⌜T(0, ⌜0=0⌝)⌝)")


def test_translate_FS_keeps_open_codes_symbolic():
    out = translate_FS(F("forall x. Tr(x)"))
    assert "tauFS" in print_formula(out)


def test_translate_empty():
    assert translate_empty(F("Pole(0)")) == BOT
    out = translate_empty(F("F(a, t)"))
    assert out == F("Tr(tauEmpty(inrft(a, t)))")
    closed = translate_empty(F("F(0, ⌜0=0⌝)"))
    assert is_LT(closed) and "Tr(⌜" in print_formula(closed)


def test_translate_N():
    assert translate_N(F("Pole(x)")) == F("0=0")
    assert translate_N(F("0=S(0)")) == F("0=S(0)")
    assert translate_N(F("T(0, ⌜0=0⌝) -> F(1, ⌜0=0⌝)")) == F("0=0 -> 0=0")


def test_empty_pole_has_no_members_after_translation():
    for a in range(5):
        assert ct_truth(translate_empty(neg(F(f"Pole({a})")))).is_true


def test_N_translation_of_realisers_is_true():
    for A in lr_corpus():
        for n in range(3):
            assert ct_truth(translate_N(explicit_realiser(Num(n), A)), bound=8).is_true


def test_tau_laws_on_corpus():
    for A in lr_corpus():
        assert tau_empty_code(encode(A)) == encode(translate_empty(A))
    for A in (F("0=0"), F("Tr(⌜0=0⌝)"), F("forall x. Tr(⌜x=x⌝)")):
        assert tau_fs_code(encode(A)) == encode(translate_FS(A))


def test_explicit_and_formal_forms_agree_at_later_stages():
    m = stage_models(Pole.empty(), 3, bound=6)[2]
    for x in range(4):
        for P in (F("0=0"), F("0=S(0)")):
            formal = F(f"F({x}, ⌜{print_formula(P)}⌝)")
            assert eval_LR(m, formal).value == eval_LR(m, explicit_refuter(Num(x), P)).value


# ---------------------------------------------------------------- properties

lr_formulas = st.builds(lambda seed, d: random_formula(random.Random(seed), d),
                        st.integers(0, 10**9), st.integers(0, 3))


@settings(max_examples=150, deadline=None)
@given(lr_formulas, st.integers(0, 30))
def test_substitution_commutes_with_explicit_forms(A, n):
    t = Num(n)
    for make in (explicit_refuter, explicit_realiser):
        assert alpha_equal(substitute(make(s, A), "x", t), make(s, substitute(A, "x", t)))
        assert alpha_equal(substitute(make(Var("x"), A), "x", t),
                           make(t, substitute(A, "x", t)))


@settings(max_examples=150, deadline=None)
@given(lr_formulas)
def test_translations_land_in_their_languages(A):
    assert is_LT(translate_empty(A))
    assert is_L(translate_N(A))
    assert is_LR(explicit_refuter(s, A)) and is_LR(explicit_realiser(s, A))
