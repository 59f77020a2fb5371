import pytest
from hypothesis import given, settings, strategies as st

from fsrkit.machine import OMEGA, Lam, compile_lambda, encode_prog
from fsrkit.pole import Pole, member, test_poles as all_test_poles
from fsrkit.selfref import (FuelExhausted, build_gamma, chain_stage, diagonalize,
                            gamma_iff_empty_check, gamma_realiser_chain, mcgee_f,
                            mcgee_fprime, real_bot_terms, seq_realises, tr_depth,
                            verify_chain)
from fsrkit.semantics import ct_truth, eval_LR, realises_L, stage_models
from fsrkit.syntax import (BOT, InPole, Num, Tatom, Tr, decode, encode, free_vars, is_LR,
                           is_sentence, parse_formula)
from fsrkit.transforms import explicit_realiser, explicit_refuter, translate_N

F = parse_formula
TOP = encode(F("0=0"))


@pytest.fixture(scope="module")
def gamma():
    return build_gamma()


@pytest.mark.parametrize("template", ["Tr(x)", "x = x"])
def test_diagonal_code_identity(template):
    cert = diagonalize(F(template))
    assert cert.identity_holds()
    assert is_sentence(cert.sentence)


def test_truth_teller_mentions_its_own_code():
    cert = diagonalize(F("Tr(x)"))
    assert isinstance(cert.sentence, Tr)


def test_diagonalize_needs_one_free_variable():
    with pytest.raises(ValueError):
        diagonalize(F("x = y"))


def test_gamma_certificate(gamma):
    assert gamma.identity_holds()
    assert is_LR(gamma.sentence) and not free_vars(gamma.sentence)
    assert decode(gamma.sentence_code) == gamma.sentence


def test_N_translation_of_gamma_is_false(gamma):
    # T-atoms become 0=0, so any total g witnesses the existential; the least
    # one, λa.0, has code 35, so the bound has to reach past it
    assert compile_lambda("λa. 0") <= 40
    assert ct_truth(translate_N(gamma.sentence), bound=40).is_false


def test_mcgee_f():
    assert mcgee_f(0, TOP) == TOP
    assert mcgee_f(1, TOP) == encode(Tr(Num(TOP)))
    assert tr_depth(decode(mcgee_f(2, TOP))) == 2
    assert mcgee_f(3, 7) == encode(BOT)


def test_mcgee_fprime():
    g = compile_lambda("λa. 7")
    assert mcgee_fprime(g, 0, TOP) == TOP
    assert mcgee_fprime(g, 1, TOP) == encode(Tatom(Num(7), Num(TOP)))
    assert tr_depth(decode(mcgee_fprime(g, 3, TOP))) == 3
    with pytest.raises(FuelExhausted):
        mcgee_fprime(encode_prog(Lam(OMEGA)), 1, TOP, fuel=100)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 40))
def test_fprime_depth_law(n, k):
    g = compile_lambda("λa. a + k", {"k": k})
    assert tr_depth(decode(mcgee_fprime(g, n, TOP))) == n


def test_sequence_predicate():
    m = stage_models(Pole.empty(), 1, bound=8)[1]
    zero = compile_lambda("λa. 0")
    assert seq_realises(m, zero, 0, TOP).is_true
    assert seq_realises(m, zero, 0, encode(F("0=S(0)"))).is_false
    assert seq_realises(m, encode_prog(Lam(OMEGA)), 0, TOP, fuel=100).is_unknown


def test_chain_request_of_length_zero():
    assert len(gamma_realiser_chain(0)) == 1


def test_chain_has_no_false_levels_once_stable():
    models = stage_models(Pole.empty(), chain_stage(2), bound=8)
    for level in range(3):
        rep = verify_chain(models[chain_stage(level)], level)
        assert not rep.levels[level].verdict.is_false


def test_gamma_realiser_is_not_refuted_over_empty_pole(gamma):
    m = stage_models(Pole.empty(), 3, bound=8)[3]
    rep = verify_chain(m, 0)
    assert not rep.levels[0].verdict.is_false


def test_bot_lemma_items():
    terms = real_bot_terms()
    for p in all_test_poles():
        m = stage_models(p, 1, bound=8)[1]
        for x in range(6):
            contract = explicit_realiser(Num(terms["pairer"]), explicit_refuter(Num(x), BOT))
            assert not eval_LR(m, contract).is_false
    # x refutes Pole(x) whether or not x is a member
    m = stage_models(Pole.seeded({5}), 1, bound=8)[1]
    for x in (4, 5):
        assert member(m.pole, x).value == (x == 5)
        r = terms["refuter_of_pole_atom"](x)
        assert eval_LR(m, explicit_refuter(Num(r), InPole(Num(x)))).is_true
    r = terms["bot_realiser"](3, 4)
    assert realises_L(Pole.full(), r, BOT, bound=8).is_true


def test_gamma_holds_exactly_on_the_empty_pole():
    rows = {r.pole: r for r in gamma_iff_empty_check(stages=3, bound=8)}
    assert rows["empty"].gamma.is_true
    assert rows["full"].gamma.is_false and rows["full"].witness is not None
    assert rows["seed:5"].gamma.is_false and rows["seed:5"].witness is not None
    assert all(r.matches for r in rows.values())
