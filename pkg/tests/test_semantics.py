import random

import pytest
from hypothesis import given, settings, strategies as st

from fsrkit.acceptance import random_formula
from fsrkit.corpus import l_corpus
from fsrkit.pole import Pole, test_poles as all_test_poles
from fsrkit.semantics import (EmptyRelation, Model, TableRelation, check_eventual,
                              ct_truth, eval_LR, eval_term, realises_L, refutes_L,
                              revision_iterate, revision_step, stage_models,
                              tabulate_stage)
from fsrkit.proofs import imp_instance
from fsrkit.syntax import Forall, Num, Var, encode, fn, parse_formula, substitute

EMPTY, FULL = Pole.empty(), Pole.full()
F = parse_formula


def test_refutes_equations_over_empty_pole():
    for n in (0, 3, 100):
        assert refutes_L(EMPTY, n, F("0=S(0)")).is_true
        assert refutes_L(EMPTY, n, F("0=0")).is_false
        assert refutes_L(EMPTY, n, F("0=0 -> 0=S(0)"), bound=16).is_true


def test_realises_over_empty_pole():
    assert realises_L(EMPTY, 0, F("0=0")).is_true
    v = realises_L(EMPTY, 0, F("0=S(0)"))
    assert v.is_false and v.witness == 0


def test_full_pole_realises_everything():
    for A in l_corpus()[:8]:
        for n in (0, 5, 40):
            assert realises_L(FULL, n, A, bound=8).is_true


def test_refutes_requires_an_L_sentence():
    with pytest.raises(ValueError):
        refutes_L(EMPTY, 0, F("x=0"))
    with pytest.raises(ValueError):
        refutes_L(EMPTY, 0, F("Pole(0)"))


def test_ct_truth_examples():
    assert ct_truth(F("0=0")).is_true
    assert ct_truth(F("forall x. x=x"), bound=100).is_true
    v = ct_truth(F("forall x. x=0"))
    assert v.is_false and v.witness == 1


def test_empty_pole_matches_tarskian_truth():
    for A in l_corpus():
        r, t = realises_L(EMPTY, 0, A, bound=32), ct_truth(A, bound=32)
        if not (r.is_unknown or t.is_unknown):
            assert r.value == t.value, A


def test_eval_LR_base_model():
    m = Model(EMPTY, EmptyRelation(), bound=16)
    assert eval_LR(m, F("Pole(0)")).is_false
    with pytest.raises(ValueError):
        eval_LR(m, F("Pole(x)"))


def test_eval_LR_first_revision():
    m = stage_models(EMPTY, 1, bound=16)[1]
    assert eval_LR(m, F("F(0, ⌜0=S(0)⌝)")).is_true
    assert eval_LR(m, F("T(0, ⌜0=0⌝)")).is_true
    assert eval_LR(m, F("F(0, ⌜0=0⌝)")).is_false


def test_revision_step_tables():
    bound = 8
    bot, top = encode(F("0=S(0)")), encode(F("0=0"))
    rel = revision_step(EMPTY, EmptyRelation(), [bot], bound=bound)
    assert tabulate_stage(rel, [bot], bound).true_cells == {(n, bot) for n in range(bound + 1)}
    rel = revision_step(EMPTY, EmptyRelation(), [top], bound=bound)
    table = tabulate_stage(rel, [top], bound)
    assert not table.true_cells and not table.unknown_cells


def test_stage_zero_is_the_start_relation():
    start = TableRelation({(1, 2): True})
    assert revision_iterate(EMPTY, start, 0) is start
    assert revision_iterate(EMPTY, None, 2, bound=4).stage == 2


def test_gcr_implication_axiom_instance_from_stage_one():
    A = Forall("a", imp_instance(Var("a"), F("0=0"), F("0=S(0)")))
    for m in stage_models(EMPTY, 3, bound=6)[1:]:
        assert eval_LR(m, A).is_true


def test_check_eventual_finds_a_stable_window():
    rep = check_eventual(EMPTY, None, F("T(0, ⌜0=0⌝)"), n_cap=4, window=2, bound=8)
    # F is empty at stage 0, so the T atom already holds there
    assert rep.ok and rep.start == 0
    rep = check_eventual(EMPTY, None, F("F(0, ⌜0=0⌝)"), n_cap=3, window=2, bound=8)
    assert not rep.ok


def test_verdicts_are_three_valued():
    v = ct_truth(F("0=0"))
    with pytest.raises(TypeError):
        bool(v)


# ---------------------------------------------------------------- properties

closed_terms = st.builds(lambda n, k: fn("+", Num(n), Num(k)) if k % 2 else Num(n + k),
                         st.integers(0, 6), st.integers(0, 6))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), closed_terms, st.integers(0, 20),
       st.sampled_from(all_test_poles()))
def test_term_regularity(seed, s, x, p):
    """Refutations depend only on the value of the substituted term."""
    A = random_formula(random.Random(seed), 2, language="L", names=("x",))
    t = Num(eval_term(s))
    left = refutes_L(p, x, substitute(A, "x", s), bound=6)
    right = refutes_L(p, x, substitute(A, "x", t), bound=6)
    assert left.value == right.value
