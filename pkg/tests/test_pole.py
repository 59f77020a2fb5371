import pytest
from hypothesis import given, settings, strategies as st

from fsrkit.machine import apply, compile_lambda, pair
from fsrkit.pole import Pole, check_closure, member, parse_pole, test_poles as all_test_poles


def test_trivial_poles():
    for n in (0, 1, 17, pair(40, 3)):
        assert member(Pole.empty(), n).is_false
        assert member(Pole.full(), n).is_true


def test_seed_member_after_one_unfold():
    n = pair(compile_lambda("λa. 5"), 0)
    assert member(Pole.seeded({5}), n).is_true
    assert member(Pole.seeded({5}), 5).is_true
    assert member(Pole.seeded({6}), n).is_false


def test_nonhalting_head_is_not_a_member():
    # numbers below 33 are not programs, so <e, m> with small e never steps
    assert member(Pole.seeded({5}), pair(3, 4)).is_false


def test_parse_pole():
    assert parse_pole("empty").is_empty
    assert parse_pole("full").kind == "full"
    assert parse_pole("seed:3,8").seed == frozenset({3, 8})
    assert parse_pole("seed:{5}").name == "seed:5"
    with pytest.raises(ValueError):
        parse_pole("seed:")
    with pytest.raises(ValueError):
        parse_pole("half")


@pytest.mark.parametrize("p", all_test_poles(), ids=lambda p: p.name)
def test_closure_has_no_violations(p):
    report = check_closure(p, 50, 10, 200)
    assert not report.violations


def test_seed_5_closure_with_spec_bounds():
    assert not check_closure(Pole.seeded({5}), 50, 10, 200).violations


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4), st.integers(0, 40), st.sampled_from([3, 5, 8]))
def test_converse_computation(k, arg, s):
    """If e . m evaluates to a member then <e, m> is a member."""
    p = Pole.seeded({s})
    e = compile_lambda("λa. c", {"c": s}) if k == 0 else compile_lambda("λa. a")
    out = apply(e, arg)
    if out is not None and member(p, out).is_true:
        assert member(p, pair(e, arg)).is_true
