"""Explicit realisation forms and the translations between L_T and L_R.

``explicit_refuter(s, A)`` is the L_R-formula "s refutes A" and
``explicit_realiser(s, A)`` is "s realises A", built by recursion on A.
F- and T-atoms are handled through the code-level symbols inrft / inrlz,
whose values are codes of explicit forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .syntax import (
    BOT, ZERO, App, Eq, Fatom, Forall, Formula, Imp, InPole, Num, Tatom, Term,
    Tr, Var, all_vars, conj, decode, encode, fn, fresh_name, is_LR, is_LT,
    rename_bound, substitute, term_vars,
)

BOT_CODE = encode(BOT)
REALISER_VAR = "a"
CODE_VAR = "x"


@dataclass
class ExplicitForm:
    result: Formula
    trace: list[str] = field(default_factory=list)


def _refuter(s: Term, A: Formula, trace: list) -> Formula:
    if isinstance(A, (Eq, InPole)):
        trace.append(f"atom {type(A).__name__}: P -> Pole(s)")
        return Imp(A, InPole(s))
    if isinstance(A, Fatom):
        trace.append("F-atom: F(s, inrft(t,u))")
        return Fatom(s, fn("inrft", A.left, A.right))
    if isinstance(A, Tatom):
        trace.append("T-atom: F(s, inrlz(t,u))")
        return Fatom(s, fn("inrlz", A.left, A.right))
    if isinstance(A, Imp):
        trace.append("implication: p0(s) realises A and p1(s) refutes B")
        return conj(_realiser(fn("p0", s), A.ante, trace),
                    _refuter(fn("p1", s), A.cons, trace))
    if isinstance(A, Forall):
        trace.append(f"universal over {A.var}: p1(s) refutes A(p0(s))")
        return _refuter(fn("p1", s), substitute(A.body, A.var, fn("p0", s)), trace)
    raise ValueError(f"explicit forms are defined for L_R only, got {A}")


def _realiser(s: Term, A: Formula, trace: list) -> Formula:
    a = fresh_name(REALISER_VAR, term_vars(s) | all_vars(A))
    trace.append(f"realiser: forall {a}. ({a} refutes A -> Pole(pair(s,{a})))")
    return Forall(a, Imp(_refuter(Var(a), A, trace), InPole(fn("pair", s, Var(a)))))


def explicit_refuter(s: Term, A: Formula) -> Formula:
    """s ∈ ‖A‖ as an L_R-formula."""
    return _refuter(s, rename_bound(A, term_vars(s)), [])


def explicit_realiser(s: Term, A: Formula) -> Formula:
    """s ∈ |A| as an L_R-formula, with a fresh realiser variable."""
    return _realiser(s, rename_bound(A, term_vars(s)), [])


def explicit_form(s: Term, A: Formula, kind: str = "realiser") -> ExplicitForm:
    trace: list[str] = []
    A = rename_bound(A, term_vars(s))
    f = _realiser(s, A, trace) if kind == "realiser" else _refuter(s, A, trace)
    return ExplicitForm(f, trace)


# ---------------------------------------------------------------- code level


def _lr_formula(c: int):
    A = decode(c)
    if A is None or isinstance(A, (Var, Num, App)) or not is_LR(A):
        return None
    return A


@lru_cache(maxsize=4096)
def code_in_rlz(c: int) -> int:
    """⌜x ∈ |A|⌝ for c = ⌜A⌝; the code of ⊥ on non-formula codes."""
    A = _lr_formula(c)
    return BOT_CODE if A is None else encode(explicit_realiser(Var(CODE_VAR), A))


@lru_cache(maxsize=4096)
def code_in_rft(c: int) -> int:
    """⌜x ∈ ‖A‖⌝ for c = ⌜A⌝; the code of ⊥ on non-formula codes."""
    A = _lr_formula(c)
    return BOT_CODE if A is None else encode(explicit_refuter(Var(CODE_VAR), A))


@lru_cache(maxsize=1 << 16)
def in_rlz_value(n: int, c: int) -> int:
    """Value of the term inrlz(n̄, c): the code of n̄ ∈ |A|."""
    A = _lr_formula(c)
    return BOT_CODE if A is None else encode(explicit_realiser(Num(n), A))


@lru_cache(maxsize=1 << 16)
def in_rft_value(n: int, c: int) -> int:
    """Value of the term inrft(n̄, c): the code of n̄ ∈ ‖A‖."""
    A = _lr_formula(c)
    return BOT_CODE if A is None else encode(explicit_refuter(Num(n), A))


# ---------------------------------------------------------------- translations


def _closed_code(t: Term) -> int | None:
    """Value of t when it is built from numerals by code-level symbols."""
    if isinstance(t, Num):
        return t.value
    if isinstance(t, App) and t.sym in ("inrft", "inrlz"):
        x, c = _closed_code(t.args[0]), _closed_code(t.args[1])
        if x is None or c is None:
            return None
        return in_rft_value(x, c) if t.sym == "inrft" else in_rlz_value(x, c)
    if isinstance(t, App) and t.sym in ("tauFS", "tauEmpty"):
        c = _closed_code(t.args[0])
        if c is None:
            return None
        return tau_fs_code(c) if t.sym == "tauFS" else tau_empty_code(c)
    return None


def _tau(t: Term, sym: str, code_fn) -> Term:
    c = _closed_code(t)
    if c is None:
        return App(sym, (t,))
    return Num(code_fn(c))


def _homomorphic(A: Formula, atom) -> Formula:
    if isinstance(A, Imp):
        return Imp(_homomorphic(A.ante, atom), _homomorphic(A.cons, atom))
    if isinstance(A, Forall):
        return Forall(A.var, _homomorphic(A.body, atom))
    return atom(A)


def translate_FS(A: Formula) -> Formula:
    """L_T to L_R: Tr(t) becomes 0 T tau(t)."""
    def atom(P):
        if isinstance(P, Tr):
            return Tatom(ZERO, _tau(P.term, "tauFS", tau_fs_code))
        if isinstance(P, Eq):
            return P
        raise ValueError(f"not an L_T atom: {P}")
    return _homomorphic(A, atom)


def translate_empty(A: Formula) -> Formula:
    """L_R to L_T: the pole is read as empty."""
    def atom(P):
        if isinstance(P, InPole):
            return BOT
        if isinstance(P, Fatom):
            return Tr(_tau(fn("inrft", P.left, P.right), "tauEmpty", tau_empty_code))
        if isinstance(P, Tatom):
            return Tr(_tau(fn("inrlz", P.left, P.right), "tauEmpty", tau_empty_code))
        if isinstance(P, Eq):
            return P
        raise ValueError(f"not an L_R atom: {P}")
    return _homomorphic(A, atom)


TRIVIAL = Eq(ZERO, ZERO)


def translate_N(A: Formula) -> Formula:
    """L_R to L: every realisability atom becomes 0=0."""
    def atom(P):
        if isinstance(P, (InPole, Fatom, Tatom)):
            return TRIVIAL
        if isinstance(P, Eq):
            return P
        raise ValueError(f"not an L_R atom: {P}")
    return _homomorphic(A, atom)


@lru_cache(maxsize=4096)
def tau_fs_code(c: int) -> int:
    A = decode(c)
    if A is None or isinstance(A, (Var, Num, App)) or not is_LT(A):
        return BOT_CODE
    return encode(translate_FS(A))


@lru_cache(maxsize=4096)
def tau_empty_code(c: int) -> int:
    A = decode(c)
    if A is None or isinstance(A, (Var, Num, App)) or not is_LR(A):
        return BOT_CODE
    return encode(translate_empty(A))
