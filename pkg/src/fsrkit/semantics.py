"""Bounded three-valued semantics.

Every universal quantifier, including the one hidden in "n realises A",
ranges over 0..bound, so a True verdict means True-at-bound.  A False
verdict always comes with a concrete witness.  Unknown records whether fuel,
the bound or the pole's unfold depth ran out.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import chain, islice
from typing import Callable

from . import syntax as sx
from .machine import Value, apply, combinators, eval_code, kleene_T1, pair, unpair
from .pole import SEEDED, Pole, member
from .syntax import (
    App, Eq, Fatom, Forall, Formula, Imp, InPole, Num, Tatom, Term, Tr, Var,
    decode, encode, is_L, is_LR, is_sentence, substitute,
)
from .transforms import (
    BOT_CODE, CODE_VAR, explicit_refuter, in_rft_value, in_rlz_value,
    tau_empty_code, tau_fs_code,
)
from .verdict import Verdict, all_of, false, true, unknown

DEFAULT_BOUND = 64
DEFAULT_FUEL = 10_000
RECURSION_CAP = 64
# revision templates triple in depth per stage; stage 3 formulas nest ~300 deep
# and the recursive walkers need several frames per level
if sys.getrecursionlimit() < 20_000:
    sys.setrecursionlimit(20_000)


class Undetermined(Exception):
    """A term's value could not be computed within the limits."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# ---------------------------------------------------------------- terms


def _or_bot(c):
    return BOT_CODE if c is None else c


def eval_term(t: Term, env: dict | None = None, fuel: int = DEFAULT_FUEL) -> int:
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        if env is None or t.name not in env:
            raise ValueError(f"free variable {t.name} in evaluated term")
        return env[t.name]
    args = [eval_term(a, env, fuel) for a in t.args]
    return apply_symbol(t.sym, args, fuel)


def apply_symbol(sym: str, args: list[int], fuel: int = DEFAULT_FUEL) -> int:
    if sym == "S":
        return args[0] + 1
    if sym == "+":
        return args[0] + args[1]
    if sym == "*":
        return args[0] * args[1]
    if sym == "pair":
        return pair(args[0], args[1])
    if sym == "p0":
        return unpair(args[0])[0]
    if sym == "p1":
        return unpair(args[0])[1]
    if sym == "sub":
        return _or_bot(sx.sub_num(args[0], args[1]))
    if sym == "dotEq":
        return _or_bot(sx.dot_eq(args[0], args[1]))
    if sym == "dotImp":
        return _or_bot(sx.dot_imp(args[0], args[1]))
    if sym == "dotForall":
        return _or_bot(sx.dot_forall(args[0], args[1]))
    if sym == "inrlz":
        return in_rlz_value(args[0], args[1])
    if sym == "inrft":
        return in_rft_value(args[0], args[1])
    if sym == "num":
        return sx.num_code(args[0])
    if sym == "kleeneT":
        return 0 if kleene_T1(*args) else 1
    if sym == "tauFS":
        return tau_fs_code(args[0])
    if sym == "tauEmpty":
        return tau_empty_code(args[0])
    if sym in ("fIter", "fPrimeIter"):
        from .selfref import FuelExhausted, mcgee_f, mcgee_fprime
        if sym == "fIter":
            return mcgee_f(args[0], args[1])
        try:
            return mcgee_fprime(args[0], args[1], args[2], fuel)
        except FuelExhausted:
            raise Undetermined("fuel") from None
    raise ValueError(f"no evaluator for symbol {sym!r}")


def _value(t: Term, fuel: int) -> int:
    return eval_term(t, None, fuel)


# ---------------------------------------------------------------- L: ‖A‖ and |A|


def _check_L_sentence(A: Formula):
    if not is_L(A) or not is_sentence(A):
        raise ValueError(f"expected an L-sentence, got {A}")


def refutes_L(p: Pole, n: int, A: Formula, bound: int = DEFAULT_BOUND,
              fuel: int = DEFAULT_FUEL) -> Verdict:
    """n ∈ ‖A‖ for the pole p."""
    _check_L_sentence(A)
    return _refutes(p, n, A, bound, fuel)


def realises_L(p: Pole, n: int, A: Formula, bound: int = DEFAULT_BOUND,
               fuel: int = DEFAULT_FUEL) -> Verdict:
    """n ∈ |A| for the pole p: every refuter m <= bound pairs with n into p."""
    _check_L_sentence(A)
    return _realises(p, n, A, bound, fuel)


@lru_cache(maxsize=1 << 20)
def _refutes(p: Pole, n: int, A: Formula, bound: int, fuel: int) -> Verdict:
    if isinstance(A, Eq):
        try:
            equal = _value(A.lhs, fuel) == _value(A.rhs, fuel)
        except Undetermined as u:
            return unknown(u.reason, bound, fuel)
        if not equal:
            return true(bound, fuel)
        v = member(p, n, fuel)
        return Verdict(v.value, bound, fuel, v.reason, n if v.is_false else None)
    if isinstance(A, Imp):
        a, b = unpair(n)
        right = _refutes(p, b, A.cons, bound, fuel)
        if right.is_false:
            return right
        left = _realises(p, a, A.ante, bound, fuel)
        return all_of([left, right], bound, fuel)
    if isinstance(A, Forall):
        x, rest = unpair(n)
        return _refutes(p, rest, substitute(A.body, A.var, Num(x)), bound, fuel)
    raise ValueError(f"not an L-formula: {A}")


@lru_cache(maxsize=1 << 20)
def _realises(p: Pole, n: int, A: Formula, bound: int, fuel: int) -> Verdict:
    pending = None
    seen_refuter = False
    # the scan only falls back on shaped refuters when it meets none itself
    scan = range(bound + 1)
    if not _refuter_within(p, A, bound, fuel):
        scan = chain(scan, (m for m in _shaped_refuters(p, A, bound, fuel) if m > bound))
    for m in scan:
        r = _refutes(p, m, A, bound, fuel)
        if r.is_false:
            continue
        seen_refuter = True
        mem = member(p, pair(n, m), fuel)
        if mem.is_true:
            continue
        if r.is_true and mem.is_false:
            return false(bound, fuel, witness=m)
        if pending is None:
            pending = r if r.is_unknown else mem
    if pending is not None:
        return unknown(pending.reason or "fuel", bound, fuel)
    if not seen_refuter and not p.is_empty:
        # over a nonempty pole every ‖A‖ is nonempty (k_pole.a realises
        # everything), so an empty search means the bound fell short
        return unknown("bound", bound, fuel)
    return true(bound, fuel)


@lru_cache(maxsize=1 << 16)
def _refuter_within(p: Pole, A: Formula, bound: int, fuel: int) -> bool:
    return any(not _refutes(p, m, A, bound, fuel).is_false for m in range(bound + 1))


def _pole_elements(p: Pole) -> tuple[int, ...]:
    if p.is_empty:
        return ()
    return tuple(sorted(p.seed)) if p.seed else (0,)


@lru_cache(maxsize=1 << 16)
def _shaped_refuters(p: Pole, A: Formula, bound: int, fuel: int) -> tuple[int, ...]:
    """Refuters of A assembled from its shape, at most bound+1 of them.

    Pairs grow fast, so refuters of nested quantifiers and implications lie
    beyond the m <= bound scan; these reach them with witnesses x <= bound
    and the realisers k_pole.s for pole elements s.  Over the empty pole an
    empty result means ‖A‖ is empty at the bound.
    """
    cap = bound + 1
    if isinstance(A, Eq):
        try:
            equal = _value(A.lhs, fuel) == _value(A.rhs, fuel)
        except Undetermined:
            return ()
        return _pole_elements(p)[:cap] if equal else (0,)
    if isinstance(A, Imp):
        rests = _shaped_refuters(p, A.cons, bound, fuel)
        if not rests:
            return ()
        elems = _pole_elements(p)
        if elems:
            k_pole = combinators()["k_pole"]
            realisers = [r for r in (apply(k_pole, s, fuel) for s in elems) if r is not None]
        else:
            realisers = [] if _shaped_refuters(p, A.ante, bound, fuel) else [0]
        return tuple(islice((pair(r, m) for r in realisers for m in rests), cap))
    if isinstance(A, Forall):
        out = []
        for x in range(bound + 1):
            rest = _shaped_refuters(p, substitute(A.body, A.var, Num(x)), bound, fuel)
            if rest:
                out.append(pair(x, rest[0]))
        return tuple(out[:cap])
    raise ValueError(f"not an L-formula: {A}")


# ---------------------------------------------------------------- Tarskian truth


def ct_truth(A: Formula, bound: int = DEFAULT_BOUND, fuel: int = DEFAULT_FUEL) -> Verdict:
    """Tarskian truth for L and L_T sentences; Tr reads the decoded sentence."""
    if not sx.is_LT(A) or not is_sentence(A):
        raise ValueError(f"expected an L_T-sentence, got {A}")
    return _ct(A, bound, fuel, 0)


@lru_cache(maxsize=1 << 18)
def _ct(A: Formula, bound: int, fuel: int, depth: int) -> Verdict:
    if isinstance(A, Eq):
        try:
            ok = _value(A.lhs, fuel) == _value(A.rhs, fuel)
        except Undetermined as u:
            return unknown(u.reason, bound, fuel)
        return true(bound, fuel) if ok else false(bound, fuel, witness=str(A))
    if isinstance(A, Tr):
        try:
            c = _value(A.term, fuel)
        except Undetermined as u:
            return unknown(u.reason, bound, fuel)
        B = decode(c)
        if B is None or isinstance(B, (Var, Num, App)) or not sx.is_LT(B) or not is_sentence(B):
            return false(bound, fuel, witness=c)
        if depth >= RECURSION_CAP:
            return unknown("bound", bound, fuel)
        return _ct(B, bound, fuel, depth + 1)
    if isinstance(A, Imp):
        a = _ct(A.ante, bound, fuel, depth)
        if a.is_false:
            return true(bound, fuel)
        b = _ct(A.cons, bound, fuel, depth)
        if b.is_true:
            return true(bound, fuel)
        if a.is_true and b.is_false:
            return b
        return unknown((a if a.is_unknown else b).reason, bound, fuel)
    if isinstance(A, Forall):
        pending = None
        for x in range(bound + 1):
            v = _ct(substitute(A.body, A.var, Num(x)), bound, fuel, depth)
            if v.is_false:
                return false(bound, fuel, witness=x)
            if v.is_unknown and pending is None:
                pending = v
        return pending if pending is not None else true(bound, fuel)
    raise ValueError(f"not an L_T formula: {A}")


# ---------------------------------------------------------------- L_R models


class Relation:
    """An interpretation of F: (n, sentence code) -> Verdict."""

    stage = 0

    def lookup(self, n: int, c: int, depth: int = 0) -> Verdict:
        raise NotImplementedError


class EmptyRelation(Relation):
    def lookup(self, n, c, depth=0):
        return false(witness=(n, c))

    def __repr__(self):
        return "EmptyRelation()"


class TableRelation(Relation):
    """A finite relation; absent cells are False, listed unknowns Unknown."""

    def __init__(self, cells: dict | None = None, unknown_cells=()):
        self.cells = dict(cells or {})
        self.unknown_cells = set(unknown_cells)

    def lookup(self, n, c, depth=0):
        if (n, c) in self.unknown_cells:
            return unknown("bound")
        v = self.cells.get((n, c), False)
        return true() if v else false(witness=(n, c))


class RevisedRelation(Relation):
    """Γ(prev): (n, ⌜A⌝) holds iff n ∈ ‖A‖ is true in <pole, prev>.

    Cells are computed on demand and memoised; `table` materialises a block.
    """

    def __init__(self, pole: Pole, prev: Relation, bound: int, fuel: int):
        self.pole = pole
        self.prev = prev
        self.bound = bound
        self.fuel = fuel
        self.stage = prev.stage + 1
        self.base_model = Model(pole, prev, bound, fuel)
        self._cache: dict = {}

    def lookup(self, n, c, depth=0):
        key = (n, c)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if depth > RECURSION_CAP:
            return unknown("bound", self.bound, self.fuel)
        template = _refuter_template(c)
        if template is None:
            v = false(self.bound, self.fuel, witness=(n, c))
        else:
            v = self.base_model.evaluate(template, {CODE_VAR: n}, depth + 1)
        self._cache[key] = v
        return v

    def table(self, codes, n_max: int | None = None) -> dict:
        n_max = self.bound if n_max is None else n_max
        return {(n, c): self.lookup(n, c) for c in codes for n in range(n_max + 1)}


@lru_cache(maxsize=4096)
def _refuter_template(c: int):
    A = decode(c)
    if A is None or isinstance(A, (Var, Num, App)) or not is_LR(A) or not is_sentence(A):
        return None
    return explicit_refuter(Var(CODE_VAR), A)


@dataclass
class Model:
    pole: Pole
    frel: Relation = field(default_factory=EmptyRelation)
    bound: int = DEFAULT_BOUND
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        self._memo: dict = {}

    def evaluate(self, A: Formula, env: dict | None = None, depth: int = 0) -> Verdict:
        env = env or {}
        key = (A, tuple(sorted((k, v) for k, v in env.items() if k in _fv(A))))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        v = self._eval(A, env, depth)
        self._memo[key] = v
        return v

    def t_relation(self, n: int, c: int, depth: int = 0) -> Verdict:
        """n T c via (Ax_T): every b <= bound in F for c pairs with n into the pole."""
        pending = None
        seen = False
        skipped = []
        for b in range(self.bound + 1):
            mem = member(self.pole, pair(n, b), self.fuel)
            if mem.is_true:
                skipped.append(b)
                continue
            f = self.frel.lookup(b, c, depth)
            if f.is_false:
                continue
            seen = True
            if f.is_true and mem.is_false:
                return false(self.bound, self.fuel, witness=b)
            if pending is None:
                pending = f if f.is_unknown else mem
        if pending is not None:
            return unknown(pending.reason or "fuel", self.bound, self.fuel)
        if (not seen and self.pole.kind == SEEDED and self.frel.stage >= 1
                and len(skipped) <= self.bound
                and all(self.frel.lookup(b, c, depth).is_false for b in skipped)):
            # revised F is nonempty over a nonempty pole; none met within the
            # bound.  Membership for every b <= bound is taken as evidence (the
            # k_pole.s realisers); over the full pole every n T c holds outright.
            return unknown("bound", self.bound, self.fuel)
        return true(self.bound, self.fuel)

    def _eval(self, A, env, depth) -> Verdict:
        bound, fuel = self.bound, self.fuel
        if isinstance(A, Imp):
            a = self.evaluate(A.ante, env, depth)
            if a.is_false:
                return true(bound, fuel)
            b = self.evaluate(A.cons, env, depth)
            if b.is_true:
                return true(bound, fuel)
            if a.is_true and b.is_false:
                return b
            return unknown((a if a.is_unknown else b).reason, bound, fuel)
        if isinstance(A, Forall):
            pending = None
            guarded = isinstance(A.body, Imp) and not self.pole.is_empty
            guard_met = False
            inner = dict(env)
            for x in range(bound + 1):
                inner[A.var] = x
                v = self.evaluate(A.body, inner, depth)
                if v.is_false:
                    return false(bound, fuel, witness=x)
                if v.is_unknown and pending is None:
                    pending = v
                if guarded and not guard_met:
                    guard_met = not self.evaluate(A.body.ante, inner, depth).is_false
            if pending is not None:
                return pending
            if guarded and not guard_met:
                # over a nonempty pole the guards of explicit forms range over
                # pairs that outgrow the bound; no instance met means no evidence
                return unknown("bound", bound, fuel)
            return true(bound, fuel)
        try:
            if isinstance(A, Eq):
                ok = eval_term(A.lhs, env, fuel) == eval_term(A.rhs, env, fuel)
                return true(bound, fuel) if ok else false(bound, fuel, witness=str(A))
            if isinstance(A, InPole):
                n = eval_term(A.term, env, fuel)
                v = member(self.pole, n, fuel)
                return Verdict(v.value, bound, fuel, v.reason, n if v.is_false else None)
            if isinstance(A, Fatom):
                n, c = eval_term(A.left, env, fuel), eval_term(A.right, env, fuel)
                return self.frel.lookup(n, c, depth)
            if isinstance(A, Tatom):
                n, c = eval_term(A.left, env, fuel), eval_term(A.right, env, fuel)
                return self.t_relation(n, c, depth)
        except Undetermined as u:
            return unknown(u.reason, bound, fuel)
        raise ValueError(f"not an L_R formula: {A}")


@lru_cache(maxsize=1 << 16)
def _fv(A: Formula) -> frozenset:
    return frozenset(sx.free_vars(A))


def eval_LR(m: Model, A: Formula) -> Verdict:
    if not is_LR(A) or not is_sentence(A):
        raise ValueError(f"expected an L_R-sentence, got {A}")
    return m.evaluate(A)


# ---------------------------------------------------------------- revision


@dataclass
class StageTable:
    """Materialised cells of one revision stage over n <= bound and W."""
    stage: int
    true_cells: set
    false_cells: set
    unknown_cells: set


def revision_step(p: Pole, frel: Relation, W=(), bound: int = DEFAULT_BOUND,
                  fuel: int = DEFAULT_FUEL) -> RevisedRelation:
    rel = RevisedRelation(p, frel, bound, fuel)
    for c in W:
        for n in range(bound + 1):
            rel.lookup(n, c)
    return rel


def revision_iterate(p: Pole, frel0: Relation | None, m: int, W=(),
                     bound: int = DEFAULT_BOUND, fuel: int = DEFAULT_FUEL) -> Relation:
    """Γ^m(frel0); Γ^0 is frel0 itself."""
    rel = EmptyRelation() if frel0 is None else frel0
    for _ in range(m):
        rel = revision_step(p, rel, W, bound, fuel)
    return rel


def stage_models(p: Pole, stages: int, bound: int = DEFAULT_BOUND,
                 fuel: int = DEFAULT_FUEL, frel0: Relation | None = None) -> list[Model]:
    """Models <p, Γ^m(frel0)> for m = 0..stages, sharing the lazy caches."""
    rel = EmptyRelation() if frel0 is None else frel0
    models = [Model(p, rel, bound, fuel)]
    for _ in range(stages):
        rel = RevisedRelation(p, rel, bound, fuel)
        models.append(Model(p, rel, bound, fuel))
    return models


def tabulate_stage(rel: Relation, W, bound: int) -> StageTable:
    t, f, u = set(), set(), set()
    for c in W:
        for n in range(bound + 1):
            v = rel.lookup(n, c)
            (t if v.is_true else f if v.is_false else u).add((n, c))
    return StageTable(rel.stage, t, f, u)


@dataclass
class EventualReport:
    formula: str
    verdicts: list  # per stage
    start: int | None
    window: int

    @property
    def ok(self) -> bool:
        return self.start is not None


def check_eventual(p: Pole, frel0: Relation | None, A: Formula, n_cap: int = 6,
                   window: int = 2, bound: int = DEFAULT_BOUND,
                   fuel: int = DEFAULT_FUEL,
                   models: list[Model] | None = None) -> EventualReport:
    """Find n <= n_cap with A True at every stage of [n, n+window-1].

    Stages are evaluated in order and the search stops at the first window,
    since later stages nest much deeper.
    """
    if models is None:
        models = stage_models(p, 0, bound, fuel, frel0)
    verdicts: list[Verdict] = []
    run = 0
    for k in range(n_cap + window):
        while len(models) <= k:
            prev = models[-1]
            models.append(Model(p, RevisedRelation(p, prev.frel, bound, fuel), bound, fuel))
        v = eval_LR(models[k], A)
        verdicts.append(v)
        run = run + 1 if v.is_true else 0
        if run == window:
            return EventualReport(sx.print_formula(A), verdicts, k - window + 1, window)
    return EventualReport(sx.print_formula(A), verdicts, None, window)


def evaluator(m: Model) -> Callable[[Formula], Verdict]:
    return lambda A: eval_LR(m, A)
