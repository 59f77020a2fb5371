"""Bounded sweeps of the combinator laws.

Two families are checked here:

* the number-realisability laws for ``k_pi``, ``k_pole`` and ``i`` over
  L-sentences and concrete poles, stated with ``refutes_L``/``realises_L``;
* the compositionality laws for ``i``, ``h``, ``u``, ``s`` and ``e`` inside a
  revision model, stated with the T relation of that model.

A case is only evaluated when its premises are True at the bound.  A law
fails when some conclusion is False; Unknown conclusions are reported but
do not count as failures.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from . import syntax as sx
from .machine import apply, combinators, compile_lambda, pair
from .pole import Pole, member
from .semantics import Model, realises_L, refutes_L
from .syntax import Formula, Imp, Num
from .verdict import Verdict, unknown

# numbers below 33 are all non-halting programs, so the h/u premises need
# some total functions to be non-vacuous
EXTRA_CANDIDATES = (r"λb. b", r"λb. 0", r"λb. ⟨p0(b), p1(b)⟩", r"λb. ⟨b, b⟩")


def extra_candidates() -> list[int]:
    return [compile_lambda(src) for src in EXTRA_CANDIDATES]


@dataclass
class LawCase:
    law: str
    pole: str
    detail: str
    verdict: Verdict


@dataclass
class LawReport:
    cases: list[LawCase] = field(default_factory=list)

    def add(self, law: str, pole: Pole, detail: str, verdict: Verdict):
        self.cases.append(LawCase(law, pole.name, detail, verdict))

    @property
    def failures(self) -> list[LawCase]:
        return [c for c in self.cases if c.verdict.is_false]

    @property
    def ok(self) -> bool:
        return not self.failures

    def tally(self) -> dict[str, Counter]:
        out: dict[str, Counter] = {}
        for c in self.cases:
            out.setdefault(c.law, Counter())[c.verdict.label] += 1
        return out

    def summary(self) -> str:
        parts = []
        for law, cnt in sorted(self.tally().items()):
            parts.append(f"{law}: " + ", ".join(f"{k}={v}" for k, v in sorted(cnt.items())))
        return "; ".join(parts) if parts else "no cases"


def _app(code: int, arg: int, fuel: int) -> int | None:
    return apply(code, arg, fuel)


def _realises_value(p: Pole, n: int | None, A: Formula, bound: int, fuel: int) -> Verdict:
    if n is None:
        return unknown("fuel", bound, fuel)
    return realises_L(p, n, A, bound, fuel)


def _partners(sentences: Sequence[Formula], partners: int | None):
    k = len(sentences)
    if partners is None or partners >= k:
        return [(A, B) for A in sentences for B in sentences]
    return [(sentences[i], sentences[(i + j) % k]) for i in range(k) for j in range(partners)]


def number_laws(poles: Iterable[Pole], sentences: Sequence[Formula],
                numbers: int = 32, bound: int = 16, fuel: int = 10_000,
                partners: int | None = None) -> LawReport:
    """Laws for k_pi, k_pole and i with a, b <= numbers.

    `partners` limits how many B are paired with each A (cyclically from the
    corpus); None pairs every sentence with every other.
    """
    kc = combinators()
    rep = LawReport()
    pairs = _partners(sentences, partners)
    domain = range(numbers + 1)
    for p in poles:
        # k_pi . a realises A -> B whenever a refutes A
        for A, B in pairs:
            for a in domain:
                if refutes_L(p, a, A, bound, fuel).is_true:
                    r = _app(kc["k_pi"], a, fuel)
                    rep.add("k_pi", p, f"a={a} A={A} B={B}",
                            _realises_value(p, r, Imp(A, B), bound, fuel))
        # k_pole . a realises everything whenever a is in the pole
        for a in domain:
            if member(p, a, fuel).is_true:
                r = _app(kc["k_pole"], a, fuel)
                for A in sentences:
                    rep.add("k_pole", p, f"a={a} A={A}", _realises_value(p, r, A, bound, fuel))
        # i . <a, b> realises B from a in |A -> B| and b in |A|; small numbers
        # are not programs, so the universal realisers k_pole.s join in
        cands = list(domain) + sorted({r for s in sorted(p.seed)[:2]
                                       if (r := _app(kc["k_pole"], s, fuel)) is not None})
        for A, B in pairs:
            fs = [a for a in cands if realises_L(p, a, Imp(A, B), bound, fuel).is_true]
            if not fs:
                continue
            args = [b for b in cands if realises_L(p, b, A, bound, fuel).is_true]
            for a, b in product(fs, args):
                r = _app(kc["i"], pair(a, b), fuel)
                rep.add("i", p, f"a={a} b={b} A={A} B={B}", _realises_value(p, r, B, bound, fuel))
    return rep


# ---------------------------------------------------------------- T-relation laws


def _t(m: Model, n: int | None, c: int) -> Verdict:
    if n is None:
        return unknown("fuel", m.bound, m.fuel)
    return m.t_relation(n, c)


def _open_instance(A: Formula, var: str, y: int) -> int:
    return sx.encode(sx.substitute(A, var, Num(y)))


def compositional_laws(m: Model, sentences: Sequence[Formula],
                       open_formulas: Sequence[tuple[str, Formula]],
                       numbers: int = 8, partners: int | None = 3) -> LawReport:
    """Laws for i, h, u, s, e read through the T relation of `m`.

    `sentences` are L_R-sentences; `open_formulas` are (var, A) with A having
    exactly that free variable.  Universal premises range over 0..m.bound.
    """
    kc = combinators()
    fuel, bound = m.fuel, m.bound
    p = m.pole
    rep = LawReport()
    cands = list(range(numbers + 1)) + extra_candidates()
    ys = range(bound + 1)
    code = sx.encode

    for A, B in _partners(sentences, partners):
        cA, cB, cAB = code(A), code(B), code(Imp(A, B))
        fs = [a for a in cands if _t(m, a, cAB).is_true]
        args = [b for b in cands if _t(m, b, cA).is_true]
        for a, b in product(fs, args):
            rep.add("i", p, f"a={a} b={b} A={A} B={B}",
                    _t(m, _app(kc["i"], pair(a, b), fuel), cB))
        for a in cands:
            # premise: every b <= bound with b T A has (a . b) T B
            premise = all(_t(m, _app(a, b, fuel), cB).is_true
                          for b in ys if not _t(m, b, cA).is_false)
            if premise:
                rep.add("h", p, f"a={a} A={A} B={B}", _t(m, _app(kc["h"], a, fuel), cAB))

    for var, A in open_formulas:
        cAll = code(sx.Forall(var, A))
        cEx = code(sx.exists(var, A))
        inst = [_open_instance(A, var, y) for y in ys]
        for a in cands:
            if all(_t(m, _app(a, y, fuel), inst[y]).is_true for y in ys):
                rep.add("u", p, f"a={a} A={A}", _t(m, _app(kc["u"], a, fuel), cAll))
            if _t(m, a, cAll).is_true:
                for y in ys:
                    rep.add("s", p, f"a={a} y={y} A={A}",
                            _t(m, _app(kc["s"], pair(a, y), fuel), inst[y]))
            for y in ys:
                if _t(m, a, inst[y]).is_true:
                    rep.add("e", p, f"a={a} y={y} A={A}",
                            _t(m, _app(kc["e"], pair(a, y), fuel), cEx))
    return rep
