"""The acceptance criteria as runnable checks.

Each ``criterion_*`` function returns a :class:`CriterionResult`; the CLI
``suite`` subcommand and ``tests/test_acceptance.py`` both go through
:func:`run_criteria`.  Parameters (bounds, corpus sizes, time limits) are
pinned here.  A criterion passes when its property holds and it finishes
within its time limit.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import machine as mc
from . import syntax as sx
from .corpus import fsr_corpus, l_corpus, lr_corpus, lr_open_corpus, pa_corpus
from .laws import compositional_laws, number_laws
from .pole import parse_pole, test_poles, check_closure
from .proofs import axiom_contracts, extract_PA
from .selfref import (build_gamma, chain_stage, gamma_iff_empty_check,
                      verify_chain)
from .semantics import (check_eventual, ct_truth, eval_LR, realises_L,
                        stage_models)
from .syntax import (Eq, Forall, Formula, Imp, InPole, Num, Term, Tatom, Fatom,
                     Tr, Var, fn)
from .transforms import (explicit_realiser, explicit_refuter, translate_empty,
                         translate_FS, translate_N)


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    seconds: float
    limit: float
    detail: str
    unknowns: int = 0

    @property
    def in_time(self) -> bool:
        return self.seconds <= self.limit

    @property
    def passed(self) -> bool:
        return self.ok and self.in_time

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        late = "" if self.in_time else " (over time)"
        return (f"[{status}] {self.number:2d} {self.title}: {self.detail} "
                f"[{self.seconds:.1f}s / {self.limit:.0f}s{late}]")


# ---------------------------------------------------------------- generators

_FUNCTIONS = (("S", 1), ("+", 2), ("*", 2), ("pair", 2), ("p0", 1), ("p1", 1))


def random_term(rng: random.Random, depth: int, names=("x", "y", "z")) -> Term:
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        if names and rng.random() < 0.5:
            return Var(rng.choice(names))
        return Num(rng.randrange(6))
    sym, arity = rng.choice(_FUNCTIONS)
    return fn(sym, *(random_term(rng, depth - 1, names) for _ in range(arity)))


def random_formula(rng: random.Random, depth: int, language: str = "LR",
                   names=("x", "y", "z")) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        kinds = ["eq"]
        if language in ("LR",):
            kinds += ["pole", "F", "T"]
        if language == "LT":
            kinds += ["tr"]
        kind = rng.choice(kinds)
        s, t = random_term(rng, 2, names), random_term(rng, 2, names)
        if kind == "eq":
            return Eq(s, t)
        if kind == "pole":
            return InPole(s)
        if kind == "F":
            return Fatom(s, t)
        if kind == "T":
            return Tatom(s, t)
        return Tr(s)
    if rng.random() < 0.5:
        return Imp(random_formula(rng, depth - 1, language, names),
                   random_formula(rng, depth - 1, language, names))
    return Forall(rng.choice(names), random_formula(rng, depth - 1, language, names))


def random_program(rng: random.Random, depth: int, scope: int = 1):
    """A closed machine term with `scope` de Bruijn variables in reach."""
    if depth <= 0 or rng.random() < 0.25:
        if scope and rng.random() < 0.6:
            return mc.Var(rng.randrange(scope))
        return mc.Num(rng.randrange(8))
    kind = rng.randrange(8)

    def sub():
        return random_program(rng, depth - 1, scope)

    if kind == 0:
        return mc.Succ(sub())
    if kind == 1:
        return mc.Add(sub(), sub())
    if kind == 2:
        return mc.Mul(sub(), sub())
    if kind == 3:
        return mc.Pair(sub(), sub())
    if kind == 4:
        return rng.choice((mc.P0, mc.P1))(sub())
    if kind == 5:
        return mc.IfZero(sub(), sub(), sub())
    if kind == 6:
        return mc.App(mc.Lam(random_program(rng, depth - 1, scope + 1)), sub())
    return mc.Lam(random_program(rng, depth - 1, scope + 1))


def program_catalog(size: int = 200, seed: int = 2) -> list[int]:
    rng = random.Random(seed)
    fixed = [mc.compile_lambda(src) for src in mc.COMBINATOR_SOURCE.values()]
    fixed.append(mc.encode_prog(mc.Lam(mc.OMEGA)))
    progs = list(fixed)
    while len(progs) < size:
        progs.append(mc.encode_prog(mc.Lam(random_program(rng, 4))))
    return progs[:size]


# ---------------------------------------------------------------- 1-3


def criterion_coding(count: int = 1000, seed: int = 1) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for i in range(count):
        x = random_term(rng, 4) if i % 4 == 0 else random_formula(rng, 3)
        c = sx.encode(x)
        if sx.decode(c) != x:
            bad.append(("decode", x))
            continue
        n = rng.randrange(10)
        expected = x
        names = sx.term_vars(x) if isinstance(x, (Var, Num, sx.App)) else sx.free_vars(x)
        for v in sorted(names):
            expected = (sx.subst_term(expected, v, Num(n)) if isinstance(x, (Var, Num, sx.App))
                        else sx.substitute(expected, v, Num(n)))
        if sx.sub_num(c, n) != sx.encode(expected):
            bad.append(("sub_num", x))
    return not bad, f"{count} items, {len(bad)} failures"


def criterion_machine(pair_limit: int = 2000, catalog: int = 200, fuel: int = 2000) -> tuple[bool, str]:
    problems = []
    seen = set()
    for n in range(pair_limit + 1):
        x, y = mc.unpair(n)
        if mc.pair(x, y) != n:
            problems.append(("pair", n))
        seen.add((x, y))
    if len(seen) != pair_limit + 1:
        problems.append(("injective", len(seen)))
    progs = program_catalog(catalog)
    halted = 0
    for code in progs:
        if mc.decode_prog(code) is None or mc.encode_prog(mc.decode_prog(code)) != code:
            problems.append(("roundtrip", code))
        for arg in (0, 1, 7):
            first, steps = mc.run(code, arg, fuel)
            again, steps2 = mc.run(code, arg, fuel)
            if repr(first) != repr(again) or steps != steps2:
                problems.append(("determinism", code, arg))
            if isinstance(first, mc.Value):
                halted += 1
                for more in (fuel + 1, 2 * fuel):
                    later = mc.eval_code(code, arg, more)
                    if not (isinstance(later, mc.Value) and later.n == first.n):
                        problems.append(("monotone", code, arg))
                witness = mc.pair(steps, first.n)
                if not mc.kleene_T1(code, arg, witness):
                    problems.append(("T1", code, arg))
                others = [c for c in range(0, 400) if c != witness and mc.kleene_T1(code, arg, c)]
                others += [c for c in (mc.pair(steps + 1, first.n), mc.pair(steps, first.n + 1))
                           if mc.kleene_T1(code, arg, c)]
                if others:
                    problems.append(("T1 functional", code, arg))
    return not problems, f"{len(progs)} programs, {halted} halting runs, {len(problems)} problems"


def criterion_closure(code_bound: int = 200, arg_bound: int = 50, fuel: int = 10_000) -> tuple[bool, str]:
    reports = [check_closure(p, code_bound, arg_bound, fuel) for p in test_poles()]
    detail = ", ".join(f"{r.pole}: {len(r.violations)} violations in {r.halting} halting runs" for r in reports)
    return all(r.ok for r in reports), detail


# ---------------------------------------------------------------- 4-6


def criterion_number_laws(numbers: int = 32, bound: int = 16, partners: int | None = None):
    rep = number_laws(test_poles(), l_corpus(), numbers=numbers, bound=bound, partners=partners)
    unknown = sum(c.verdict.is_unknown for c in rep.cases)
    return rep.ok, f"{len(rep.cases)} cases, {len(rep.failures)} False; {rep.summary()}", unknown


def criterion_compositional_laws(stages=(2, 3), bound: int = 8, numbers: int = 8):
    models = stage_models(parse_pole("empty"), max(stages), bound=bound)
    ok, parts, unknown = True, [], 0
    for k in stages:
        rep = compositional_laws(models[k], lr_corpus(), lr_open_corpus(), numbers=numbers)
        ok &= rep.ok
        unknown += sum(c.verdict.is_unknown for c in rep.cases)
        parts.append(f"stage {k}: {len(rep.cases)} cases, {len(rep.failures)} False")
    return ok, "; ".join(parts), unknown


def criterion_truth_correspondence(bound: int = 64):
    empty = parse_pole("empty")
    agree = disagree = undecided = 0
    for A in l_corpus():
        r, c = realises_L(empty, 0, A, bound), ct_truth(A, bound)
        if r.is_unknown or c.is_unknown:
            undecided += 1
        elif r.value == c.value:
            agree += 1
        else:
            disagree += 1
    return disagree == 0, f"{agree} agree, {disagree} disagree, {undecided} undecided", undecided


# ---------------------------------------------------------------- 7


def _explicit_commutes(kind, s: Term, t: Term, A: Formula, x: str) -> bool:
    form = explicit_refuter if kind == "refuter" else explicit_realiser
    left = sx.substitute(form(t, A), x, s)
    right = form(sx.subst_term(t, x, s), sx.substitute(A, x, s))
    return sx.alpha_equal(left, right)


def criterion_substitution(count: int = 500, seed: int = 7):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        A = random_formula(rng, 3)
        t = random_term(rng, 2)
        s = random_term(rng, 2, names=("y", "z"))
        for kind in ("refuter", "realiser"):
            bad += not _explicit_commutes(kind, s, t, A, "x")
    return bad == 0, f"{count} triples, both forms, {bad} mismatches"


# ---------------------------------------------------------------- 8-10


def criterion_extraction(bound: int = 32):
    poles = test_poles()
    bad, unknown = [], 0
    for d in pa_corpus():
        cert = extract_PA(d)
        A = sx.forall_many(sorted(sx.free_vars(d.conclusion)), d.conclusion)
        for p in poles:
            v = realises_L(p, cert.code, A, bound)
            unknown += v.is_unknown
            if v.is_false or (p.is_empty and not v.is_true):
                bad.append(f"{d.name}@{p}")
    return not bad, f"25 derivations x {len(poles)} poles, bad: {bad or 'none'}", unknown


def criterion_axiom_realisers(stages=(2, 3), bound: int = 12):
    contracts = axiom_contracts()
    bad, unknown, total = [], 0, 0
    for p in test_poles():
        models = stage_models(p, max(stages), bound=bound)
        for k in stages:
            for name, sentence in contracts.items():
                v = eval_LR(models[k], sentence)
                total += 1
                unknown += v.is_unknown
                if v.is_false:
                    bad.append(f"{name}@{p}/{k}")
    return not bad, f"{total} contract checks, bad: {bad or 'none'}", unknown


def criterion_revision_soundness(n_cap: int = 6, window: int = 2, bound: int = 8):
    empty = parse_pole("empty")
    starts, bad = [], []
    for d, _theory in fsr_corpus():
        A = sx.forall_many(sorted(sx.free_vars(d.conclusion)), d.conclusion)
        rep = check_eventual(empty, None, A, n_cap=n_cap, window=window, bound=bound)
        if rep.ok:
            starts.append(rep.start)
        else:
            bad.append(d.name)
    return not bad, f"{len(starts)} stable windows, starts {starts}, missing: {bad or 'none'}"


# ---------------------------------------------------------------- 11


TRANSLATION_GOLDEN = {
    "FS": [
        ("0=0", "0=0"),
        ("S(0)=1", "S(0)=S(0)"),
        ("x+y=y+x", "x+y=y+x"),
        ("Tr(⌜0=0⌝)", "T(0, ⌜0=0⌝)"),
        ("Tr(⌜Tr(⌜0=1⌝)⌝)", "T(0, ⌜T(0, ⌜0=1⌝)⌝)"),
        ("Tr(x)", "T(0, tauFS(x))"),
        ("Tr(⌜0=0⌝) -> 0=1", "T(0, ⌜0=0⌝) -> 0=1"),
        ("forall x. Tr(x) -> x=x", "forall x. T(0, tauFS(x)) -> x=x"),
        ("not Tr(⌜0=1⌝)", "T(0, ⌜0=1⌝) -> 0=1"),
        ("forall x. forall y. x=y", "forall x. forall y. x=y"),
        ("Tr(⌜forall x. x=x⌝)", "T(0, ⌜forall x. x=x⌝)"),
        ("Tr(⌜Tr(x)⌝)", "T(0, ⌜T(0, tauFS(x))⌝)"),
    ],
    "empty": [
        ("0=0", "0=0"),
        ("Pole(0)", "0=1"),
        ("Pole(x) -> x=x", "0=1 -> x=x"),
        ("forall x. Pole(x)", "forall x. 0=1"),
        ("F(0, ⌜0=1⌝)", "Tr(⌜0=1 -> 0=1⌝)"),
        ("F(0, ⌜0=0⌝)", "Tr(⌜0=0 -> 0=1⌝)"),
        ("T(0, ⌜0=0⌝)", "Tr(⌜forall a. (0=0 -> 0=1) -> 0=1⌝)"),
        ("F(x, y)", "Tr(tauEmpty(inrft(x, y)))"),
        ("T(x, y)", "Tr(tauEmpty(inrlz(x, y)))"),
        ("F(1, ⌜Pole(0)⌝)", "Tr(⌜0=1 -> 0=1⌝)"),
        ("T(0, ⌜0=0⌝) -> Pole(1)", "Tr(⌜forall a. (0=0 -> 0=1) -> 0=1⌝) -> 0=1"),
        ("forall x. F(x, ⌜0=1⌝) -> x=x", "forall x. Tr(tauEmpty(inrft(x, ⌜0=1⌝))) -> x=x"),
    ],
    "N": [
        ("0=0", "0=0"),
        ("Pole(0)", "0=0"),
        ("F(0, ⌜0=1⌝)", "0=0"),
        ("T(x, y)", "0=0"),
        ("x=1 -> Pole(x)", "x=1 -> 0=0"),
        ("forall x. Pole(x)", "forall x. 0=0"),
        ("forall x. T(x, ⌜0=1⌝) -> 0=1", "forall x. 0=0 -> 0=1"),
        ("Pole(0) -> F(0, 0)", "0=0 -> 0=0"),
        ("forall x. forall y. x+y=y", "forall x. forall y. x+y=y"),
        ("not Pole(S(0))", "0=0 -> 0=1"),
        ("S(0)*2=2", "S(0)*2=2"),
        ("forall y. F(y, y) -> T(y, y)", "forall y. 0=0 -> 0=0"),
    ],
}

_TRANSLATIONS = {"FS": translate_FS, "empty": translate_empty, "N": translate_N}


def _golden_failures() -> list[str]:
    bad = []
    for name, cases in TRANSLATION_GOLDEN.items():
        tr = _TRANSLATIONS[name]
        for src, expected in cases:
            got = tr(sx.parse_any(src))
            if not sx.alpha_equal(got, sx.parse_any(expected)):
                bad.append(f"{name}: {src} gave {got}")
    return bad


def _empty_form(form, s: Term, A: Formula) -> Formula:
    return translate_empty(form(s, A))


def empty_pole_law_sentences(pairs: int = 10) -> dict[str, list[Formula]]:
    """Laws of the empty-pole translation as L sentences, keyed by the clause they test."""
    a = Var("a")
    p0, p1 = fn("p0", a), fn("p1", a)
    L = l_corpus()
    items: dict[str, list[Formula]] = {"pole": [], "atom": [], "imp": [], "forall": []}
    items["pole"].append(Forall("a", sx.neg(translate_empty(InPole(a)))))
    for P in (A for A in L if isinstance(A, Eq)):
        items["atom"].append(Forall("a", sx.iff(_empty_form(explicit_refuter, a, P), sx.neg(P))))
    head = L[:pairs]
    for A, B in zip(head, head[1:] + head[:1]):
        lhs = _empty_form(explicit_refuter, a, Imp(A, B))
        rhs = sx.conj(_empty_form(explicit_realiser, p0, A), _empty_form(explicit_refuter, p1, B))
        items["imp"].append(Forall("a", sx.iff(lhs, rhs)))
    for A in (A for A in L if isinstance(A, Forall)):
        lhs = _empty_form(explicit_refuter, a, A)
        rhs = _empty_form(explicit_refuter, p1, sx.substitute(A.body, A.var, p0))
        items["forall"].append(Forall("a", sx.iff(lhs, rhs)))
    return items


def criterion_translations(bound: int = 16):
    bad = _golden_failures()
    counts = {}
    unknown = 0
    for item, sentences in empty_pole_law_sentences().items():
        counts[item] = len(sentences)
        for S in sentences:
            v = ct_truth(S, bound)
            unknown += v.is_unknown
            if not v.is_true:
                bad.append(f"{item} law: {S} is {v}")
    golden = sum(len(v) for v in TRANSLATION_GOLDEN.values())
    return (not bad, f"{golden} golden cases, empty-pole law instances {counts}, "
            f"{len(bad)} failures" + (f": {bad[:2]}" if bad else ""), unknown)


# ---------------------------------------------------------------- 12


def criterion_mcgee(stages=(2, 3), levels: int = 2, bound: int = 8):
    cert = build_gamma()
    parts = [f"identity {'holds' if cert.identity_holds() else 'fails'}"]
    ok = cert.identity_holds()
    models = stage_models(parse_pole("empty"), max(stages), bound=bound)
    for k in stages:
        report = verify_chain(models[k], levels)
        settled = [lv for lv in report.levels if chain_stage(lv.level) <= k]
        ok &= not any(lv.verdict.is_false for lv in settled)
        cells = " ".join(f"{lv.level}:{lv.verdict.label}" + ("" if chain_stage(lv.level) <= k else "*")
                         for lv in report.levels)
        parts.append(f"stage {k} [{cells}]")
    rows = gamma_iff_empty_check(("empty", "full", "seed:5"), stages=max(stages), bound=bound)
    ok &= all(r.matches for r in rows)
    parts.append("γ table " + " ".join(f"{r.pole}={r.gamma.label}" for r in rows))
    return ok, "; ".join(parts) + " (* = before the level settles, not checked)"


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    limit: float
    run: Callable


CRITERIA = (
    Criterion(1, "coding round-trips", 5, criterion_coding),
    Criterion(2, "machine laws", 30, criterion_machine),
    Criterion(3, "pole closure", 60, criterion_closure),
    Criterion(4, "k_pi/k_pole/i laws", 120, criterion_number_laws),
    Criterion(5, "i/h/u/s/e laws", 120, criterion_compositional_laws),
    Criterion(6, "empty-pole truth correspondence", 30, criterion_truth_correspondence),
    Criterion(7, "substitution lemma", 10, criterion_substitution),
    Criterion(8, "extraction soundness", 120, criterion_extraction),
    Criterion(9, "axiom realiser contracts", 180, criterion_axiom_realisers),
    Criterion(10, "revision soundness sweep", 180, criterion_revision_soundness),
    Criterion(11, "translation laws", 30, criterion_translations),
    Criterion(12, "McGee experiment", 180, criterion_mcgee),
)


def run_criterion(c: Criterion) -> CriterionResult:
    start = time.perf_counter()
    out = c.run()
    seconds = time.perf_counter() - start
    ok, detail = out[0], out[1]
    unknown = out[2] if len(out) > 2 else 0
    return CriterionResult(c.number, c.title, ok, seconds, c.limit, detail, unknown)


def run_criteria(select=None, on_result=None) -> list[CriterionResult]:
    results = []
    for c in CRITERIA:
        if select and c.number not in select:
            continue
        r = run_criterion(c)
        results.append(r)
        if on_result:
            on_result(r)
    return results
