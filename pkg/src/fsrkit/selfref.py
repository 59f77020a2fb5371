"""Diagonal sentences and the sequential-realisation experiment.

gamma says that no enumeration g has every initial segment
<g.x, ..., g.0> sequentially realising gamma.  Over the empty pole gamma
holds; over a nonempty pole a constant enumeration of a universal realiser
refutes it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import syntax as sx
from .machine import apply, combinators, compile_lambda
from .pole import Pole, parse_pole
from .semantics import Model, eval_LR, stage_models
from .syntax import (
    App, Forall, Formula, Num, Tatom, Tr, Var, decode, encode, exists, fn,
    free_vars, is_sentence, neg, substitute,
)
from .transforms import BOT_CODE
from .verdict import Verdict, false, unknown

DEFAULT_FUEL = 10_000


class FuelExhausted(Exception):
    pass


# ---------------------------------------------------------------- diagonal lemma


@dataclass
class DiagonalCertificate:
    sentence: Formula
    template: Formula
    variable: str
    template_code: int  # code of D(x) = template(sub(x, x))
    sentence_code: int
    self_term: object  # the closed term sub(⌜D⌝, ⌜D⌝)

    def identity_holds(self) -> bool:
        """The embedded self term evaluates to the sentence's own code."""
        from .semantics import eval_term
        return (eval_term(self.self_term) == self.sentence_code
                and decode(self.sentence_code) == self.sentence)


def diagonalize(template: Formula) -> DiagonalCertificate:
    fv = free_vars(template)
    if len(fv) != 1:
        raise ValueError(f"template needs exactly one free variable, has {sorted(fv)}")
    (v,) = fv
    D = substitute(template, v, fn("sub", Var(v), Var(v)))
    d = encode(D)
    self_term = fn("sub", Num(d), Num(d))
    sentence = substitute(D, v, Num(d))
    return DiagonalCertificate(sentence, template, v, d, encode(sentence), self_term)


# ---------------------------------------------------------------- McGee functions


def _is_sentence_code(c: int, language: str) -> bool:
    A = decode(c)
    return (A is not None and not isinstance(A, (Var, Num, App))
            and sx.in_language(A, language) and is_sentence(A))


@lru_cache(maxsize=4096)
def mcgee_f(n: int, c: int) -> int:
    """n-fold prefixing of Tr; the code of ⊥ on non-sentence codes."""
    if not _is_sentence_code(c, "LT"):
        return BOT_CODE
    for _ in range(n):
        c = encode(Tr(Num(c)))
    return c


def mcgee_fprime(g: int, n: int, c: int, fuel: int = DEFAULT_FUEL) -> int:
    """⌜(g.(n-1)) T ⌜ ... ⌜(g.0) T c⌝ ... ⌝⌝; raises FuelExhausted if some g.k does not halt."""
    if not _is_sentence_code(c, "LR"):
        return BOT_CODE
    for k in range(n):
        r = apply(g, k, fuel)
        if r is None:
            raise FuelExhausted(f"g.{k} did not halt within {fuel} steps")
        c = encode(Tatom(Num(r), Num(c)))
    return c


def tr_depth(A: Formula) -> int:
    """Nesting depth of quoted Tr or T atoms, following the quoted argument."""
    depth = 0
    while True:
        if isinstance(A, Tr) and isinstance(A.term, Num):
            nxt = decode(A.term.value)
        elif isinstance(A, Tatom) and isinstance(A.right, Num):
            nxt = decode(A.right.value)
        else:
            return depth
        if nxt is None or isinstance(nxt, (Var, Num, App)):
            return depth
        depth += 1
        A = nxt


def seq_realises(m: Model, g: int, x: int, y: int, fuel: int | None = None) -> Verdict:
    """g_x T y, i.e. (g.x) T f'(g, x, y), with both sides computed natively."""
    fuel = m.fuel if fuel is None else fuel
    r = apply(g, x, fuel)
    if r is None:
        return unknown("fuel", m.bound, fuel)
    try:
        c = mcgee_fprime(g, x, y, fuel)
    except FuelExhausted:
        return unknown("fuel", m.bound, fuel)
    return m.t_relation(r, c)


# ---------------------------------------------------------------- gamma


def seq_template(g: str = "g", x: str = "x", y: str = "y") -> Formula:
    """The formula g_x T y with (g.x) spelled out through Kleene's T."""
    w = "w"
    return exists(w, sx.conj(sx.Eq(fn("kleeneT", Var(g), Var(x), Var(w)), sx.ZERO),
                             Tatom(fn("p1", Var(w)), fn("fPrimeIter", Var(g), Var(x), Var(y)))))


def gamma_template() -> Formula:
    """¬∃g ∀x (g_x T c) with c free."""
    return neg(exists("g", Forall("x", seq_template("g", "x", "c"))))


@lru_cache(maxsize=1)
def build_gamma() -> DiagonalCertificate:
    return diagonalize(gamma_template())


# ---------------------------------------------------------------- realisers


def real_bot_terms() -> dict[str, int | object]:
    """Realisers for the three ⊥-lemma items.

    pairer: λa.⟨(a)0, (a)1⟩ realises x ∈ ‖⊥‖ for every x.
    refuter_of_pole_atom(x): x itself refutes x ∈ ℘ (no program needed).
    bot_realiser(x, y): λb.⟨x, 0, pairer, y, 0⟩, a ⊥-realiser once x ∈ |y T ⌜⊥⌝|.
    """
    pairer = compile_lambda(r"λa. ⟨p0(a), p1(a)⟩")

    def bot_realiser(x: int, y: int) -> int:
        return compile_lambda(r"λb. ⟨x, ⟨0, ⟨f, ⟨y, 0⟩⟩⟩⟩", {"x": x, "y": y, "f": pairer})

    return {"pairer": pairer, "refuter_of_pole_atom": lambda x: x,
            "bot_realiser": bot_realiser}


def gamma_core_term(y: int, g: int) -> int:
    """s := i.⟨f(y), e.⟨u.(λa. g.(a+1)), g⟩⟩; f(y) = y since gamma's self term is its code by (Reg)."""
    c = combinators()
    shift = compile_lambda(r"λa. g · (a + 1)", {"g": g})
    return compile_lambda(r"i · ⟨y, e · ⟨u · h, g⟩⟩",
                          {"i": c["i"], "e": c["e"], "u": c["u"], "h": shift, "y": y, "g": g})


@lru_cache(maxsize=1)
def gamma_realiser() -> int:
    """t0 ∈ |γ|, assembled from the two halves of the classical argument.

    back: realises ∃y(y T ⌜γ⌝) → γ.  A refuter is ⟨y, ⟨g, ⟨a, ⟨b, ρ⟩⟩⟩⟩;
    back runs the ⊥-realiser λb.⟨r, 0, pairer, s, 0⟩ against ρ with r = i.⟨a, b⟩
    and s the core term.
    forth: realises ¬γ → ∃y(y T ⌜γ⌝) in continuation-passing shape.
    t0 := λπ.⟨r, ⟨k_pi.π, π⟩⟩ for r the composite of forth and back.
    """
    c = combinators()
    pairer = real_bot_terms()["pairer"]
    back = compile_lambda(
        r"""λz. (λy g a b k. ⟨λq. ⟨i · ⟨a, b⟩, ⟨0, ⟨f, ⟨core y g, 0⟩⟩⟩⟩, k⟩)
              p0(z) p0(p1(z)) p0(p1(p1(z))) p0(p1(p1(p1(z)))) p1(p1(p1(p1(z))))""",
        {"i": c["i"], "f": pairer, "core": _core_program()})
    forth = compile_lambda(r"λz. ⟨p0(z), ⟨λq. ⟨p0(q), ⟨p1(z), p1(q)⟩⟩, 0⟩⟩")
    composite = compile_lambda(r"λc. ⟨b, ⟨i · ⟨a, p0(c)⟩, p1(c)⟩⟩",
                               {"a": forth, "b": back, "i": c["i"]})
    return compile_lambda(r"λp. ⟨r, ⟨k · p, p⟩⟩", {"r": composite, "k": c["k_pi"]})


@lru_cache(maxsize=1)
def _core_program() -> int:
    """λy g. i.⟨y, e.⟨u.(λa. g.(a+1)), g⟩⟩ as a curried program."""
    c = combinators()
    return compile_lambda(r"λy g. i · ⟨y, e · ⟨u · (λa. g · (a + 1)), g⟩⟩",
                          {"i": c["i"], "e": c["e"], "u": c["u"]})


@lru_cache(maxsize=1)
def necr_step() -> int:
    """λb.((b)1)1: from a refuter ⟨a, ⟨r0, r1⟩⟩ of t T ⌜A⌝ with t ∈ |A|, r1 is in the pole."""
    return compile_lambda(r"λb. p1(p1(b))")


def gamma_realiser_chain(k: int) -> list[int]:
    """t0 ∈ |γ| and t(n+1) ∈ |t(n) T ⌜...⌝| for n < k."""
    chain = [gamma_realiser()]
    for _ in range(k):
        chain.append(necr_step())
    return chain


@lru_cache(maxsize=1)
def chain_enumeration() -> int:
    """g with g.0 = t0 and g.(n+1) = t(n+1); uniform in n because the step is constant."""
    return compile_lambda(r"λa. ifz(a, t, s)", {"t": gamma_realiser(), "s": necr_step()})


@dataclass
class ChainLevel:
    level: int
    realiser: int
    verdict: Verdict


@dataclass
class ChainReport:
    stage: int
    levels: list[ChainLevel] = field(default_factory=list)

    @property
    def no_false(self) -> bool:
        return not any(l.verdict.is_false for l in self.levels)


def chain_stage(level: int) -> int:
    """Least revision stage at which chain level `level` is read as settled.

    The level-n sentence nests T n deep around γ and each stage resolves one
    more layer; on the empty pole level 2 still flips at stage 2.
    """
    return level + 1


def verify_chain(m: Model, k: int, g: int | None = None) -> ChainReport:
    """Evaluate g_n T ⌜γ⌝ for n = 0..k."""
    g = chain_enumeration() if g is None else g
    cert = build_gamma()
    report = ChainReport(m.frel.stage)
    chain = gamma_realiser_chain(k)
    for n in range(k + 1):
        report.levels.append(ChainLevel(n, chain[n], seq_realises(m, g, n, cert.sentence_code)))
    return report


def universal_realiser(p: Pole) -> int | None:
    """k_pole . a for the least seed element a; realises every sentence over p."""
    if p.is_empty:
        return None
    a = min(p.seed) if p.seed else 0
    r = apply(combinators()["k_pole"], a)
    return r


def constant_enumeration(x: int) -> int:
    return compile_lambda(r"λy. x", {"x": x})


@dataclass
class GammaRow:
    pole: str
    pole_empty: bool
    gamma: Verdict
    witness: int | None
    matches: bool


def gamma_verdict(m: Model, cert: DiagonalCertificate | None = None,
                  x_cap: int | None = None) -> tuple[Verdict, int | None]:
    """Evaluate γ in m; on a nonempty pole try the constant enumeration first."""
    cert = cert or build_gamma()
    if not m.pole.is_empty:
        g = constant_enumeration(universal_realiser(m.pole))
        x_cap = m.bound if x_cap is None else x_cap
        verdicts = [seq_realises(m, g, x, cert.sentence_code) for x in range(x_cap + 1)]
        if all(v.is_true for v in verdicts):
            return false(m.bound, m.fuel, witness=g), g
    return eval_LR(m, cert.sentence), None


def gamma_iff_empty_check(poles=("empty", "full", "seed:5"), stages: int = 3,
                          bound: int = 8, fuel: int = DEFAULT_FUEL) -> list[GammaRow]:
    rows = []
    cert = build_gamma()
    for desc in poles:
        p = parse_pole(desc) if isinstance(desc, str) else desc
        m = stage_models(p, stages, bound, fuel)[stages]
        v, witness = gamma_verdict(m, cert)
        matches = (v.is_true and p.is_empty) or (v.is_false and not p.is_empty)
        rows.append(GammaRow(p.name, p.is_empty, v, witness, matches))
    return rows
