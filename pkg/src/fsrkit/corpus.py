"""Sentence and derivation corpora used by the acceptance suite and the CLI.

Witnesses and counterexamples in the sentence corpus are kept small: the
bounded semantics only explores refuters pair(x, r) <= bound, so a universal
claim failing first at a large x reads as True-at-bound.
"""
from __future__ import annotations

from .proofs import (
    EMPTY_POLE, Builder, Derivation, Script, split_iff, ax_pole_instance, ax_t_instance,
    conj_elim_left, forall_instance, imp_instance, p1_instance, p2_instance,
    reg_instance,
)
from .syntax import (
    BOT, ZERO, Eq, Forall, Formula, Imp, InPole, Num, Tatom, Var, encode, fn,
    neg, parse_formula, substitute, succ,
)
from .transforms import explicit_realiser

L_SENTENCES = (
    "0=0",
    "0=1",
    "S(0)=1",
    "2+2=4",
    "2*3=5",
    "0=0 -> 0=0",
    "0=1 -> 0=0",
    "0=0 -> 0=1",
    "(0=1 -> 0=1) -> 0=1",
    "forall x. x=x",
    "forall x. x=0",
    "forall x. x+0=x",
    "forall x. x*0=0",
    "forall x. S(x)=x",
    "forall x. x=3 -> S(x)=4",
    "forall x. forall y. x+y=y+x",
    "forall x. forall y. x=y",
    "forall x. forall y. x=y -> y=x",
    "exists x. x=3",
    "exists x. x+x=4",
    "exists x. x+x=5",
    "exists x. x*x=9",
    "exists x. S(x)=0",
    "forall x. exists y. y=x",
    "exists x. forall y. x=y",
    "forall x. x=0 | exists y. x=S(y)",
    "not (0=1)",
    "not forall x. x=0",
    "forall x. p0(pair(x, 2))=x",
    "p1(pair(3, 4))=4",
)


def l_corpus() -> list[Formula]:
    return [parse_formula(s, "L") for s in L_SENTENCES]


LR_SENTENCES = (
    "0=0",
    "0=1",
    "0=0 -> 0=1",
    "forall x. x+0=x",
    "Pole(0)",
    "Pole(0) -> 0=1",
    "F(0, ⌜0=0⌝)",
    "T(0, ⌜0=0⌝)",
    "T(0, ⌜0=1⌝)",
    "forall x. T(x, ⌜0=0⌝)",
    "forall x. F(x, ⌜0=1⌝) -> Pole(x)",
    "exists x. T(x, ⌜forall y. y=y⌝)",
)

# (variable, body with exactly that variable free)
LR_OPEN = (
    ("x", "x=x"),
    ("x", "x=2"),
    ("x", "S(x)=0"),
    ("x", "x+0=x"),
    ("x", "Pole(x)"),
    ("x", "T(x, ⌜0=0⌝)"),
    ("x", "F(x, ⌜0=1⌝)"),
)


def lr_corpus() -> list[Formula]:
    return [parse_formula(s, "LR") for s in LR_SENTENCES]


def lr_open_corpus() -> list[tuple[str, Formula]]:
    return [(v, parse_formula(s, "LR")) for v, s in LR_OPEN]


# ---------------------------------------------------------------- PA corpus

x, y = Var("x"), Var("y")


def _f(text: str) -> Formula:
    return parse_formula(text)


def _identity(name: str, text: str) -> Derivation:
    b = Builder(name)
    b.identity(_f(text))
    return b.build()


def _axiom(name: str, text: str, rule: str, schema: str, gens=()) -> Derivation:
    b = Builder(name)
    n = b.add(text, rule, schema)
    for v in reversed(gens):
        n = b.gen(n, v)
    return b.build()


def _symmetry(b: Builder) -> str:
    """forall x forall y (x = y -> y = x)."""
    s = Script(b)
    h = s.hyp(_f("x=y"))
    leib = s.thm(b.add("x=y -> (x=x -> y=x)", "EqAxiom", "leibniz"))
    s.mp(s.mp(leib, h), s.thm(b.add("x=x", "EqAxiom", "refl")))
    n = s.discharge(_f("x=y")).close()
    return b.gen(b.gen(n, "y"), "x")


def _transitivity(b: Builder) -> str:
    """forall x y z (x = y -> (y = z -> x = z))."""
    s = Script(b)
    h1, h2 = s.hyp(_f("x=y")), s.hyp(_f("y=z"))
    leib = s.thm(b.add("y=z -> (x=y -> x=z)", "EqAxiom", "leibniz"))
    s.mp(s.mp(leib, h2), h1)
    n = s.discharge(_f("y=z")).discharge(_f("x=y")).close()
    return b.gen(b.gen(b.gen(n, "z"), "y"), "x")


def _induction(b: Builder, body: Formula, base: str, step_script) -> str:
    """forall x body from a base node and a script proving the step under body."""
    s = Script(b)
    h = s.hyp(body)
    step_script(b, s, h)
    step = b.gen(s.discharge(body).close(), "x")
    ind = b.add(Imp(substitute(body, "x", ZERO),
                    Imp(Forall("x", Imp(body, substitute(body, "x", succ(x)))), Forall("x", body))),
                "PAInduction")
    return b.mp(b.mp(ind, base), step)


def _zero_plus(b: Builder) -> str:
    """forall x (0 + x = x) by induction."""
    def step(b, s, h):
        leib = s.thm(b.add("0+x=x -> (0+S(x)=S(0+x) -> 0+S(x)=S(x))", "EqAxiom", "leibniz"))
        s.mp(s.mp(leib, h), s.thm(b.add("0+S(x)=S(0+x)", "ArithAxiom", "add_succ")))
    return _induction(b, _f("0+x=x"), b.add("0+0=0", "ArithAxiom", "add_zero"), step)


def _zero_times(b: Builder) -> str:
    """forall x (0 * x = 0) by induction."""
    def step(b, s, h):
        e1 = s.thm(b.add("0*S(x)=0*x+0", "ArithAxiom", "mul_succ"))
        e2 = s.thm(b.add("0*x+0=0*x", "ArithAxiom", "add_zero"))
        l1 = s.thm(b.add("0*x+0=0*x -> (0*S(x)=0*x+0 -> 0*S(x)=0*x)", "EqAxiom", "leibniz"))
        e3 = s.mp(s.mp(l1, e2), e1)
        l2 = s.thm(b.add("0*x=0 -> (0*S(x)=0*x -> 0*S(x)=0)", "EqAxiom", "leibniz"))
        s.mp(s.mp(l2, h), e3)
    return _induction(b, _f("0*x=0"), b.add("0*0=0", "ArithAxiom", "mul_zero"), step)


def _trivial_induction(b: Builder) -> str:
    """forall x (0 = 0) through the induction schema with a constant body."""
    def step(b, s, h):
        pass  # the hypothesis itself is the step's conclusion
    return _induction(b, _f("0=0"), b.add("0=0", "EqAxiom", "refl"), step)


def _double_negation_intro(b: Builder) -> str:
    """not not forall x (x = x), then back by DN."""
    A = Forall("x", Eq(x, x))
    s = Script(b)
    h = s.hyp(neg(A))
    s.mp(h, s.thm(b.gen(b.add("x=x", "EqAxiom", "refl"), "x")))
    nna = s.discharge(neg(A)).close()
    dn = b.add(Imp(neg(neg(A)), A), "PropAxiom", "DN")
    return b.mp(dn, nna)


def _exists_three(b: Builder) -> str:
    """exists x (x = 3) as not forall x not (x = 3)."""
    body = neg(Eq(x, Num(3)))
    s = Script(b)
    h = s.hyp(Forall("x", body))
    inst = s.thm(b.add(Imp(Forall("x", body), neg(Eq(Num(3), Num(3)))), "QuantAxiom", "inst"))
    s.mp(s.mp(inst, h), s.thm(b.add("3=3", "EqAxiom", "refl")))
    return s.discharge(Forall("x", body)).close()


def _instance_mp(b: Builder) -> str:
    """forall x (x = x) instantiated at 5."""
    g = b.gen(b.add("x=x", "EqAxiom", "refl"), "x")
    inst = b.add("(forall x. x=x) -> 5=5", "QuantAxiom", "inst")
    return b.mp(inst, g)


def _distribution(b: Builder) -> str:
    """0 = 0 -> forall x (x = x) via dist."""
    k = b.add("x=x -> (0=0 -> x=x)", "PropAxiom", "K")
    r = b.add("x=x", "EqAxiom", "refl")
    g = b.gen(b.mp(k, r), "x")
    d = b.add("(forall x. (0=0 -> x=x)) -> (0=0 -> forall x. x=x)", "QuantAxiom", "dist")
    return b.mp(d, g)


def _plus_one(b: Builder) -> str:
    """forall x (x + 1 = S(x))."""
    l = b.add("x+0=x -> (x+1=S(x+0) -> x+1=S(x))", "EqAxiom", "leibniz")
    n = b.mp(b.mp(l, b.add("x+0=x", "ArithAxiom", "add_zero")),
             b.add("x+1=S(x+0)", "ArithAxiom", "add_succ"))
    return b.gen(n, "x")


def _built(name: str, make) -> Derivation:
    b = Builder(name)
    make(b)
    return b.build()


def pa_corpus() -> list[Derivation]:
    """Twenty-five PA derivations; four use the induction schema."""
    return [
        _identity("identity", "0=0"),
        _identity("identity-false-atom", "0=S(0)"),
        _identity("identity-universal", "forall x. x=x"),
        _axiom("K", "0=0 -> (0=1 -> 0=0)", "PropAxiom", "K"),
        _axiom("S", "(0=0 -> (0=1 -> 0=0)) -> ((0=0 -> 0=1) -> (0=0 -> 0=0))",
               "PropAxiom", "S"),
        _axiom("DN", "((0=0 -> 0=1) -> 0=1) -> 0=0", "PropAxiom", "DN"),
        _axiom("reflexivity", "x=x", "EqAxiom", "refl", ("x",)),
        _axiom("succ-ne-zero", "S(x)=0 -> 0=1", "ArithAxiom", "succ_ne_zero", ("x",)),
        _axiom("succ-inj", "S(x)=S(y) -> x=y", "ArithAxiom", "succ_inj", ("x", "y")),
        _axiom("add-zero", "x+0=x", "ArithAxiom", "add_zero", ("x",)),
        _axiom("add-succ", "x+S(y)=S(x+y)", "ArithAxiom", "add_succ", ("x", "y")),
        _axiom("mul-zero", "x*0=0", "ArithAxiom", "mul_zero", ("x",)),
        _axiom("mul-succ", "x*S(y)=x*y+x", "ArithAxiom", "mul_succ", ("x", "y")),
        _axiom("compute", "2+2=4", "EqAxiom", "compute"),
        _axiom("leibniz", "x=y -> (S(x)=0 -> S(y)=0)", "EqAxiom", "leibniz", ("x", "y")),
        _built("instance", _instance_mp),
        _built("distribution", _distribution),
        _built("symmetry", _symmetry),
        _built("transitivity", _transitivity),
        _built("double-negation", _double_negation_intro),
        _built("exists-three", _exists_three),
        _built("plus-one", _plus_one),
        _built("induction-zero-plus", _zero_plus),
        _built("induction-zero-times", _zero_times),
        _built("induction-constant", _trivial_induction),
    ]


# ---------------------------------------------------------------- FSR corpus

a, bv, c = Var("a"), Var("b"), Var("c")
_ZERO_EQ = Eq(ZERO, ZERO)


def _gcr(name: str, schema: str, formula: Formula, gens=(), theory: str = "FSR"):
    b = Builder(name)
    n = b.add(formula, "GCRAxiom", schema)
    for v in reversed(gens):
        n = b.gen(n, v)
    return b.build(), theory


def _zero_realises(b: Builder, A: Formula = _ZERO_EQ) -> str:
    """0 ∈ |0 = 0| in FSR∅: every pole premise is refuted by the empty-pole axiom."""
    form = explicit_realiser(ZERO, A)  # forall a ((0=0 -> Pole(a)) -> Pole(pair(0,a)))
    v = form.var
    hyp = form.body.ante
    target = form.body.cons
    s = Script(b)
    h = s.hyp(hyp)
    pole_v = s.mp(h, s.thm(b.add(A, "EqAxiom", "refl")))
    empty = s.thm(b.add(EMPTY_POLE, "EmptyPole"))
    inst = s.thm(b.add(Imp(EMPTY_POLE, Imp(InPole(Var(v)), BOT)), "QuantAxiom", "inst"))
    bot = s.mp(s.mp(inst, empty), pole_v)
    k = s.thm(b.add(Imp(BOT, Imp(neg(target), BOT)), "PropAxiom", "K"))
    dn = s.thm(b.add(Imp(neg(neg(target)), target), "PropAxiom", "DN"))
    s.mp(dn, s.mp(k, bot))
    n = s.discharge(hyp).close()
    return b.gen(n, v)


def _necr(b: Builder) -> str:
    n = _zero_realises(b)
    return b.add(Tatom(ZERO, Num(encode(_ZERO_EQ))), "NECR", None, n)


def _conecr(b: Builder) -> str:
    n = _necr(b)
    return b.add(explicit_realiser(ZERO, _ZERO_EQ), "CONECR", None, n)


def _not_pole_zero(b: Builder) -> str:
    empty = b.add(EMPTY_POLE, "EmptyPole")
    inst = b.add(Imp(EMPTY_POLE, Imp(InPole(ZERO), BOT)), "QuantAxiom", "inst")
    return b.mp(inst, empty)


def _ax_t_left(b: Builder) -> str:
    """forall a (a T ⌜0=0⌝ -> forall b (b F ⌜0=0⌝ -> Pole(pair(a,b)))) from AxT."""
    inst = ax_t_instance(a, encode(_ZERO_EQ))
    ax = b.add(inst, "GCRAxiom", "AxT")
    left, right = split_iff(inst)
    elim = conj_elim_left(b, Imp(left, right), Imp(right, left))
    return b.gen(b.mp(elim, ax), "a")


def _pa_inside(name: str, make) -> tuple[Derivation, str]:
    return _built(name, make), "FSR"


def fsr_corpus() -> list[tuple[Derivation, str]]:
    """Fifteen derivations with the theory each is checked in."""
    zero_eq = encode(_ZERO_EQ)
    imp_code_pair = (_ZERO_EQ, Eq(ZERO, Num(1)))
    items = [
        _gcr("AxPole", "AxPole", ax_pole_instance(a, bv, c), ("a", "b", "c")),
        _gcr("AxT-atom", "AxT", ax_t_instance(a, zero_eq), ("a",)),
        _gcr("AxT-pole-atom", "AxT", ax_t_instance(a, encode(InPole(ZERO))), ("a",)),
        _gcr("Reg", "Reg", reg_instance(fn("+", Num(1), Num(1)), Num(2), a,
                                         Eq(Var("x"), Num(2)), "x"), ("a",)),
        _gcr("P1", "P1", p1_instance(Eq(Var("x"), ZERO), a), ("a", "x")),
        _gcr("P2", "P2", p2_instance(InPole(Var("x")), a), ("a", "x")),
        _gcr("Imp", "Imp", imp_instance(a, *imp_code_pair), ("a",)),
        _gcr("Forall", "Forall", forall_instance(a, Forall("x", Eq(Var("x"), Var("x")))), ("a",)),
        (_built("EmptyPole", lambda b: b.add(EMPTY_POLE, "EmptyPole")), "FSR∅"),
        (_built("zero-realises", _zero_realises), "FSR∅"),
        (_built("NECR", _necr), "FSR∅"),
        (_built("CONECR", _conecr), "FSR∅"),
        (_built("not-pole-zero", _not_pole_zero), "FSR∅"),
        (_built("AxT-left", _ax_t_left), "FSR"),
        _pa_inside("PA-zero-plus", _zero_plus),
    ]
    return items
