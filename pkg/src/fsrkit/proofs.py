"""Hilbert-style derivations, a rule checker and proof-to-realiser extraction.

A derivation is a list of nodes; the last node is the conclusion.  Each node
names its rule and, for axioms, the schema it instantiates.  The checker
recognises instances by rebuilding the expected formula from the parts of
the conclusion and comparing up to renaming of bound variables.

Realisers are assembled as lambda source with the derivation's free object
variables as lambda parameters, then compiled once.  Every construction is
continuation-passing: a realiser receives a refuter and returns a pair
<program, argument> that the pole's backward closure reduces.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import syntax as sx
from .machine import _free_identifiers, combinators, compile_lambda
from .syntax import (
    BOT, ZERO, App, Eq, Fatom, Forall, Formula, Imp, InPole, Num, Tatom, Term,
    Var, alpha_equal, conj, decode, encode, fn, free_vars, iff, is_L, is_LR,
    is_sentence, neg, substitute, succ, term_vars,
)
from .transforms import explicit_realiser

THEORIES = ("PA", "CR", "GCR", "FSR", "FSR∅", "FSR+")
_THEORY_ALIASES = {"FSR0": "FSR∅", "FSR_empty": "FSR∅", "FSRplus": "FSR+"}

SCHEMAS = {
    "PropAxiom": ("K", "S", "DN"),
    "QuantAxiom": ("inst", "dist"),
    "EqAxiom": ("refl", "leibniz", "compute"),
    "ArithAxiom": ("succ_ne_zero", "succ_inj", "add_zero", "add_succ",
                   "mul_zero", "mul_succ"),
    "GCRAxiom": ("AxPole", "AxT", "Reg", "P1", "P2", "Imp", "Forall"),
}
_PA_RULES = {"PropAxiom", "QuantAxiom", "EqAxiom", "ArithAxiom", "PAInduction",
             "MP", "Gen"}
_FSR_RULES = _PA_RULES | {"GCRAxiom", "NECR", "CONECR"}
THEORY_RULES = {
    "PA": _PA_RULES,
    "CR": _PA_RULES | {"GCRAxiom"},
    "GCR": _PA_RULES | {"GCRAxiom"},
    "FSR": _FSR_RULES,
    "FSR∅": _FSR_RULES | {"EmptyPole"},
    "FSR+": _FSR_RULES | {"Reflection"},
}
_CR_AXIOMS = {"AxPole", "AxT"}

# the empty-pole axiom in the form its realiser is checked against
EMPTY_POLE = Forall("y", Imp(InPole(Var("y")), BOT))


def theory_name(theory: str) -> str:
    theory = _THEORY_ALIASES.get(theory, theory)
    if theory not in THEORIES:
        raise ValueError(f"unknown theory {theory!r}; expected one of {', '.join(THEORIES)}")
    return theory


# ---------------------------------------------------------------- derivations


@dataclass
class Node:
    id: str
    conclusion: Formula
    rule: str
    schema: str | None = None
    premises: tuple[str, ...] = ()


@dataclass
class Derivation:
    nodes: list[Node]
    name: str = ""

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("a derivation needs at least one node")
        self.by_id = {}
        for n in self.nodes:
            if n.id in self.by_id:
                raise ValueError(f"duplicate node id {n.id!r}")
            self.by_id[n.id] = n

    @property
    def root(self) -> Node:
        return self.nodes[-1]

    @property
    def conclusion(self) -> Formula:
        return self.root.conclusion

    def to_json(self, theory: str | None = None) -> dict:
        out = {"name": self.name, "nodes": [
            {"id": n.id, "conclusion": sx.print_formula(n.conclusion), "rule": n.rule,
             **({"schema": n.schema} if n.schema else {}),
             "premises": list(n.premises)} for n in self.nodes]}
        if theory:
            out["theory"] = theory
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Derivation":
        nodes = [Node(str(n["id"]), sx.parse_any(n["conclusion"]), n["rule"],
                      n.get("schema"), tuple(str(p) for p in n.get("premises", ())))
                 for n in data["nodes"]]
        return cls(nodes, data.get("name", ""))


def load_derivation(path) -> tuple[Derivation, str | None]:
    data = json.loads(Path(path).read_text())
    return Derivation.from_json(data), data.get("theory")


class Builder:
    """Appends nodes with generated ids; methods return the new node's id."""

    def __init__(self, name: str = ""):
        self.name = name
        self.nodes: list[Node] = []
        self._index: dict[str, Node] = {}

    def add(self, conclusion, rule: str, schema: str | None = None, *premises: str) -> str:
        if isinstance(conclusion, str):
            conclusion = sx.parse_any(conclusion)
        nid = f"n{len(self.nodes)}"
        node = Node(nid, conclusion, rule, schema, tuple(premises))
        self.nodes.append(node)
        self._index[nid] = node
        return nid

    def formula(self, nid: str) -> Formula:
        return self._index[nid].conclusion

    def mp(self, imp_id: str, ante_id: str) -> str:
        f = self.formula(imp_id)
        if not isinstance(f, Imp):
            raise ValueError(f"MP needs an implication, got {f}")
        return self.add(f.cons, "MP", None, imp_id, ante_id)

    def gen(self, nid: str, var: str) -> str:
        return self.add(Forall(var, self.formula(nid)), "Gen", None, nid)

    def axiom_k(self, a: Formula, b: Formula) -> str:
        return self.add(Imp(a, Imp(b, a)), "PropAxiom", "K")

    def axiom_s(self, a: Formula, b: Formula, c: Formula) -> str:
        return self.add(Imp(Imp(a, Imp(b, c)), Imp(Imp(a, b), Imp(a, c))), "PropAxiom", "S")

    def identity(self, a: Formula) -> str:
        """A -> A from S and K."""
        s = self.axiom_s(a, Imp(a, a), a)
        k1 = self.axiom_k(a, Imp(a, a))
        k2 = self.axiom_k(a, a)
        return self.mp(self.mp(s, k1), k2)

    def build(self) -> Derivation:
        return Derivation(list(self.nodes), self.name)


# ---------------------------------------------------------------- hypothetical proofs
# Proof scripts with open hypotheses, discharged by the deduction theorem.
# A step is ("hyp", A), ("thm", node id) or ("mp", i, j) with step i proving
# D -> C and step j proving D.


@dataclass
class Script:
    builder: Builder
    steps: list = field(default_factory=list)
    formulas: list = field(default_factory=list)

    def _push(self, step, f) -> int:
        self.steps.append(step)
        self.formulas.append(f)
        return len(self.steps) - 1

    def hyp(self, a: Formula) -> int:
        return self._push(("hyp", a), a)

    def thm(self, nid: str) -> int:
        return self._push(("thm", nid), self.builder.formula(nid))

    def mp(self, i: int, j: int) -> int:
        f = self.formulas[i]
        if not (isinstance(f, Imp) and alpha_equal(f.ante, self.formulas[j])):
            raise ValueError(f"script MP mismatch: {f} applied to {self.formulas[j]}")
        return self._push(("mp", i, j), f.cons)

    def discharge(self, a: Formula, upto: int | None = None) -> "Script":
        """A new script proving A -> C for each step C, without hypothesis A."""
        b = self.builder
        out = Script(b)
        last = len(self.steps) if upto is None else upto + 1
        mapped: list[int] = []
        for k in range(last):
            step, f = self.steps[k], self.formulas[k]
            if step[0] == "hyp" and alpha_equal(step[1], a):
                mapped.append(out.thm(b.identity(a)))
            elif step[0] in ("hyp", "thm"):
                base = out.hyp(step[1]) if step[0] == "hyp" else out.thm(step[1])
                mapped.append(out.mp(out.thm(b.axiom_k(f, a)), base))
            else:
                _, i, j = step
                d = self.formulas[j]
                s = out.thm(b.axiom_s(a, d, f))
                mapped.append(out.mp(out.mp(s, mapped[i]), mapped[j]))
        return out

    def close(self, k: int | None = None) -> str:
        """Materialise step k (default: last) once no hypothesis is open."""
        k = len(self.steps) - 1 if k is None else k
        done: dict[int, str] = {}

        def go(i: int) -> str:
            if i in done:
                return done[i]
            step = self.steps[i]
            if step[0] == "hyp":
                raise ValueError(f"open hypothesis {step[1]}")
            nid = step[1] if step[0] == "thm" else self.builder.mp(go(step[1]), go(step[2]))
            done[i] = nid
            return nid
        return go(k)


# ---------------------------------------------------------------- schema recognition


class SchemaMismatch(Exception):
    pass


def _need(cond: bool, message: str):
    if not cond:
        raise SchemaMismatch(message)


def _expect(actual: Formula, expected: Formula, what: str):
    _need(alpha_equal(actual, expected), f"not an instance of {what}: expected {expected}")


def _un_succ(t: Term) -> Term | None:
    if isinstance(t, App) and t.sym == "S":
        return t.args[0]
    if isinstance(t, Num) and t.value > 0:
        return Num(t.value - 1)
    return None


def split_iff(f: Formula) -> tuple[Formula, Formula]:
    # iff(A, B) = ((A -> B) -> ((B -> A) -> bot)) -> bot
    _need(isinstance(f, Imp) and f.cons == BOT and isinstance(f.ante, Imp),
          "not a biconditional")
    ab, rest = f.ante.ante, f.ante.cons
    _need(isinstance(ab, Imp) and isinstance(rest, Imp) and rest.cons == BOT,
          "not a biconditional")
    _expect(f, iff(ab.ante, ab.cons), "a biconditional")
    return ab.ante, ab.cons


def _sentence_code(t: Term, language: str = "LR") -> tuple[int, Formula]:
    _need(isinstance(t, Num), f"expected a quoted sentence, got {t}")
    A = decode(t.value)
    _need(A is not None and not isinstance(A, (Var, Num, App)), f"{t} is not a formula code")
    _need(is_sentence(A) and sx.in_language(A, language),
          f"{t} does not code an {language}-sentence")
    return t.value, A


def _check_prop(f: Formula, schema: str):
    if schema == "K":
        _need(isinstance(f, Imp) and isinstance(f.cons, Imp), "K has shape A -> (B -> A)")
        _expect(f, Imp(f.ante, Imp(f.cons.ante, f.ante)), "K")
    elif schema == "S":
        try:
            a, b, c = f.ante.ante, f.ante.cons.ante, f.ante.cons.cons
        except AttributeError:
            raise SchemaMismatch("S has shape (A -> (B -> C)) -> ((A -> B) -> (A -> C))")
        _expect(f, Imp(Imp(a, Imp(b, c)), Imp(Imp(a, b), Imp(a, c))), "S")
    elif schema == "DN":
        _need(isinstance(f, Imp), "DN has shape ((A -> bot) -> bot) -> A")
        _expect(f, Imp(neg(neg(f.cons)), f.cons), "DN")
    else:
        raise SchemaMismatch(f"unknown propositional schema {schema!r}")


def _instance_term(A: Formula, x: str, B: Formula) -> Term | None:
    """A term t with A[x := t] = B, read off by walking A and B together."""
    found: list[Term] = []

    def terms(a: Term, b: Term):
        if isinstance(a, Var) and a.name == x:
            found.append(b)
        elif isinstance(a, App) and a.sym == "S" and _un_succ(b) is not None:
            terms(a.args[0], _un_succ(b))
        elif isinstance(a, App) and isinstance(b, App) and a.sym == b.sym:
            for p, q in zip(a.args, b.args):
                terms(p, q)

    def walk(a, b):
        if isinstance(a, Imp) and isinstance(b, Imp):
            walk(a.ante, b.ante)
            walk(a.cons, b.cons)
        elif isinstance(a, Forall) and isinstance(b, Forall):
            if a.var != x:
                walk(a.body, b.body)
        elif type(a) is type(b):
            for p, q in zip(_atom_args(a), _atom_args(b)):
                terms(p, q)

    walk(A, B)
    return found[0] if found else Var(x)


def _atom_args(a) -> tuple:
    if isinstance(a, InPole):
        return (a.term,)
    if isinstance(a, Eq):
        return (a.lhs, a.rhs)
    if isinstance(a, (Fatom, Tatom)):
        return (a.left, a.right)
    return ()


def _check_quant(f: Formula, schema: str):
    if schema == "inst":
        _need(isinstance(f, Imp) and isinstance(f.ante, Forall),
              "inst has shape forall x A -> A[x := t]")
        t = _instance_term(f.ante.body, f.ante.var, f.cons)
        _expect(f, Imp(f.ante, substitute(f.ante.body, f.ante.var, t)), "inst")
    elif schema == "dist":
        try:
            x, a, b = f.ante.var, f.ante.body.ante, f.ante.body.cons
        except AttributeError:
            raise SchemaMismatch("dist has shape forall x (A -> B) -> (A -> forall x B)")
        _need(x not in free_vars(a), f"dist: {x} is free in the antecedent")
        _expect(f, Imp(Forall(x, Imp(a, b)), Imp(a, Forall(x, b))), "dist")
    else:
        raise SchemaMismatch(f"unknown quantifier schema {schema!r}")


def _leibniz_terms(a: Term, b: Term, s: Term, t: Term) -> bool:
    if a == b or (a == s and b == t):
        return True
    if isinstance(a, App) and isinstance(b, App) and a.sym == b.sym:
        return all(_leibniz_terms(p, q, s, t) for p, q in zip(a.args, b.args))
    ua, ub = _un_succ(a), _un_succ(b)
    if ua is not None and ub is not None:
        return _leibniz_terms(ua, ub, s, t)
    return False


def _leibniz_formulas(a: Formula, b: Formula, s: Term, t: Term) -> bool:
    if isinstance(a, Imp) and isinstance(b, Imp):
        return _leibniz_formulas(a.ante, b.ante, s, t) and _leibniz_formulas(a.cons, b.cons, s, t)
    if isinstance(a, Forall) and isinstance(b, Forall):
        if a.var != b.var or a.var in term_vars(s) | term_vars(t):
            return False
        return _leibniz_formulas(a.body, b.body, s, t)
    if type(a) is not type(b) or isinstance(a, (Imp, Forall)):
        return False
    return all(_leibniz_terms(p, q, s, t) for p, q in zip(_atom_args(a), _atom_args(b)))


def _check_eq(f: Formula, schema: str):
    if schema == "refl":
        _need(isinstance(f, Eq) and f.lhs == f.rhs, "refl has shape t = t")
    elif schema == "leibniz":
        try:
            e, a1, a2 = f.ante, f.cons.ante, f.cons.cons
        except AttributeError:
            raise SchemaMismatch("leibniz has shape s = t -> (A(s) -> A(t))")
        _need(isinstance(e, Eq), "leibniz needs an equation first")
        _need(isinstance(a1, sx.ATOMS) and isinstance(a2, sx.ATOMS), "leibniz is for atoms")
        _need(_leibniz_formulas(a1, a2, e.lhs, e.rhs),
              f"{a2} does not arise from {a1} by replacing {e.lhs} with {e.rhs}")
    elif schema == "compute":
        from .semantics import Undetermined, eval_term
        _need(isinstance(f, Eq) and sx.is_closed_term(f.lhs) and sx.is_closed_term(f.rhs),
              "compute needs a closed equation")
        try:
            _need(eval_term(f.lhs) == eval_term(f.rhs), f"{f} is false")
        except Undetermined as exc:
            raise SchemaMismatch(f"cannot evaluate {f}: {exc.reason}")
    else:
        raise SchemaMismatch(f"unknown equality schema {schema!r}")


def _check_arith(f: Formula, schema: str):
    if schema == "succ_ne_zero":
        _need(isinstance(f, Imp) and f.cons == BOT and isinstance(f.ante, Eq)
              and f.ante.rhs == ZERO and _un_succ(f.ante.lhs) is not None,
              "succ_ne_zero has shape not S(t) = 0")
    elif schema == "succ_inj":
        ok = (isinstance(f, Imp) and isinstance(f.ante, Eq) and isinstance(f.cons, Eq))
        _need(ok, "succ_inj has shape S(s) = S(t) -> s = t")
        s, t = _un_succ(f.ante.lhs), _un_succ(f.ante.rhs)
        _need(s is not None and t is not None and f.cons == Eq(s, t),
              "succ_inj has shape S(s) = S(t) -> s = t")
    else:
        _need(isinstance(f, Eq) and isinstance(f.lhs, App) and len(f.lhs.args) == 2,
              f"{schema} is an equation with a binary left side")
        s, t = f.lhs.args
        expected = {
            "add_zero": ("+", ZERO, s),
            "mul_zero": ("*", ZERO, ZERO),
        }
        if schema in expected:
            sym, second, right = expected[schema]
            _need(f.lhs.sym == sym and t == second and f.rhs == right, f"not {schema}")
        elif schema in ("add_succ", "mul_succ"):
            u = _un_succ(t)
            sym = "+" if schema == "add_succ" else "*"
            _need(f.lhs.sym == sym and u is not None, f"not {schema}")
            want = succ(fn("+", s, u)) if sym == "+" else fn("+", fn("*", s, u), s)
            _need(f.rhs == want, f"not {schema}: expected right side {want}")
        else:
            raise SchemaMismatch(f"unknown arithmetic schema {schema!r}")


def _check_induction(f: Formula):
    try:
        last = f.cons.cons
    except AttributeError:
        raise SchemaMismatch("induction has shape A(0) -> (forall x (A -> A(S x)) -> forall x A)")
    _need(isinstance(last, Forall), "induction ends in a universal formula")
    x, body = last.var, last.body
    step = Forall(x, Imp(body, substitute(body, x, succ(Var(x)))))
    _expect(f, Imp(substitute(body, x, ZERO), Imp(step, last)), "induction")


# ---- GCR axiom instances


def ax_pole_instance(a: Term, b: Term, c: Term) -> Formula:
    """T1(a, b, c) -> (U(c) in the pole -> <a, b> in the pole)."""
    return Imp(Eq(fn("kleeneT", a, b, c), ZERO),
               Imp(InPole(fn("p1", c)), InPole(fn("pair", a, b))))


def ax_t_instance(a: Term, code: int, var: str = "b") -> Formula:
    """a T c <-> forall b (b F c -> <a, b> in the pole)."""
    var = sx.fresh_name(var, term_vars(a))
    return iff(Tatom(a, Num(code)),
               Forall(var, Imp(Fatom(Var(var), Num(code)), InPole(fn("pair", a, Var(var))))))


def reg_instance(s: Term, t: Term, a: Term, template: Formula, var: str) -> Formula:
    """s = t -> (a F ⌜A(s)⌝ -> a F ⌜A(t)⌝) for closed s, t."""
    return Imp(Eq(s, t), Imp(Fatom(a, Num(encode(substitute(template, var, s)))),
                             Fatom(a, Num(encode(substitute(template, var, t))))))


def code_term(P: Formula) -> Term:
    """⌜P(ẋ)⌝ as a term: the numeral code when P is closed, else sub(⌜P⌝, x)."""
    fv = sorted(free_vars(P))
    if not fv:
        return Num(encode(P))
    if len(fv) > 1:
        raise ValueError(f"dotted codes take one free variable, {P} has {fv}")
    return fn("sub", Num(encode(P)), Var(fv[0]))


def p1_instance(P: Formula, a: Term) -> Formula:
    return Imp(neg(P), Fatom(a, code_term(P)))


def p2_instance(P: Formula, a: Term) -> Formula:
    return Imp(P, iff(Fatom(a, code_term(P)), InPole(a)))


def imp_instance(a: Term, ante: Formula, cons: Formula) -> Formula:
    """a F ⌜A -> B⌝ <-> ((a)0 T ⌜A⌝ and (a)1 F ⌜B⌝)."""
    return iff(Fatom(a, Num(encode(Imp(ante, cons)))),
               conj(Tatom(fn("p0", a), Num(encode(ante))), Fatom(fn("p1", a), Num(encode(cons)))))


def forall_instance(a: Term, A: Formula) -> Formula:
    """a F ⌜forall x A⌝ <-> (a)1 F ⌜A((ȧ)0)⌝."""
    if not isinstance(A, Forall):
        raise ValueError("forall_instance needs a universal sentence")
    return iff(Fatom(a, Num(encode(A))),
               Fatom(fn("p1", a), fn("sub", Num(encode(A.body)), fn("p0", a))))


def _atomic_P(P: Formula) -> None:
    _need(isinstance(P, (Eq, InPole)), f"{P} is not an atom of L or a pole atom")
    _need(len(free_vars(P)) <= 1, f"{P} has more than one free variable")


def _check_gcr(f: Formula, name: str, theory: str):
    if theory == "CR":
        _need(name in _CR_AXIOMS, f"{name} is not an axiom of CR")
    lang = "L" if theory == "CR" else "LR"
    if name == "AxPole":
        try:
            a, b = f.cons.cons.term.args
            c = f.ante.lhs.args[2]
        except (AttributeError, ValueError, IndexError):
            raise SchemaMismatch("AxPole has shape T1(a,b,c) = 0 -> (Pole(p1(c)) -> Pole(pair(a,b)))")
        _expect(f, ax_pole_instance(a, b, c), "AxPole")
    elif name == "AxT":
        left, right = split_iff(f)
        _need(isinstance(left, Tatom) and isinstance(right, Forall), "AxT has shape a T c <-> forall b ...")
        code, _ = _sentence_code(left.right, lang)
        _expect(f, ax_t_instance(left.left, code, right.var), "AxT")
    elif name == "Reg":
        try:
            e, fa, fb = f.ante, f.cons.ante, f.cons.cons
        except AttributeError:
            raise SchemaMismatch("Reg has shape s = t -> (a F ⌜A(s)⌝ -> a F ⌜A(t)⌝)")
        _need(isinstance(e, Eq) and isinstance(fa, Fatom) and isinstance(fb, Fatom)
              and fa.left == fb.left, "Reg has shape s = t -> (a F ⌜A(s)⌝ -> a F ⌜A(t)⌝)")
        _need(sx.is_closed_term(e.lhs) and sx.is_closed_term(e.rhs), "Reg needs closed s, t")
        _, A1 = _sentence_code(fa.right)
        _, A2 = _sentence_code(fb.right)
        _need(_leibniz_formulas(A1, A2, e.lhs, e.rhs),
              "Reg: the quoted sentences differ by more than s versus t")
    elif name == "P1":
        _need(isinstance(f, Imp) and isinstance(f.ante, Imp) and f.ante.cons == BOT
              and isinstance(f.cons, Fatom), "P1 has shape not P -> a F ⌜P⌝")
        P = f.ante.ante
        _atomic_P(P)
        _expect(f, p1_instance(P, f.cons.left), "P1")
    elif name == "P2":
        _need(isinstance(f, Imp), "P2 has shape P -> (a F ⌜P⌝ <-> Pole(a))")
        P = f.ante
        _atomic_P(P)
        left, _ = split_iff(f.cons)
        _need(isinstance(left, Fatom), "P2 has shape P -> (a F ⌜P⌝ <-> Pole(a))")
        _expect(f, p2_instance(P, left.left), "P2")
    elif name == "Imp":
        left, _ = split_iff(f)
        _need(isinstance(left, Fatom), "Imp has shape a F ⌜A -> B⌝ <-> ...")
        _, A = _sentence_code(left.right)
        _need(isinstance(A, Imp), "Imp quotes an implication")
        _expect(f, imp_instance(left.left, A.ante, A.cons), "Imp")
    elif name == "Forall":
        left, _ = split_iff(f)
        _need(isinstance(left, Fatom), "Forall has shape a F ⌜forall x A⌝ <-> ...")
        _, A = _sentence_code(left.right)
        _need(isinstance(A, Forall), "Forall quotes a universal sentence")
        _expect(f, forall_instance(left.left, A), "Forall")
    else:
        raise SchemaMismatch(f"unknown GCR axiom {name!r}")


# ---------------------------------------------------------------- checker


@dataclass
class CheckResult:
    ok: bool
    theory: str
    node: str | None = None
    path: tuple[str, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"valid in {self.theory}"
        return f"invalid in {self.theory} at {' > '.join(self.path)}: {self.message}"


def _path_to(d: Derivation, nid: str) -> tuple[str, ...]:
    """Root-to-node path through premise links (the node alone if unreachable)."""
    parents: dict[str, str] = {}
    todo = [d.root.id]
    while todo:
        cur = todo.pop()
        for p in d.by_id[cur].premises if cur in d.by_id else ():
            if p not in parents and p != d.root.id:
                parents[p] = cur
                todo.append(p)
    path = [nid]
    while path[-1] in parents:
        path.append(parents[path[-1]])
    return tuple(reversed(path))


def _check_node(d: Derivation, n: Node, theory: str, seen: set):
    _need(n.rule in THEORY_RULES[theory], f"rule {n.rule} is not available in {theory}")
    f = n.conclusion
    _need(is_LR(f), "conclusion is not an L_R-formula")
    for p in n.premises:
        _need(p in seen, f"premise {p!r} is not an earlier node")
    prem = [d.by_id[p].conclusion for p in n.premises]
    arity = {"MP": 2, "Gen": 1, "NECR": 1, "CONECR": 1, "Reflection": 1}.get(n.rule, 0)
    _need(len(prem) == arity, f"{n.rule} takes {arity} premises, got {len(prem)}")
    if n.rule in SCHEMAS:
        _need(n.schema in SCHEMAS[n.rule], f"{n.rule} needs a schema in {SCHEMAS[n.rule]}")
    if n.rule == "PropAxiom":
        _check_prop(f, n.schema)
    elif n.rule == "QuantAxiom":
        _check_quant(f, n.schema)
    elif n.rule == "EqAxiom":
        _check_eq(f, n.schema)
    elif n.rule == "ArithAxiom":
        _check_arith(f, n.schema)
    elif n.rule == "PAInduction":
        _check_induction(f)
    elif n.rule == "GCRAxiom":
        _check_gcr(f, n.schema, theory)
    elif n.rule == "MP":
        imp, ante = prem
        _need(isinstance(imp, Imp), "MP: first premise is not an implication")
        _need(alpha_equal(imp.ante, ante), "MP: second premise is not the antecedent")
        _need(alpha_equal(imp.cons, f), "MP: conclusion is not the consequent")
    elif n.rule == "Gen":
        _need(isinstance(f, Forall), "Gen concludes a universal formula")
        _expect(f, Forall(f.var, prem[0]), "Gen")
    elif n.rule in ("NECR", "CONECR"):
        atom, other = (f, prem[0]) if n.rule == "NECR" else (prem[0], f)
        _need(isinstance(atom, Tatom), f"{n.rule}: expected s T ⌜A⌝")
        _need(sx.is_closed_term(atom.left), f"{n.rule} side condition: s is a closed term")
        _, A = _sentence_code(atom.right)
        _need(alpha_equal(other, explicit_realiser(atom.left, A)),
              f"{n.rule}: the other side is not s ∈ |A|")
    elif n.rule == "Reflection":
        atom = prem[0]
        _need(isinstance(atom, Tatom) and sx.is_closed_term(atom.left),
              "Reflection: premise is s T ⌜A⌝ for closed s")
        _, A = _sentence_code(atom.right)
        _need(is_L(A), "Reflection side condition: A is an L-sentence")
        _need(alpha_equal(A, f), "Reflection: conclusion is not the quoted sentence")
    elif n.rule == "EmptyPole":
        _expect(f, EMPTY_POLE, "the empty-pole axiom")
    else:
        raise SchemaMismatch(f"unknown rule {n.rule!r}")


def check(d: Derivation, theory: str) -> CheckResult:
    """Valid iff every node is licensed in the theory; otherwise the first failure."""
    theory = theory_name(theory)
    seen: set[str] = set()
    for n in d.nodes:
        try:
            _check_node(d, n, theory, seen)
        except SchemaMismatch as exc:
            return CheckResult(False, theory, n.id, _path_to(d, n.id), str(exc))
        seen.add(n.id)
    return CheckResult(True, theory)


# ---------------------------------------------------------------- realisers

# Lambda sources.  Free identifiers K_i, K_s, K_u, K_pi are the combinators.
_PROP_REALISERS = {
    # refuter <a, <b, r>>: cut a against r
    "K": r"λz. ⟨p0(z), p1(p1(z))⟩",
    # refuter <f, <g, <a, r>>>: f meets <a, <i.<g, a>, r>>
    "S": r"λz. (λf g a k. ⟨f, ⟨a, ⟨K_i · ⟨g, a⟩, k⟩⟩⟩) p0(z) p0(p1(z)) p0(p1(p1(z))) p1(p1(p1(z)))",
    # refuter <d, r>: d meets <k_pi.r, 0>, a refuter of not not A
    "DN": r"λz. ⟨p0(z), ⟨K_pi · p1(z), 0⟩⟩",
    # refuter <f, <a, <n, r>>>: f meets <n, <a, r>>
    "dist": r"λz. ⟨p0(z), ⟨p0(p1(p1(z))), ⟨p0(p1(z)), p1(p1(p1(z)))⟩⟩⟩",
    # refuter <b, <s, <n, r>>>: the n-fold step realiser meets r
    "induction": r"""λz. (λb s n k. ⟨rec(b, λq. K_i · ⟨K_s · ⟨s, p0(q)⟩, p1(q)⟩, n), k⟩)
                     p0(z) p0(p1(z)) p0(p1(p1(z))) p1(p1(p1(z)))""",
}
# true atoms and implications between atoms: the refuter already is a cut
_CUT = r"λz. ⟨p0(z), p1(z)⟩"


def _inst_source(term_src: str) -> str:
    return rf"λz. ⟨p0(z), ⟨{term_src}, p1(z)⟩⟩"


def _combinator_params() -> dict[str, int]:
    c = combinators()
    return {"K_i": c["i"], "K_s": c["s"], "K_u": c["u"], "K_pi": c["k_pi"]}


def _compile(src: str, extra: dict | None = None) -> int:
    params = _combinator_params()
    params.update(extra or {})
    return compile_lambda(src, params)


def conj_intro(p: int, q: int) -> int:
    """From realisers of P and Q, one of P and Q."""
    return _compile(r"λz. ⟨p0(z), ⟨P, ⟨Q, p1(z)⟩⟩⟩", {"P": p, "Q": q})


def imp_conj(rx: int, ry: int) -> int:
    """From realisers of A -> X and A -> Y, one of A -> (X and Y)."""
    return _compile(r"λz. ⟨p0(p1(z)), ⟨K_i · ⟨X, p0(z)⟩, ⟨K_i · ⟨Y, p0(z)⟩, p1(p1(z))⟩⟩⟩",
                    {"X": rx, "Y": ry})


def uncurry(r: int) -> int:
    """From a realiser of X -> (Y -> Z), one of (X and Y) -> Z."""
    return _compile(r"λz. ⟨p0(z), ⟨λw. ⟨K_i · ⟨K_i · ⟨R, p0(w)⟩, p0(p1(w))⟩, p1(z)⟩, 0⟩⟩",
                    {"R": r})


# ---- propositional tautologies behind the implication clause

_X, _Y = Eq(Var("x"), Var("y")), Eq(Var("y"), Var("z"))


def conj_elim_left(b: Builder, x: Formula, y: Formula) -> str:
    """(X and Y) -> X, i.e. not (X -> not Y) -> X."""
    h = neg(Imp(x, neg(y)))
    s = Script(b)
    ih, inx, ix = s.hyp(h), s.hyp(neg(x)), s.hyp(x)
    bot = s.mp(inx, ix)
    noty = s.mp(s.thm(b.axiom_k(BOT, y)), bot)
    s1 = s.discharge(x, noty)                      # X -> not Y, under h and not X
    xny = len(s1.steps) - 1
    s1.mp(s1.hyp(h), xny)                          # bot
    s2 = s1.discharge(neg(x))                      # not not X, under h
    nnx = len(s2.steps) - 1
    s2.mp(s2.thm(b.add(Imp(neg(neg(x)), x), "PropAxiom", "DN")), nnx)
    return s2.discharge(h).close()


def conj_elim_right(b: Builder, x: Formula, y: Formula) -> str:
    """(X and Y) -> Y."""
    h = neg(Imp(x, neg(y)))
    s = Script(b)
    ih, iny = s.hyp(h), s.hyp(neg(y))
    xny = s.mp(s.thm(b.axiom_k(neg(y), x)), iny)   # X -> not Y
    s.mp(ih, xny)
    s1 = s.discharge(neg(y))
    nny = len(s1.steps) - 1
    s1.mp(s1.thm(b.add(Imp(neg(neg(y)), y), "PropAxiom", "DN")), nny)
    return s1.discharge(h).close()


def conj_pair(b: Builder, x: Formula, y: Formula) -> str:
    """X -> (Y -> (X and Y))."""
    s = Script(b)
    ix, iy, ih = s.hyp(x), s.hyp(y), s.hyp(Imp(x, neg(y)))
    s.mp(s.mp(ih, ix), iy)
    s1 = s.discharge(Imp(x, neg(y)))
    return s1.discharge(y).discharge(x).close()


@lru_cache(maxsize=1)
def tautology_realisers() -> dict[str, "RealiserCertificate"]:
    """Realisers w for the conjunction tautologies, extracted from derivations."""
    out = {}
    for name, build in (("conj_elim_left", conj_elim_left),
                        ("conj_elim_right", conj_elim_right),
                        ("conj_pair", conj_pair)):
        b = Builder(name)
        build(b, _X, _Y)
        out[name] = extract_PA(b.build())
    return out


@lru_cache(maxsize=1)
def axiom_realisers() -> dict:
    """Compiled realisers for the GCR axioms; rAxT_left takes the fixed b."""
    w = {k: v.code for k, v in tautology_realisers().items()}
    r = {
        "rAxPole": _compile(r"λu. ⟨p0(u), ⟨p0(p1(u)), p1(p1(u))⟩⟩"),
        "rAxT_right": _compile(
            r"λu. ⟨K_i · ⟨K_s · ⟨p0(u), p0(p1(u))⟩, p0(p1(p1(u)))⟩, p1(p1(p1(u)))⟩"),
        "rReg": _compile(r"λu. ⟨p0(u), ⟨p0(p1(u)), p1(p1(u))⟩⟩"),
        "rP1": _compile(r"λu. ⟨p0(u), p1(u)⟩"),
        "rImp1": _compile(r"λu. ⟨K_i · ⟨W, p0(u)⟩, p1(u)⟩", {"W": w["conj_elim_left"]}),
        "rImp2": _compile(r"λu. ⟨K_i · ⟨W, p0(u)⟩, p1(u)⟩", {"W": w["conj_elim_right"]}),
        "rImp3": _compile(r"λu. ⟨K_i · ⟨K_i · ⟨W, p0(u)⟩, p0(p1(u))⟩, p1(p1(u))⟩",
                          {"W": w["conj_pair"]}),
        "rPoleEmpty": _compile(r"λx. ⟨p0(p1(x)), p0(x)⟩"),
    }
    # P -> (a F ⌜P⌝ -> Pole(a)): cut the F-realiser against <id, r>, guarded by P
    p2_to_pole = _compile(r"λz. ⟨p0(z), ⟨p0(p1(z)), ⟨λv. v, p1(p1(z))⟩⟩⟩")
    # P -> (Pole(a) -> a F ⌜P⌝): cut the pole realiser against the refuter's tail
    p2_from_pole = _compile(r"λz. ⟨p0(z), ⟨p0(p1(z)), p1(p1(p1(z)))⟩⟩")
    r["rP2"] = imp_conj(p2_to_pole, p2_from_pole)
    cut = _compile(_CUT)
    r["rForall"] = conj_intro(cut, cut)
    r["rAxT_left"] = rax_t_left
    return r


@lru_cache(maxsize=256)
def rax_t_left(b: int) -> int:
    return _compile(r"λu. ⟨K_i · ⟨K_s · ⟨p0(u), b⟩, p0(p1(u))⟩, p1(p1(u))⟩", {"b": b})


@lru_cache(maxsize=1)
def gcr_axiom_realisers() -> dict[str, int]:
    """One realiser per GCR axiom name, for the axiom as stated."""
    r = axiom_realisers()
    # a T c -> forall b (...): refuter <u0, <b, rest>> feeds rAxT_left(b)
    ax_t_left_all = _compile(r"λz. ⟨K_i · ⟨K_s · ⟨p0(z), p0(p1(z))⟩, p0(p1(p1(z)))⟩, p1(p1(p1(z)))⟩")
    return {
        "AxPole": r["rAxPole"],
        "AxT": conj_intro(ax_t_left_all, r["rAxT_right"]),
        "Reg": r["rReg"],
        "P1": r["rP1"],
        "P2": r["rP2"],
        "Imp": conj_intro(imp_conj(r["rImp1"], r["rImp2"]), uncurry(r["rImp3"])),
        "Forall": r["rForall"],
    }


# ---------------------------------------------------------------- extraction


class ExtractionError(ValueError):
    pass


@dataclass
class RealiserCertificate:
    conclusion: Formula
    source: str  # lambda source with combinator and constant parameters
    params: dict[str, int]
    code: int
    trace: dict[str, str]

    def to_json(self) -> dict:
        return {"conclusion": sx.print_formula(self.conclusion),
                "realiser-code": str(self.code), "trace": self.trace}


_MACHINE_SYMBOLS = {"S", "+", "*", "pair", "p0", "p1"}


class _Extractor:
    def __init__(self, d: Derivation, theory: str):
        self.d = d
        self.theory = theory
        self.names: dict[str, str] = {}
        self.params = _combinator_params()
        self.src: dict[str, str] = {}
        self.trace: dict[str, str] = {}

    def var(self, name: str) -> str:
        if name not in self.names:
            self.names[name] = f"v{len(self.names)}"
        return self.names[name]

    def const(self, label: str, code: int) -> str:
        key = f"R_{label}"
        self.params[key] = code
        return key

    def term(self, t: Term) -> str:
        if isinstance(t, Var):
            return self.var(t.name)
        if isinstance(t, Num):
            return str(t.value)
        if sx.is_closed_term(t):
            from .semantics import Undetermined, eval_term
            try:
                return str(eval_term(t))
            except Undetermined as exc:
                raise ExtractionError(f"cannot evaluate {t}: {exc.reason}")
        if t.sym not in _MACHINE_SYMBOLS:
            raise ExtractionError(f"open term with {t.sym!r} has no machine counterpart")
        args = [self.term(a) for a in t.args]
        if t.sym in ("+", "*"):
            return f"({args[0]} {t.sym} {args[1]})"
        if t.sym == "pair":
            return f"⟨{args[0]}, {args[1]}⟩"
        return f"{t.sym}({args[0]})"

    def node(self, n: Node) -> tuple[str, str]:
        f = n.conclusion
        if n.rule == "PropAxiom":
            return _PROP_REALISERS[n.schema], f"propositional axiom {n.schema}"
        if n.rule == "QuantAxiom":
            if n.schema == "dist":
                return _PROP_REALISERS["dist"], "distribution: swap the instance in"
            t = _instance_term(f.ante.body, f.ante.var, f.cons)
            return _inst_source(self.term(t)), f"instantiation at {t} (combinator s shape)"
        if n.rule in ("EqAxiom", "ArithAxiom"):
            return _CUT, f"{n.schema}: the refuter is already a cut"
        if n.rule == "PAInduction":
            return _PROP_REALISERS["induction"], "induction: rec iterating i and s"
        if n.rule == "GCRAxiom":
            return self.const(n.schema, gcr_axiom_realisers()[n.schema]), f"GCR axiom {n.schema}"
        # i and u are beta-reduced into the source: quoting a runtime closure
        # splices its environment in as literals, which nests once per rule
        if n.rule == "MP":
            a, b = (self.src[p] for p in n.premises)
            return (f"λc. ⟨{a}, ⟨{b}, c⟩⟩",
                    f"modus ponens via i from {n.premises[0]}, {n.premises[1]}")
        if n.rule == "Gen":
            return (f"λc. ⟨(λ{self.var(f.var)}. {self.src[n.premises[0]]}) · p0(c), p1(c)⟩",
                    f"generalisation over {f.var} via u")
        if n.rule in ("NECR", "CONECR"):
            return self.src[n.premises[0]], f"{n.rule}: certificate of {n.premises[0]} transported"
        if n.rule == "EmptyPole":
            return self.const("PoleEmpty", axiom_realisers()["rPoleEmpty"]), "empty-pole axiom: rPoleEmpty"
        raise ExtractionError(f"no extraction for rule {n.rule}")

    def run(self) -> RealiserCertificate:
        for n in self.d.nodes:
            self.src[n.id], self.trace[n.id] = self.node(n)
        src = self.src[self.d.root.id]
        # object variables still free at the end are instantiated at 0
        for ident in _free_identifiers(src):
            if ident not in self.params:
                self.params[ident] = 0
        used = set(_free_identifiers(src))
        params = {k: v for k, v in self.params.items() if k in used}
        # a bare constant is the realiser itself, not a program returning it
        code = params[src] if src in params else compile_lambda(src, params)
        return RealiserCertificate(self.d.conclusion, src, params, code, self.trace)


def extract_PA(d: Derivation) -> RealiserCertificate:
    result = check(d, "PA")
    if not result:
        raise ExtractionError(f"unchecked derivation: {result}")
    return _Extractor(d, "PA").run()


def extract_FSR(d: Derivation, theory: str = "FSR") -> RealiserCertificate:
    theory = theory_name(theory)
    if theory not in ("GCR", "FSR", "FSR∅"):
        raise ExtractionError(f"extraction covers GCR, FSR and FSR∅, not {theory}")
    result = check(d, theory)
    if not result:
        raise ExtractionError(f"unchecked derivation: {result}")
    return _Extractor(d, theory).run()


def extract(d: Derivation, theory: str) -> RealiserCertificate:
    theory = theory_name(theory)
    return extract_PA(d) if theory == "PA" else extract_FSR(d, theory)


# ---------------------------------------------------------------- contracts


def _universal(A: Formula) -> Formula:
    return sx.forall_many(sorted(free_vars(A)), A)


def realiser_contract(r: int, instance: Formula) -> Formula:
    """The sentence: for all parameter values, r realises the instance."""
    return _universal(explicit_realiser(Num(r), instance))


def axiom_contracts(A: Formula | None = None, B: Formula | None = None,
                    P: Formula | None = None) -> dict[str, Formula]:
    """One contract sentence per axiom realiser, over sample sentences.

    A and B are L_R-sentences (B is also quantified over in the Forall case
    when it is universal); P is an atom with at most one free variable.
    """
    A = A if A is not None else Eq(ZERO, ZERO)
    B = B if B is not None else Forall("x", Eq(Var("x"), Var("x")))
    P = P if P is not None else Eq(Var("x"), ZERO)
    r = axiom_realisers()
    a, b, c = Var("a"), Var("b"), Var("c")
    cA = encode(A)
    T_a, forall_b = split_iff(ax_t_instance(a, cA))
    two = Num(2)
    out = {
        "rAxPole": realiser_contract(r["rAxPole"], ax_pole_instance(a, b, c)),
        "rAxT_left": realiser_contract(
            r["rAxT_left"](0), Imp(Tatom(a, Num(cA)), Imp(Fatom(ZERO, Num(cA)),
                                                         InPole(fn("pair", a, ZERO))))),
        "rAxT_right": realiser_contract(r["rAxT_right"], Imp(forall_b, T_a)),
        "rReg": realiser_contract(r["rReg"], reg_instance(fn("+", Num(1), Num(1)), two, a,
                                                           Eq(Var("x"), two), "x")),
        "rP1": realiser_contract(r["rP1"], p1_instance(P, a)),
        "rP2": realiser_contract(r["rP2"], p2_instance(P, a)),
    }
    fA, conj_AB = split_iff(imp_instance(a, A, B))
    out["rImp1"] = realiser_contract(
        r["rImp1"], Imp(fA, Tatom(fn("p0", a), Num(cA))))
    out["rImp2"] = realiser_contract(
        r["rImp2"], Imp(fA, Fatom(fn("p1", a), Num(encode(B)))))
    out["rImp3"] = realiser_contract(
        r["rImp3"], Imp(Tatom(fn("p0", a), Num(cA)), Imp(Fatom(fn("p1", a), Num(encode(B))), fA)))
    if isinstance(B, Forall):
        out["rForall"] = realiser_contract(r["rForall"], forall_instance(a, B))
    out["rPoleEmpty"] = realiser_contract(r["rPoleEmpty"], EMPTY_POLE)
    return out
