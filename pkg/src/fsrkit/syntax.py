"""Terms and formulas of L, L_T and L_R: parsing, printing, substitution and
Gödel coding.

Numerals are a single node ``Num(n)``; ``S`` applied to a numeral collapses
into the next numeral, so ``S(S(0))`` and ``Num(2)`` are the same term.  The
derived connectives (bot, not, and, or, exists) are expanded when built and
never appear in the tree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable names are nonempty")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple

    def __post_init__(self):
        if self.sym not in SYMBOLS:
            raise ValueError(f"unknown function symbol {self.sym!r}")
        if len(self.args) != SYMBOLS[self.sym]:
            raise ValueError(f"{self.sym} takes {SYMBOLS[self.sym]} arguments")
        if self.sym == "S" and isinstance(self.args[0], Num):
            raise ValueError("use succ() so numerals stay canonical")


Term = Union[Var, Num, App]
ZERO = Num(0)

# Arities, in coding order.  Names double as surface syntax.
SYMBOLS: dict[str, int] = {
    "S": 1, "+": 2, "*": 2, "pair": 2, "p0": 1, "p1": 1,
    "sub": 2, "dotEq": 2, "dotImp": 2, "dotForall": 2,
    "inrlz": 2, "inrft": 2, "fIter": 2, "fPrimeIter": 3,
    "num": 1, "kleeneT": 3, "tauFS": 1, "tauEmpty": 1,
}
SYMBOL_INDEX = {s: i for i, s in enumerate(SYMBOLS)}
SYMBOL_BY_INDEX = list(SYMBOLS)

# argument positions that hold codes; the printer shows formula codes there
CODE_POSITIONS = {
    "sub": (0,), "dotEq": (0, 1), "dotImp": (0, 1), "dotForall": (0, 1),
    "inrlz": (1,), "inrft": (1,), "fIter": (1,), "fPrimeIter": (2,),
    "tauFS": (0,), "tauEmpty": (0,),
}


def succ(t: Term) -> Term:
    if isinstance(t, Num):
        return Num(t.value + 1)
    return App("S", (t,))


def numeral(n: int) -> Num:
    if n < 0:
        raise ValueError("numerals are natural numbers")
    return Num(n)


def fn(sym: str, *args: Term) -> Term:
    if sym == "S":
        return succ(args[0])
    return App(sym, tuple(args))


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class InPole:
    term: Term


@dataclass(frozen=True)
class Fatom:
    """t F u : t refutes the sentence coded by u."""
    left: Term
    right: Term


@dataclass(frozen=True)
class Tatom:
    """t T u : t realises the sentence coded by u."""
    left: Term
    right: Term


@dataclass(frozen=True)
class Tr:
    """Unary truth predicate of L_T."""
    term: Term


@dataclass(frozen=True)
class Imp:
    ante: "Formula"
    cons: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Eq, InPole, Fatom, Tatom, Tr, Imp, Forall]


def _cache_hash(cls):
    # formulas are deep and used as memo keys: hash each node once, at
    # construction, when its children's hashes are already cached
    init = cls.__init__
    field_hash = cls.__hash__

    def __init__(self, *args, **kwargs):
        init(self, *args, **kwargs)
        object.__setattr__(self, "_hash", field_hash(self))

    def __hash__(self):
        h = self.__dict__.get("_hash")
        return field_hash(self) if h is None else h

    cls.__init__ = __init__
    cls.__hash__ = __hash__


for _cls in (Var, Num, App, Eq, InPole, Fatom, Tatom, Tr, Imp, Forall):
    _cache_hash(_cls)
ATOMS = (Eq, InPole, Fatom, Tatom, Tr)

BOT = Eq(ZERO, Num(1))


def neg(a: Formula) -> Formula:
    return Imp(a, BOT)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(Imp(a, neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Imp(neg(a), b)


def exists(v: str, a: Formula) -> Formula:
    return neg(Forall(v, neg(a)))


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Imp(a, b), Imp(b, a))


def forall_many(vs: Iterable[str], a: Formula) -> Formula:
    for v in reversed(list(vs)):
        a = Forall(v, a)
    return a


def kleene_app(x: Term, y: Term, z: Term, w: str = "w") -> Formula:
    """x . y ~ z, i.e. exists w (T1(x, y, w) and U(w) = z)."""
    used = term_vars(x) | term_vars(y) | term_vars(z)
    w = fresh_name(w, used)
    return exists(w, conj(Eq(App("kleeneT", (x, y, Var(w))), ZERO),
                          Eq(App("p1", (Var(w),)), z)))


# ---------------------------------------------------------------- variables


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Num):
        return set()
    out: set[str] = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def free_vars(x) -> set[str]:
    if isinstance(x, (Var, Num, App)):
        return term_vars(x)
    if isinstance(x, Eq):
        return term_vars(x.lhs) | term_vars(x.rhs)
    if isinstance(x, (InPole, Tr)):
        return term_vars(x.term)
    if isinstance(x, (Fatom, Tatom)):
        return term_vars(x.left) | term_vars(x.right)
    if isinstance(x, Imp):
        return free_vars(x.ante) | free_vars(x.cons)
    if isinstance(x, Forall):
        return free_vars(x.body) - {x.var}
    raise TypeError(f"not a term or formula: {x!r}")


def all_vars(x) -> set[str]:
    if isinstance(x, Forall):
        return all_vars(x.body) | {x.var}
    if isinstance(x, Imp):
        return all_vars(x.ante) | all_vars(x.cons)
    return free_vars(x)


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def is_closed_term(t: Term) -> bool:
    return not term_vars(t)


PRIME = "′"


def _base_name(name: str) -> str:
    return name.rstrip(PRIME)


def fresh_name(name: str, avoid: set[str]) -> str:
    """name itself if unused, else its base with the fewest unused primes."""
    if name not in avoid:
        return name
    base = _base_name(name)
    k = 1
    while base + PRIME * k in avoid:
        k += 1
    return base + PRIME * k


# ---------------------------------------------------------------- languages


def _has(f: Formula, kinds) -> bool:
    if isinstance(f, kinds):
        return True
    if isinstance(f, Imp):
        return _has(f.ante, kinds) or _has(f.cons, kinds)
    if isinstance(f, Forall):
        return _has(f.body, kinds)
    return False


def is_L(f: Formula) -> bool:
    return not _has(f, (InPole, Fatom, Tatom, Tr))


def is_LT(f: Formula) -> bool:
    return not _has(f, (InPole, Fatom, Tatom))


def is_LR(f: Formula) -> bool:
    return not _has(f, (Tr,))


LANGUAGES = {"L": is_L, "LT": is_LT, "LR": is_LR}


def in_language(f: Formula, language: str) -> bool:
    return LANGUAGES[language](f)


# ---------------------------------------------------------------- substitution


def subst_term(t: Term, v: str, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.name == v else t
    if isinstance(t, Num):
        return t
    return fn(t.sym, *(subst_term(a, v, s) for a in t.args))


def substitute(f: Formula, v: str, t: Term) -> Formula:
    """Capture-avoiding substitution of t for the free occurrences of v."""
    return _subst(f, v, t, term_vars(t))


def _subst(f, v, t, tvars):
    if isinstance(f, Eq):
        return Eq(subst_term(f.lhs, v, t), subst_term(f.rhs, v, t))
    if isinstance(f, InPole):
        return InPole(subst_term(f.term, v, t))
    if isinstance(f, Tr):
        return Tr(subst_term(f.term, v, t))
    if isinstance(f, Fatom):
        return Fatom(subst_term(f.left, v, t), subst_term(f.right, v, t))
    if isinstance(f, Tatom):
        return Tatom(subst_term(f.left, v, t), subst_term(f.right, v, t))
    if isinstance(f, Imp):
        return Imp(_subst(f.ante, v, t, tvars), _subst(f.cons, v, t, tvars))
    if isinstance(f, Forall):
        if f.var == v or v not in free_vars(f.body):
            return f
        if f.var in tvars:
            new = fresh_name(f.var, tvars | all_vars(f.body) | {v})
            body = _subst(f.body, f.var, Var(new), {new})
            return Forall(new, _subst(body, v, t, tvars))
        return Forall(f.var, _subst(f.body, v, t, tvars))
    raise TypeError(f"not a formula: {f!r}")


def substitute_many(f: Formula, mapping: dict[str, Term]) -> Formula:
    for v, t in mapping.items():
        f = substitute(f, v, t)
    return f


def rename_bound(f: Formula, avoid: set[str]) -> Formula:
    """Rename bound variables of f that occur in `avoid`."""
    if isinstance(f, Imp):
        return Imp(rename_bound(f.ante, avoid), rename_bound(f.cons, avoid))
    if isinstance(f, Forall):
        body = rename_bound(f.body, avoid)
        if f.var in avoid:
            new = fresh_name(f.var, avoid | all_vars(body))
            return Forall(new, _subst(body, f.var, Var(new), {new}))
        return Forall(f.var, body)
    return f


def _nameless(x, bound: tuple):
    if isinstance(x, Var):
        return ("b", bound.index(x.name)) if x.name in bound else ("v", x.name)
    if isinstance(x, Num):
        return ("n", x.value)
    if isinstance(x, App):
        return ("a", x.sym, tuple(_nameless(a, bound) for a in x.args))
    if isinstance(x, Forall):
        return ("all", _nameless(x.body, (x.var,) + bound))
    if isinstance(x, Imp):
        return ("imp", _nameless(x.ante, bound), _nameless(x.cons, bound))
    fields = [getattr(x, k) for k in x.__dataclass_fields__]
    return (type(x).__name__, tuple(_nameless(a, bound) for a in fields))


def alpha_equal(a: Formula, b: Formula) -> bool:
    return _nameless(a, ()) == _nameless(b, ())


# ---------------------------------------------------------------- Gödel coding
# A code is a prefix token string read as a bijective base-128 numeral, so a
# code's bit length is linear in the size of the formula, quoted codes
# included.  Names and numerals are spelled with the 64 high tokens and closed
# by END.  0 (the empty string) is not a code.

TAG_VAR, TAG_NUM, TAG_EQ, TAG_POLE, TAG_F, TAG_T, TAG_TR, TAG_IMP, TAG_FORALL, \
    TOK_END = range(10)
TOK_APP = 16  # TOK_APP + symbol index
TOK_CHAR = 64  # TOK_CHAR + digit or name character
CODE_BASE = 128

_NAME_CHARS = ("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
               "0123456789_" + PRIME)
assert len(_NAME_CHARS) == 64
_NAME_INDEX = {c: i for i, c in enumerate(_NAME_CHARS)}
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*′*\Z")
_BINARY = {TAG_EQ: Eq, TAG_F: Fatom, TAG_T: Tatom}


def valid_name(name: str) -> bool:
    return bool(_NAME_RE.match(name))


def _digits64(n: int) -> list[int]:
    """Bijective base-64 digits of n, most significant first."""
    out = []
    while n > 0:
        n, r = divmod(n - 1, 64)
        out.append(r)
    out.reverse()
    return out


def _emit(x, out: list) -> None:
    if isinstance(x, Var):
        if not valid_name(x.name):
            raise ValueError(f"not a variable name: {x.name!r}")
        out.append(TAG_VAR)
        out.extend(TOK_CHAR + _NAME_INDEX[ch] for ch in x.name)
        out.append(TOK_END)
    elif isinstance(x, Num):
        out.append(TAG_NUM)
        out.extend(TOK_CHAR + d for d in _digits64(x.value))
        out.append(TOK_END)
    elif isinstance(x, App):
        out.append(TOK_APP + SYMBOL_INDEX[x.sym])
        for a in x.args:
            _emit(a, out)
    elif isinstance(x, (Eq, Fatom, Tatom)):
        out.append({Eq: TAG_EQ, Fatom: TAG_F, Tatom: TAG_T}[type(x)])
        _emit(x.lhs if isinstance(x, Eq) else x.left, out)
        _emit(x.rhs if isinstance(x, Eq) else x.right, out)
    elif isinstance(x, (InPole, Tr)):
        out.append(TAG_POLE if isinstance(x, InPole) else TAG_TR)
        _emit(x.term, out)
    elif isinstance(x, Imp):
        out.append(TAG_IMP)
        _emit(x.ante, out)
        _emit(x.cons, out)
    elif isinstance(x, Forall):
        _emit(Var(x.var), out)
        out[-len(x.var) - 2] = TAG_FORALL
        _emit(x.body, out)
    else:
        raise TypeError(f"cannot encode {x!r}")


def encode(x) -> int:
    toks: list[int] = []
    _emit(x, toks)
    c = 0
    for t in toks:
        c = c * CODE_BASE + t + 1
    return c


def _code_tokens(c: int) -> list[int]:
    out = []
    while c > 0:
        c, r = divmod(c - 1, CODE_BASE)
        out.append(r)
    out.reverse()
    return out


class _BadCode(Exception):
    pass


class _Reader:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def next(self) -> int:
        if self.i >= len(self.toks):
            raise _BadCode
        t = self.toks[self.i]
        self.i += 1
        return t

    def spelled(self) -> list[int]:
        out = []
        while True:
            t = self.next()
            if t == TOK_END:
                return out
            if t < TOK_CHAR:
                raise _BadCode
            out.append(t - TOK_CHAR)

    def name(self) -> str:
        name = "".join(_NAME_CHARS[d] for d in self.spelled())
        if not valid_name(name):
            raise _BadCode
        return name

    def node(self):
        t = self.next()
        if t == TAG_VAR:
            return Var(self.name())
        if t == TAG_NUM:
            n = 0
            for d in self.spelled():
                n = n * 64 + d + 1
            return Num(n)
        if TOK_APP <= t < TOK_APP + len(SYMBOL_BY_INDEX):
            sym = SYMBOL_BY_INDEX[t - TOK_APP]
            args = tuple(self.term() for _ in range(SYMBOLS[sym]))
            if sym == "S" and isinstance(args[0], Num):
                raise _BadCode
            return App(sym, args)
        if t in _BINARY:
            return _BINARY[t](self.term(), self.term())
        if t == TAG_POLE:
            return InPole(self.term())
        if t == TAG_TR:
            return Tr(self.term())
        if t == TAG_IMP:
            return Imp(self.formula(), self.formula())
        if t == TAG_FORALL:
            v = self.name()
            return Forall(v, self.formula())
        raise _BadCode

    def term(self):
        x = self.node()
        if not _is_term(x):
            raise _BadCode
        return x

    def formula(self):
        x = self.node()
        if not _is_formula(x):
            raise _BadCode
        return x


@lru_cache(maxsize=1 << 14)
def decode(c: int):
    """Term or Formula with code c, or None for non-codes."""
    if c <= 0:
        return None
    r = _Reader(_code_tokens(c))
    try:
        x = r.node()
    except _BadCode:
        return None
    return x if r.i == len(r.toks) else None


def decode_term(c: int) -> Term | None:
    x = decode(c)
    return x if _is_term(x) else None


def decode_formula(c: int) -> Formula | None:
    x = decode(c)
    return x if _is_formula(x) else None


def encode_name(name: str) -> int:
    """Code of the variable name as a term."""
    return encode(Var(name))


def decode_name(c: int) -> str | None:
    x = decode(c)
    return x.name if isinstance(x, Var) else None


def is_var_code(c: int) -> bool:
    return isinstance(decode(c), Var)


def is_closed_term_code(c: int) -> bool:
    t = decode(c)
    return isinstance(t, (Var, Num, App)) and is_closed_term(t)


def is_sentence_code(c: int, language: str = "L") -> bool:
    f = decode(c)
    return (f is not None and not isinstance(f, (Var, Num, App))
            and is_sentence(f) and in_language(f, language))


def sent_L(c: int) -> bool:
    return is_sentence_code(c, "L")


def sent_LT(c: int) -> bool:
    return is_sentence_code(c, "LT")


def sent_LR(c: int) -> bool:
    return is_sentence_code(c, "LR")


def _is_formula(x) -> bool:
    return x is not None and not isinstance(x, (Var, Num, App))


def _is_term(x) -> bool:
    return isinstance(x, (Var, Num, App))


def dot_eq(c1: int, c2: int) -> int | None:
    a, b = decode(c1), decode(c2)
    if not (_is_term(a) and _is_term(b)):
        return None
    return encode(Eq(a, b))


def dot_imp(c1: int, c2: int) -> int | None:
    a, b = decode(c1), decode(c2)
    if not (_is_formula(a) and _is_formula(b)):
        return None
    return encode(Imp(a, b))


def dot_forall(v: int, c: int) -> int | None:
    x, a = decode(v), decode(c)
    if not (isinstance(x, Var) and _is_formula(a)):
        return None
    return encode(Forall(x.name, a))


def sub_num(c: int, n: int) -> int | None:
    """Code of the result of putting the numeral n for every free variable."""
    x = decode(c)
    if x is None:
        return None
    if _is_term(x):
        for v in sorted(term_vars(x)):
            x = subst_term(x, v, Num(n))
        return encode(x)
    for v in sorted(free_vars(x)):
        x = substitute(x, v, Num(n))
    return encode(x)


def num_code(n: int) -> int:
    """Code of the numeral n."""
    return encode(Num(n))


# ---------------------------------------------------------------- printing

_INFIX = {"+": 1, "*": 2}


def print_term(t: Term, code_position: bool = False) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        if code_position and t.value > 1:
            f = decode(t.value)
            if _is_formula(f):
                return "⌜" + print_formula(f) + "⌝"
        if t.value <= 3:
            s = "0"
            for _ in range(t.value):
                s = f"S({s})"
            return s
        return str(t.value)
    if t.sym in _INFIX:
        prec = _INFIX[t.sym]
        left, right = t.args
        ls = print_term(left)
        rs = print_term(right)
        if isinstance(left, App) and left.sym in _INFIX and _INFIX[left.sym] < prec:
            ls = f"({ls})"
        if isinstance(right, App) and right.sym in _INFIX and _INFIX[right.sym] <= prec:
            rs = f"({rs})"
        return f"{ls}{t.sym}{rs}"
    codes = CODE_POSITIONS.get(t.sym, ())
    args = ",".join(print_term(a, i in codes) for i, a in enumerate(t.args))
    return f"{t.sym}({args})"


def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"{print_term(f.lhs)}={print_term(f.rhs)}"
    if isinstance(f, InPole):
        return f"Pole({print_term(f.term)})"
    if isinstance(f, Fatom):
        return f"F({print_term(f.left)}, {print_term(f.right, True)})"
    if isinstance(f, Tatom):
        return f"T({print_term(f.left)}, {print_term(f.right, True)})"
    if isinstance(f, Tr):
        return f"Tr({print_term(f.term, True)})"
    if isinstance(f, Imp):
        a, b = print_formula(f.ante), print_formula(f.cons)
        if isinstance(f.ante, (Imp, Forall)):
            a = f"({a})"
        if isinstance(f.cons, (Imp, Forall)):
            b = f"({b})"
        return f"{a} -> {b}"
    if isinstance(f, Forall):
        body = print_formula(f.body)
        if isinstance(f.body, Imp):
            body = f"({body})"
        return f"forall {f.var}. {body}"
    raise TypeError(f"not a formula: {f!r}")


def show(x) -> str:
    return print_term(x) if _is_term(x) else print_formula(x)


for _cls in (Eq, InPole, Fatom, Tatom, Tr, Imp, Forall):
    _cls.__str__ = print_formula  # type: ignore[assignment]
for _cls in (Var, Num, App):
    _cls.__str__ = print_term  # type: ignore[assignment]


# ---------------------------------------------------------------- parsing


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class LanguageError(ValueError):
    pass


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*[′']*)
  | (?P<sym><->|->|↔|→|[()=,.+*⌜⌝\[\]¬∧∨∀∃⊥@~·≃&|])
""", re.VERBOSE)

_KEYWORDS = {"forall", "exists", "not", "and", "or", "bot", "Pole", "F", "T",
             "Tr", "S"}
_UNICODE = {"→": "->", "¬": "not", "∧": "and", "∨": "or", "∀": "forall",
            "∃": "exists", "⊥": "bot", "↔": "<->", "&": "and", "|": "or", "·": "@", "≃": "~", "[": "⌜", "]": "⌝"}


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        val = m.group(kind)
        if kind != "ws":
            if kind == "ident":
                val = val.replace("'", PRIME)
            if kind == "sym":
                val = _UNICODE.get(val, val)
                if val in ("not", "and", "or", "forall", "exists", "bot"):
                    kind = "ident"
            toks.append((kind, val, m.start()))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self):
        return self.toks[self.i]

    def error(self, msg):
        raise ParseError(msg, self.cur[2])

    def accept(self, val) -> bool:
        if self.cur[1] == val and self.cur[0] != "eof":
            self.i += 1
            return True
        return False

    def expect(self, val):
        if not self.accept(val):
            self.error(f"expected {val!r}, found {self.cur[1] or 'end of input'!r}")

    def finish(self):
        if self.cur[0] != "eof":
            self.error(f"unexpected {self.cur[1]!r}")

    # formulas
    def formula(self) -> Formula:
        left = self.implication()
        if self.accept("<->"):
            return iff(left, self.formula())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Imp(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.accept("or"):
            f = disj(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.accept("and"):
            f = conj(f, self.unary())
        return f

    def unary(self):
        kind, val, _ = self.cur
        if kind == "ident" and val == "not":
            self.i += 1
            return neg(self.unary())
        if kind == "ident" and val in ("forall", "exists"):
            self.i += 1
            names = []
            while self.cur[0] == "ident" and self.cur[1] not in _KEYWORDS:
                names.append(self.cur[1])
                self.i += 1
            if not names:
                self.error("expected a variable after quantifier")
            self.expect(".")
            body = self.formula()
            for v in reversed(names):
                body = Forall(v, body) if val == "forall" else exists(v, body)
            return body
        return self.atom()

    def atom(self):
        kind, val, _ = self.cur
        if kind == "ident" and val == "bot":
            self.i += 1
            return BOT
        if kind == "ident" and val in ("Pole", "Tr") and self.toks[self.i + 1][1] == "(":
            self.i += 2
            t = self.term()
            self.expect(")")
            return InPole(t) if val == "Pole" else Tr(t)
        if kind == "ident" and val in ("F", "T") and self.toks[self.i + 1][1] == "(":
            self.i += 2
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return Fatom(a, b) if val == "F" else Tatom(a, b)
        if val == "(":
            save = self.i
            self.i += 1
            try:
                f = self.formula()
                self.expect(")")
                return f
            except ParseError:
                self.i = save
        lhs = self.term()
        if self.accept("="):
            return Eq(lhs, self.term())
        if self.accept("@"):
            arg = self.term()
            self.expect("~")
            return kleene_app(lhs, arg, self.term())
        self.error("expected '=' after term")

    # terms
    def term(self) -> Term:
        t = self.product()
        while self.accept("+"):
            t = App("+", (t, self.product()))
        return t

    def product(self):
        t = self.primary()
        while self.accept("*"):
            t = App("*", (t, self.primary()))
        return t

    def primary(self):
        kind, val, pos = self.cur
        if kind == "num":
            self.i += 1
            return Num(int(val))
        if val == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if val == "⌜":
            self.i += 1
            save = self.i
            try:
                inner = self.formula()
                self.expect("⌝")
            except ParseError:
                self.i = save
                inner = self.term()
                self.expect("⌝")
            return Num(encode(inner))
        if kind == "ident":
            if val in SYMBOLS and self.toks[self.i + 1][1] == "(":
                self.i += 2
                args = [self.term()]
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
                if len(args) != SYMBOLS[val]:
                    raise ParseError(f"{val} takes {SYMBOLS[val]} arguments", pos)
                return fn(val, *args)
            if val in _KEYWORDS or val in SYMBOLS:
                self.error(f"reserved word {val!r} used as a variable")
            if not valid_name(val):
                self.error(f"bad variable name {val!r}")
            self.i += 1
            return Var(val)
        self.error(f"expected a term, found {val or 'end of input'!r}")


def parse_formula(text: str, language: str | None = None) -> Formula:
    """Parse a formula; with a language given, atoms outside it are rejected."""
    if language is not None and language not in LANGUAGES:
        raise ValueError(f"unknown language {language!r}")
    p = _Parser(text)
    f = p.formula()
    p.finish()
    if language is not None and not in_language(f, language):
        raise LanguageError(f"formula is not in {language}: {print_formula(f)}")
    return f


def parse_any(text: str) -> Formula:
    """Parse without a language restriction (L_T and L_R atoms may mix)."""
    p = _Parser(text)
    f = p.formula()
    p.finish()
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def quote(x) -> Num:
    """The numeral of x's code, written ⌜x⌝."""
    return Num(encode(x))
