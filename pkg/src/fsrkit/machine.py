"""Codes of partial recursive functions and their fuel-bounded evaluation.

Programs are terms of a call-by-value de Bruijn lambda calculus with
arithmetic, Cantor pairing and a bounded recursion operator.  A program is
numbered by spelling it as a prefix token string and reading that string as
a bijective base-32 numeral, so every natural number is either the code of a
closed program or a non-code (which denotes a diverging program).

Applying a number to a value is Kleene application: the number is decoded
and run.  Whenever a closure has to become a number (as an output, a pair
component or an arithmetic argument) it is quoted back to its own code.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import isqrt  # subquadratic; pairs of quoted closures run to 10^6 bits

# ---------------------------------------------------------------- pairing


def pair(x: int, y: int) -> int:
    return (x + y) * (x + y + 1) // 2 + y


@lru_cache(maxsize=1 << 14)
def unpair(n: int) -> tuple[int, int]:
    w = (int(isqrt(8 * n + 1)) - 1) // 2
    y = n - w * (w + 1) // 2
    return w - y, y


def proj0(n: int) -> int:
    return unpair(n)[0]


def proj1(n: int) -> int:
    return unpair(n)[1]


def tup(*xs: int) -> int:
    """Right-nested tuple: tup(a, b, c) = pair(a, pair(b, c))."""
    if not xs:
        return 0
    acc = xs[-1]
    for x in reversed(xs[:-1]):
        acc = pair(x, acc)
    return acc


# ---------------------------------------------------------------- programs
# Tuples keep evaluation fast; the first field is one of the tags below.

VAR, LAM, APP, NUM, SUCC, ADD, MUL, PAIR, FST, SND, IFZ, REC = range(12)

TAG_NAMES = ("Var", "Lam", "App", "Num", "Succ", "Add", "Mul", "Pair",
             "P0", "P1", "IfZero", "Rec")


def Var(i):
    return (VAR, i)


def Lam(body):
    return (LAM, body)


def App(f, a):
    return (APP, f, a)


def Num(n):
    return (NUM, n)


def Succ(t):
    return (SUCC, t)


def Add(a, b):
    return (ADD, a, b)


def Mul(a, b):
    return (MUL, a, b)


def Pair(a, b):
    return (PAIR, a, b)


def P0(t):
    return (FST, t)


def P1(t):
    return (SND, t)


def IfZero(c, t, e):
    return (IFZ, c, t, e)


def Rec(base, step, n):
    """rec(b, f, 0) = b ; rec(b, f, k+1) = f . <k, rec(b, f, k)>."""
    return (REC, base, step, n)


ARITY = {LAM: 1, APP: 2, SUCC: 1, ADD: 2, MUL: 2, PAIR: 2, FST: 1, SND: 1,
         IFZ: 3, REC: 3}

# canonical diverging program, the denotation of every non-code
_SELF = Lam(App(Var(0), Var(0)))
OMEGA = App(_SELF, _SELF)


def is_closed(p, depth: int = 0) -> bool:
    tag = p[0]
    if tag == VAR:
        return p[1] < depth
    if tag == NUM:
        return True
    if tag == LAM:
        return is_closed(p[1], depth + 1)
    return all(is_closed(c, depth) for c in p[1:])


def show_prog(p) -> str:
    tag = p[0]
    if tag == VAR:
        return f"#{p[1]}"
    if tag == NUM:
        return str(p[1])
    if tag == LAM:
        return f"(\\ {show_prog(p[1])})"
    if tag == APP:
        return f"({show_prog(p[1])} {show_prog(p[2])})"
    args = ", ".join(show_prog(c) for c in p[1:])
    return f"{TAG_NAMES[tag].lower()}({args})"


# ---------------------------------------------------------------- numbering
# Token alphabet of size 32: 15 structural tokens, one unused slot and
# 16 digits.  Literals are N <bijective hex digits> E.

BASE = 32
T_LAM, T_VAR0, T_ZERO, T_SHIFT, T_APP, T_SUCC, T_PAIR, T_P0, T_P1, \
    T_ADD, T_MUL, T_IFZ, T_REC, T_LIT, T_END, T_UNUSED = range(16)
T_DIGIT = 16

_TOKEN_OF_TAG = {LAM: T_LAM, APP: T_APP, SUCC: T_SUCC, PAIR: T_PAIR,
                 FST: T_P0, SND: T_P1, ADD: T_ADD, MUL: T_MUL, IFZ: T_IFZ,
                 REC: T_REC}
_TAG_OF_TOKEN = {v: k for k, v in _TOKEN_OF_TAG.items()}


def _tokens(p, out: list) -> None:
    stack = [p]
    while stack:
        p = stack.pop()
        tag = p[0]
        if tag == VAR:
            out.extend([T_SHIFT] * p[1])
            out.append(T_VAR0)
        elif tag == NUM:
            n = p[1]
            if n == 0:
                out.append(T_ZERO)
                continue
            digits = []
            while n > 0:
                n, r = divmod(n - 1, 16)
                digits.append(T_DIGIT + r)
            out.append(T_LIT)
            out.extend(reversed(digits))
            out.append(T_END)
        else:
            out.append(_TOKEN_OF_TAG[tag])
            stack.extend(reversed(p[1:]))


def encode_prog(p) -> int:
    toks: list[int] = []
    _tokens(p, toks)
    code = 0
    for t in toks:
        code = code * BASE + t + 1
    return code


class _NotACode(Exception):
    pass


def _token_list(code: int) -> list[int]:
    toks = []
    while code > 0:
        code, r = divmod(code - 1, BASE)
        toks.append(r)
    toks.reverse()
    return toks


def _parse_tokens(toks: list[int]):
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(toks):
            raise _NotACode
        t = toks[pos]
        pos += 1
        return t

    # explicit stack: deep programs must not hit the recursion limit
    def parse():
        results: list = []
        # frames: [tag, needed, collected]
        frames: list = []
        while True:
            t = take()
            node = None
            if t == T_VAR0:
                node = Var(0)
            elif t == T_SHIFT:
                k = 1
                while True:
                    t2 = take()
                    if t2 == T_SHIFT:
                        k += 1
                    elif t2 == T_VAR0:
                        break
                    else:
                        raise _NotACode
                node = Var(k)
            elif t == T_ZERO:
                node = Num(0)
            elif t == T_LIT:
                n = 0
                while True:
                    t2 = take()
                    if t2 == T_END:
                        if n == 0:
                            # zero has its own token; keeps codes injective
                            raise _NotACode
                        break
                    if t2 < T_DIGIT:
                        raise _NotACode
                    n = n * 16 + (t2 - T_DIGIT) + 1
                node = Num(n)
            elif t in _TAG_OF_TOKEN:
                tag = _TAG_OF_TOKEN[t]
                frames.append([tag, ARITY[tag], []])
                continue
            else:
                raise _NotACode
            while True:
                if not frames:
                    return node
                fr = frames[-1]
                fr[2].append(node)
                if len(fr[2]) < fr[1]:
                    break
                frames.pop()
                node = (fr[0], *fr[2])
        return results  # pragma: no cover

    prog = parse()
    if pos != len(toks):
        raise _NotACode
    return prog


@lru_cache(maxsize=1 << 16)
def _decode(code: int):
    try:
        p = _parse_tokens(_token_list(code))
    except _NotACode:
        return None
    if not is_closed(p):
        return None
    return p


def is_code(code: int) -> bool:
    return _decode(code) is not None


def decode_prog(code: int):
    """Decode a program; non-codes denote the canonical diverging program."""
    p = _decode(code)
    return OMEGA if p is None else p


# ---------------------------------------------------------------- evaluation


@dataclass(frozen=True)
class Value:
    n: int


@dataclass(frozen=True)
class OutOfFuel:
    steps: int


class Diverges:
    """Certified divergence (only reported by `run`, never by `eval`)."""

    def __repr__(self):
        return "Diverges"


DIVERGES = Diverges()


class _Closure:
    __slots__ = ("body", "env", "_code")

    def __init__(self, body, env):
        self.body = body
        self.env = env
        self._code = None


class _Stop(Exception):
    def __init__(self, diverged: bool):
        self.diverged = diverged


def _env_get(env, i):
    while i:
        env = env[1]
        i -= 1
    return env[0]


def _close(p, env, depth: int):
    """Replace free indices of p (relative to depth) by literal env values."""
    tag = p[0]
    if tag == VAR:
        i = p[1]
        if i < depth:
            return p
        return Num(as_number(_env_get(env, i - depth)))
    if tag == NUM:
        return p
    if tag == LAM:
        return Lam(_close(p[1], env, depth + 1))
    return (tag, *(_close(c, env, depth) for c in p[1:]))


def as_number(v) -> int:
    if isinstance(v, int):
        return v
    if v._code is None:
        v._code = encode_prog(Lam(_close(v.body, v.env, 1)))
    return v._code


# continuation frames
K_ARG, K_FUN, K_BIN1, K_BIN2, K_P, K_IFZ, K_REC1, K_REC2, K_REC3, \
    K_RECSTEP, K_KLEENE = range(11)


def _machine(prog, env, fuel: int):
    """Run a closed program to a value; returns (value, steps)."""
    steps = 0
    kont = None
    ctrl = prog
    val = None
    mode = 0  # 0: evaluate ctrl in env; 1: return val to kont
    while True:
        steps += 1
        if steps > fuel:
            raise _Stop(False)
        if mode == 0:
            tag = ctrl[0]
            if tag == NUM:
                val = ctrl[1]
                mode = 1
            elif tag == VAR:
                val = _env_get(env, ctrl[1])
                mode = 1
            elif tag == LAM:
                val = _Closure(ctrl[1], env)
                mode = 1
            elif tag == APP:
                kont = (K_ARG, ctrl[2], env, kont)
                ctrl = ctrl[1]
            elif tag == SUCC or tag == FST or tag == SND:
                kont = (K_P, tag, kont)
                ctrl = ctrl[1]
            elif tag == ADD or tag == MUL or tag == PAIR:
                kont = (K_BIN1, tag, ctrl[2], env, kont)
                ctrl = ctrl[1]
            elif tag == IFZ:
                kont = (K_IFZ, ctrl[2], ctrl[3], env, kont)
                ctrl = ctrl[1]
            elif tag == REC:
                kont = (K_REC1, ctrl[2], ctrl[3], env, kont)
                ctrl = ctrl[1]
            else:  # pragma: no cover
                raise ValueError(f"bad program node {ctrl!r}")
            continue
        # mode 1: deliver val
        if kont is None:
            return val, steps
        k = kont[0]
        if k == K_ARG:
            _, arg, aenv, rest = kont
            kont = (K_FUN, val, rest)
            ctrl, env, mode = arg, aenv, 0
        elif k == K_FUN:
            _, f, rest = kont
            kont = rest
            if isinstance(f, _Closure):
                ctrl, env, mode = f.body, (val, f.env), 0
            else:
                p = _decode(f)
                if p is None:
                    raise _Stop(True)
                # Kleene application: run the decoded program, then apply it
                kont = (K_KLEENE, val, kont)
                ctrl, env, mode = p, None, 0
        elif k == K_P:
            _, tag, rest = kont
            kont = rest
            n = as_number(val)
            if tag == SUCC:
                val = n + 1
            elif tag == FST:
                val = unpair(n)[0]
            else:
                val = unpair(n)[1]
        elif k == K_BIN1:
            _, tag, right, renv, rest = kont
            kont = (K_BIN2, tag, val, rest)
            ctrl, env, mode = right, renv, 0
        elif k == K_BIN2:
            _, tag, left, rest = kont
            kont = rest
            a, b = as_number(left), as_number(val)
            if tag == ADD:
                val = a + b
            elif tag == MUL:
                val = a * b
            else:
                val = pair(a, b)
        elif k == K_IFZ:
            _, then, other, ienv, rest = kont
            kont = rest
            ctrl = then if as_number(val) == 0 else other
            env, mode = ienv, 0
        elif k == K_REC1:
            _, step, n, renv, rest = kont
            kont = (K_REC2, val, n, renv, rest)
            ctrl, env, mode = step, renv, 0
        elif k == K_REC2:
            _, base, n, renv, rest = kont
            kont = (K_REC3, base, val, rest)
            ctrl, env, mode = n, renv, 0
        elif k == K_REC3:
            _, base, step, rest = kont
            count = as_number(val)
            val = base
            kont = (K_RECSTEP, step, 0, count, rest)
        elif k == K_RECSTEP:
            _, step, i, count, rest = kont
            if i >= count:
                kont = rest
                continue
            kont = (K_RECSTEP, step, i + 1, count, rest)
            val = pair(i, as_number(val))
            kont = (K_FUN, step, kont)
        elif k == K_KLEENE:
            # the decoded program has produced its value f; apply it to arg
            _, arg, rest = kont
            kont = (K_FUN, val, rest)
            val = arg
        else:  # pragma: no cover
            raise ValueError(f"bad frame {kont!r}")


def run(code: int, arg: int, fuel: int):
    """Evaluate code . arg; returns (Value | OutOfFuel | DIVERGES, steps).

    DIVERGES is reported when the run reaches a non-code in function
    position, which denotes the canonical diverging program.
    """
    p = _decode(code)
    if p is None:
        return DIVERGES, 0
    try:
        v, steps = _machine(App(p, Num(arg)), None, fuel)
    except _Stop as stop:
        if stop.diverged:
            return DIVERGES, fuel
        return OutOfFuel(fuel), fuel
    return Value(as_number(v)), steps


def eval_code(code: int, arg: int, fuel: int):
    """code . arg within `fuel` small steps: Value(n) or OutOfFuel."""
    res, _ = run(code, arg, fuel)
    if isinstance(res, Value):
        return res
    return OutOfFuel(fuel)


def eval_program(prog, fuel: int = 10_000):
    """Evaluate a closed program (no argument) to a number."""
    try:
        v, _ = _machine(prog, None, fuel)
    except _Stop:
        return OutOfFuel(fuel)
    return Value(as_number(v))


def apply(code: int, arg: int, fuel: int = 10_000) -> int | None:
    """Convenience: the number code . arg, or None if it does not halt."""
    res = eval_code(code, arg, fuel)
    return res.n if isinstance(res, Value) else None


def steps_needed(code: int, arg: int, fuel: int) -> int | None:
    res, steps = run(code, arg, fuel)
    return steps if isinstance(res, Value) else None


def kleene_T1(a: int, b: int, c: int) -> bool:
    s, out = unpair(c)
    res, steps = run(a, b, s)
    return isinstance(res, Value) and steps == s and res.n == out


def kleene_U(c: int) -> int:
    return unpair(c)[1]


# ---------------------------------------------------------------- λ surface


class LambdaSyntaxError(ValueError):
    pass


class UnboundIdentifier(LambdaSyntaxError):
    pass


_LTOKEN = re.compile(r"""
    \s*(?:
      (?P<num>\d+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    | (?P<sym>[λ\\.,()⟨⟩<>+*·₀₁])
    )""", re.VERBOSE)

_BUILTINS = {"pair": (PAIR, 2), "p0": (FST, 1), "p1": (SND, 1), "S": (SUCC, 1),
             "ifz": (IFZ, 3), "rec": (REC, 3)}


def _lex(text: str):
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _LTOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise LambdaSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


class _LambdaParser:
    def __init__(self, text: str, params: dict):
        self.toks = _lex(text)
        self.pos = 0
        self.params = params

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, -1)

    def expect(self, sym):
        kind, val, at = self.peek()
        if val != sym:
            raise LambdaSyntaxError(f"expected {sym!r} at {at}, got {val!r}")
        self.pos += 1

    def parse(self):
        e = self.expr([])
        if self.pos != len(self.toks):
            raise LambdaSyntaxError(f"trailing input at {self.peek()[2]}")
        return e

    def expr(self, scope):
        kind, val, _ = self.peek()
        if val in ("λ", "\\"):
            self.pos += 1
            names = []
            while self.peek()[0] == "ident":
                names.append(self.peek()[1])
                self.pos += 1
            if not names:
                raise LambdaSyntaxError("lambda without binder")
            self.expect(".")
            body = self.expr(names[::-1] + scope)
            for _ in names:
                body = Lam(body)
            return body
        return self.sum(scope)

    def sum(self, scope):
        e = self.prod(scope)
        while self.peek()[1] == "+":
            self.pos += 1
            e = Add(e, self.prod(scope))
        return e

    def prod(self, scope):
        e = self.application(scope)
        while self.peek()[1] == "*":
            self.pos += 1
            e = Mul(e, self.application(scope))
        return e

    def starts_atom(self):
        kind, val, _ = self.peek()
        if val in ("_0", "_1"):
            return False
        return kind in ("num", "ident") or val in ("(", "⟨", "<", "λ", "\\")

    def application(self, scope):
        e = self.postfix(scope)
        while True:
            if self.peek()[1] == "·":
                self.pos += 1
                e = App(e, self.postfix(scope))
            elif self.starts_atom():
                e = App(e, self.postfix(scope))
            else:
                return e

    def postfix(self, scope):
        e = self.atom(scope)
        while True:
            val = self.peek()[1]
            if val in ("₀", "₁"):
                self.pos += 1
                e = P0(e) if val == "₀" else P1(e)
            elif val in ("_0", "_1"):
                self.pos += 1
                e = P0(e) if val == "_0" else P1(e)
            else:
                return e

    def atom(self, scope):
        kind, val, at = self.peek()
        if kind == "num":
            self.pos += 1
            return Num(int(val))
        if val in ("λ", "\\"):
            return self.expr(scope)
        if val == "(":
            self.pos += 1
            e = self.expr(scope)
            self.expect(")")
            return e
        if val in ("⟨", "<"):
            close = "⟩" if val == "⟨" else ">"
            self.pos += 1
            items = [self.expr(scope)]
            while self.peek()[1] == ",":
                self.pos += 1
                items.append(self.expr(scope))
            self.expect(close)
            acc = items[-1]
            for it in reversed(items[:-1]):
                acc = Pair(it, acc)
            return acc
        if kind == "ident":
            self.pos += 1
            if val in scope:
                return Var(scope.index(val))
            if val in self.params:
                return Num(int(self.params[val]))
            if val in _BUILTINS and self.peek()[1] == "(":
                tag, arity = _BUILTINS[val]
                self.expect("(")
                args = [self.expr(scope)]
                while self.peek()[1] == ",":
                    self.pos += 1
                    args.append(self.expr(scope))
                self.expect(")")
                if len(args) != arity:
                    raise LambdaSyntaxError(f"{val} takes {arity} arguments at {at}")
                return (tag, *args)
            raise UnboundIdentifier(f"unbound identifier {val!r} at {at}")
        raise LambdaSyntaxError(f"unexpected {val!r} at {at}")


def parse_lambda(text: str, params=None):
    """Surface lambda text to a closed program term.

    `params` maps free identifiers to numbers; a sequence is matched against
    the free identifiers in order of first occurrence.
    """
    if params is None:
        params = {}
    elif not isinstance(params, dict):
        params = dict(zip(_free_identifiers(text), params))
    return _LambdaParser(text, params).parse()


def _free_identifiers(text: str) -> list[str]:
    toks = _lex(text)
    bound: set[str] = set()
    seen: list[str] = []
    for i, (kind, val, _) in enumerate(toks):
        if kind != "ident":
            continue
        if i > 0 and (toks[i - 1][1] in ("λ", "\\") or
                      (toks[i - 1][0] == "ident" and toks[i - 1][1] in bound and _in_binder(toks, i))):
            bound.add(val)
            continue
        if val in _BUILTINS and i + 1 < len(toks) and toks[i + 1][1] == "(":
            continue
        if val in ("_0", "_1"):
            continue
        if val not in bound and val not in seen:
            seen.append(val)
    return seen


def _in_binder(toks, i) -> bool:
    j = i
    while j > 0 and toks[j - 1][0] == "ident":
        j -= 1
    return j > 0 and toks[j - 1][1] in ("λ", "\\")


def compile_lambda(text: str, params=None) -> int:
    return encode_prog(parse_lambda(text, params))


# ---------------------------------------------------------------- combinators
# Continuation-passing realisers over Cantor pairs.  A realiser r of A meets
# a refuter m of A in the pole as pair(r, m); r . m landing in the pole is
# enough by backward closure.

COMBINATOR_SOURCE = {
    # a in ||A||  =>  k_pi . a in |A -> B|
    "k_pi": r"λa u. ⟨p0(u), a⟩",
    # a in the pole  =>  k_pole . a realises everything
    "k_pole": r"λa u. a",
    # modus ponens: <a, b> with a in |A -> B|, b in |A|
    "i": r"λx. (λa b c. ⟨a, ⟨b, c⟩⟩) p0(x) p1(x)",
    # implication abstraction from a realiser transformer
    "h": r"λa. λc. ⟨a · p0(c), p1(c)⟩",
    # generalisation from a uniform realiser family
    "u": r"λa. λc. ⟨a · p0(c), p1(c)⟩",
    # instantiation: <a, y> with a in |forall x A|
    "s": r"λx. (λa y c. ⟨a, ⟨y, c⟩⟩) p0(x) p1(x)",
    # existential introduction: <a, y> with a in |A(y)|
    "e": r"λx. (λa y m. ⟨p0(m), ⟨y, ⟨a, 0⟩⟩⟩) p0(x) p1(x)",
}


@lru_cache(maxsize=None)
def combinators() -> dict[str, int]:
    return {name: compile_lambda(src) for name, src in COMBINATOR_SOURCE.items()}
