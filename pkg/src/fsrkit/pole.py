"""Poles: sets of naturals closed under converse computation.

A seeded pole denotes the least set containing the seed with <e, m> in it
whenever e . m halts inside it.  Cantor pairing is a bijection, so every
number has exactly one decomposition <e, m>, and membership follows a
single unfold chain n -> e . m -> ... until it meets the seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .machine import DIVERGES, Value, pair, run, unpair
from .verdict import Verdict, false, true, unknown

DEFAULT_FUEL = 10_000
DEFAULT_DEPTH = 32

EMPTY, FULL, SEEDED = "empty", "full", "seeded"


@dataclass(frozen=True)
class Pole:
    kind: str
    seed: frozenset = field(default_factory=frozenset)
    fuel: int = DEFAULT_FUEL
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if self.kind not in (EMPTY, FULL, SEEDED):
            raise ValueError(f"unknown pole kind {self.kind!r}")
        if self.kind == SEEDED and not self.seed:
            raise ValueError("a seeded pole needs a nonempty seed; use Pole.empty()")

    @classmethod
    def empty(cls, **limits) -> "Pole":
        return cls(EMPTY, **limits)

    @classmethod
    def full(cls, **limits) -> "Pole":
        return cls(FULL, **limits)

    @classmethod
    def seeded(cls, seed, **limits) -> "Pole":
        return cls(SEEDED, frozenset(int(s) for s in seed), **limits)

    @property
    def name(self) -> str:
        if self.kind == SEEDED:
            return "seed:" + ",".join(str(s) for s in sorted(self.seed))
        return self.kind

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY

    def __str__(self):
        return self.name


def parse_pole(desc: str, **limits) -> Pole:
    """'empty' | 'full' | 'seed:<n,...>'."""
    desc = desc.strip()
    if desc in ("empty", "∅"):
        return Pole.empty(**limits)
    if desc in ("full", "N", "ℕ"):
        return Pole.full(**limits)
    if desc.startswith("seed:"):
        body = desc[5:].strip("{} ")
        return Pole.seeded([int(x) for x in body.split(",") if x.strip()], **limits)
    raise ValueError(f"bad pole description {desc!r}")


TEST_POLES = ("empty", "full", "seed:5", "seed:3,8")


def test_poles(**limits) -> list[Pole]:
    return [parse_pole(s, **limits) for s in TEST_POLES]


def member(p: Pole, n: int, fuel: int | None = None, depth: int | None = None) -> Verdict:
    fuel = p.fuel if fuel is None else fuel
    depth = p.depth if depth is None else depth
    if p.kind == EMPTY:
        return false(fuel=fuel, witness=n)
    if p.kind == FULL:
        return true(fuel=fuel)
    return _seeded_member(p.seed, n, fuel, depth)


@lru_cache(maxsize=1 << 18)
def _seeded_member(seed: frozenset, n: int, fuel: int, depth: int) -> Verdict:
    seen = set()
    cur = n
    for step in range(depth + 1):
        if cur in seed:
            return true(fuel=fuel, witness=step)
        if cur in seen:
            # the chain cycles without meeting the seed
            return false(fuel=fuel, witness=n)
        seen.add(cur)
        if step == depth:
            break
        e, m = unpair(cur)
        res, _ = run(e, m, fuel)
        if res is DIVERGES:
            return false(fuel=fuel, witness=n)
        if not isinstance(res, Value):
            return unknown("fuel", fuel=fuel)
        cur = res.n
    return unknown("pole-depth", fuel=fuel)


@dataclass
class ClosureReport:
    pole: str
    checked: int = 0
    halting: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_closure(p: Pole, code_bound: int, arg_bound: int, fuel: int | None = None) -> ClosureReport:
    """Sweep e <= code_bound, m <= arg_bound for e . m = n in P with <e,m> not in P."""
    fuel = p.fuel if fuel is None else fuel
    report = ClosureReport(p.name)
    for e in range(code_bound + 1):
        for m in range(arg_bound + 1):
            report.checked += 1
            res, _ = run(e, m, fuel)
            if not isinstance(res, Value):
                continue
            report.halting += 1
            if member(p, res.n, fuel).is_true and member(p, pair(e, m), fuel).is_false:
                report.violations.append((e, m, res.n))
    return report
