"""Three-valued verdicts with the limits under which they were reached."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable


@dataclass(frozen=True)
class Verdict:
    value: bool | None  # None is Unknown
    bound: int = 0
    fuel: int = 0
    reason: str | None = None  # why Unknown: "fuel", "bound", "pole-depth"
    witness: Any = None

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    @property
    def label(self) -> str:
        return {True: "True", False: "False", None: "Unknown"}[self.value]

    def __str__(self) -> str:
        extra = ""
        if self.value is False and self.witness is not None:
            extra = f" (witness {_short(self.witness)})"
        elif self.value is None and self.reason:
            extra = f" ({self.reason})"
        return self.label + extra

    def __bool__(self):
        raise TypeError("a Verdict is three-valued; test .is_true / .is_false")


def _short(x) -> str:
    # very large codes overflow int-to-str conversion limits
    if isinstance(x, int) and x.bit_length() > 64:
        return f"<{x.bit_length()}-bit number>"
    return str(x)


def true(bound: int = 0, fuel: int = 0, witness=None) -> Verdict:
    return Verdict(True, bound, fuel, None, witness)


def false(bound: int = 0, fuel: int = 0, witness=None) -> Verdict:
    return Verdict(False, bound, fuel, None, witness)


def unknown(reason: str, bound: int = 0, fuel: int = 0) -> Verdict:
    return Verdict(None, bound, fuel, reason)


def all_of(verdicts: Iterable[Verdict], bound: int = 0, fuel: int = 0) -> Verdict:
    """Conjunction: False beats Unknown beats True."""
    pending = None
    for v in verdicts:
        if v.is_false:
            return v
        if v.is_unknown and pending is None:
            pending = v
    return pending if pending is not None else true(bound, fuel)


def not_false(v: Verdict) -> bool:
    return v.value is not False
