"""Truth functions of Goedel logic on exact rationals, and propositional evaluation.

Values are :class:`fractions.Fraction` instances in ``[0, 1]``.  The Goedel
connectives only ever select or compare their arguments, so no arithmetic is
performed and no rounding can occur.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .syntax import And, Atom, Bottom, Boxed, Formula, Implies, Just

Value = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def value(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or ``"p/q"`` string) to a truth value, checking the range."""
    v = parse_value(x) if isinstance(x, str) else Fraction(x)
    if not ZERO <= v <= ONE:
        raise ValueError(f"truth value out of [0,1]: {v}")
    return v


def parse_value(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    if not num.strip().isdigit() or (sep and not den.strip().isdigit()):
        raise ValueError(f"not an exact rational: {text!r}")
    if sep and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    v = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    if v > ONE:
        raise ValueError(f"truth value out of [0,1]: {text}")
    return v


def format_value(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def tnorm(x: Fraction, y: Fraction) -> Fraction:
    return x if x <= y else y


def residuum(x: Fraction, y: Fraction) -> Fraction:
    return y if x > y else ONE


def neg(x: Fraction) -> Fraction:
    return ONE if x == 0 else ZERO


def oplus(x: Fraction, y: Fraction) -> Fraction:
    return x if x >= y else y


def iff_val(x: Fraction, y: Fraction) -> Fraction:
    return ONE if x == y else tnorm(x, y)


class Assignment:
    """Finite map from star atoms to values, total through ``default``."""

    __slots__ = ("_values", "default")

    def __init__(self, values: Mapping[Formula, object] | None = None, default=ONE):
        vals = {}
        for atom, v in (values or {}).items():
            if not isinstance(atom, (Atom, Boxed)):
                raise TypeError(f"assignment keys must be atoms, got {atom!r}")
            vals[atom] = value(v)
        self._values = MappingProxyType(vals)
        self.default = value(default)

    @property
    def values(self) -> Mapping[Formula, Fraction]:
        return self._values

    def __getitem__(self, atom: Formula) -> Fraction:
        return self._values.get(atom, self.default)

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return dict(self._values) == dict(other._values) and self.default == other.default

    def __hash__(self):
        return hash((frozenset(self._values.items()), self.default))

    def __repr__(self):
        items = ", ".join(f"{a}: {format_value(v)}" for a, v in self._values.items())
        return f"Assignment({{{items}}}, default={format_value(self.default)})"


def eval_prop(a: Assignment, f: Formula) -> Fraction:
    if isinstance(f, Bottom):
        return ZERO
    if isinstance(f, (Atom, Boxed)):
        return a[f]
    if isinstance(f, And):
        return tnorm(eval_prop(a, f.left), eval_prop(a, f.right))
    if isinstance(f, Implies):
        return residuum(eval_prop(a, f.left), eval_prop(a, f.right))
    if isinstance(f, Just):
        raise TypeError("eval_prop expects a star formula; translate with syntax.star first")
    raise TypeError(f"not a formula: {f!r}")


def eval_prop_set(a: Assignment, fs: Iterable[Formula]) -> Fraction:
    """Infimum over a finite set; the empty set has value 1."""
    out = ONE
    for f in fs:
        out = tnorm(out, eval_prop(a, f))
    return out
