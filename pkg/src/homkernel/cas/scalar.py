"""Exact rational functions over the rationals, in canonical form.

A Scalar is num/den with both Poly over Q, gcd(num, den) = 1 and den
monic in graded-lex order.  Zero is 0/1.  Canonical form makes equality
a representation check: two Scalars denote the same rational function
iff their (num, den) pairs are equal.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .poly import Poly, poly_divexact, poly_gcd


class CasError(Exception):
    """Base class for kernel arithmetic errors."""


class DivisionByZero(CasError, ZeroDivisionError):
    """Division by a rational function that is identically zero."""


class DenominatorVanishes(CasError, ZeroDivisionError):
    """A substitution or evaluation made some denominator identically zero."""


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if den.is_zero:
        raise DivisionByZero("zero denominator")
    if num.is_zero:
        return Poly(), Poly.const(1)
    if den.is_constant:
        c = den.constant_value()
        return (num if c == 1 else num.scale(1 / c)), Poly.const(1)
    if not num.is_constant:
        g = poly_gcd(num, den)
        if not (g.is_constant and g.constant_value() == 1):
            num, den = poly_divexact(num, g), poly_divexact(den, g)
    lc = Fraction(den.leading_coeff())
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


class Scalar:
    """Immutable exact rational function; the coefficient field of the kernel."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _normalized: bool = False):
        if den is None:
            den = Poly.const(1)
        if not _normalized:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return cls(Poly(), Poly.const(1), _normalized=True)

    @classmethod
    def one(cls) -> "Scalar":
        return cls.from_fraction(1)

    @classmethod
    def from_fraction(cls, value) -> "Scalar":
        return cls(Poly.const(Fraction(value)), Poly.const(1), _normalized=True)

    from_int = from_fraction

    @classmethod
    def param(cls, name: str) -> "Scalar":
        return cls(Poly.var(name), Poly.const(1), _normalized=True)

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def __bool__(self) -> bool:
        return not self.is_zero

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "Scalar | None":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar.from_fraction(value)
        return None

    def __add__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        # cancel through component gcds: for canonical operands the sum
        # num/den needs no further reduction beyond gcd(t, g)
        g = poly_gcd(self.den, other.den)
        if g.is_constant:
            num = self.num * other.den + other.num * self.den
            if num.is_zero:
                return Scalar.zero()
            return Scalar(num, self.den * other.den, _normalized=True)
        d1r, d2r = poly_divexact(self.den, g), poly_divexact(other.den, g)
        t = self.num * d2r + other.num * d1r
        if t.is_zero:
            return Scalar.zero()
        h = poly_gcd(t, g)
        if not h.is_constant:
            t = poly_divexact(t, h)
            g = poly_divexact(g, h)
        return Scalar(t, d1r * d2r * g, _normalized=True)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den, _normalized=True)

    def __sub__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Scalar.zero()
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        # cross-cancellation: gcd(n1, d1) = gcd(n2, d2) = 1 already
        g1 = poly_gcd(n1, d2)
        if not g1.is_constant:
            n1, d2 = poly_divexact(n1, g1), poly_divexact(d2, g1)
        g2 = poly_gcd(n2, d1)
        if not g2.is_constant:
            n2, d1 = poly_divexact(n2, g2), poly_divexact(d1, g2)
        return Scalar(n1 * n2, d1 * d2, _normalized=True)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("division by zero rational function")
        n, d = other.num, other.den
        lc = Fraction(n.leading_coeff())
        if lc != 1:
            n, d = n.scale(1 / lc), d.scale(1 / lc)
        return self * Scalar(d, n, _normalized=True)

    def __rtruediv__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exp: int) -> "Scalar":
        if not isinstance(exp, int):
            return NotImplemented
        if exp < 0:
            return Scalar.one() / (self ** (-exp))
        if exp == 0:
            return Scalar.one()
        return Scalar(self.num**exp, self.den**exp, _normalized=True)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        from .parser import render

        return f"Scalar({render(self)!r})"

    # -- substitution and evaluation ---------------------------------------

    def substitute(self, bindings: Mapping[str, "Scalar | int | Fraction"]) -> "Scalar":
        """Simultaneously replace parameters by Scalars.

        Raises DenominatorVanishes when the substituted denominator is
        identically zero (the substitution hits a pole).
        """
        subs = {name: Scalar._coerce(v) for name, v in bindings.items()}
        num = _poly_substitute(self.num, subs)
        den = _poly_substitute(self.den, subs)
        if den.is_zero:
            raise DenominatorVanishes(f"denominator vanishes under {sorted(bindings)}")
        return num / den

    def evaluate(self, bindings: Mapping[str, Fraction | int]) -> Fraction:
        """Evaluate at a rational point; raises DenominatorVanishes on poles."""
        point = {name: Fraction(v) for name, v in bindings.items()}
        den = self.den.evaluate(point)
        if den == 0:
            raise DenominatorVanishes("denominator vanishes at the point")
        return self.num.evaluate(point) / den


def _poly_substitute(p: Poly, subs: Mapping[str, Scalar]) -> Scalar:
    total = Scalar.zero()
    for mono, coeff in p.terms.items():
        term = Scalar.from_fraction(coeff)
        for name, e in mono:
            base = subs.get(name)
            if base is None:
                base = Scalar.param(name)
            term = term * base**e
        total = total + term
    return total


def scalar_arith(op: str, x: Scalar, y: Scalar | None = None) -> Scalar:
    """Field arithmetic dispatch: add, sub, mul, div, neg, pow."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    if op == "pow":
        if not isinstance(y, int):
            raise TypeError("pow exponent must be an int")
        return x**y
    raise ValueError(f"unknown operation {op!r}")


def substitute(x: Scalar, bindings: Mapping[str, Scalar]) -> Scalar:
    """Module-level alias for Scalar.substitute."""
    return x.substitute(bindings)
