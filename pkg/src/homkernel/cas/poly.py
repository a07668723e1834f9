"""Multivariate polynomials over exact rationals.

A polynomial is a finite map from monomials to nonzero Fraction
coefficients.  A monomial is a name-sorted tuple of (variable, exponent)
pairs with strictly positive exponents; the empty tuple is the constant
monomial.  The term order everywhere (leading terms, rendering, gcd
recursion) is graded lexicographic, with variables compared by name.

All arithmetic is exact; nothing in this module touches floats.
"""
from __future__ import annotations

import heapq
import math
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Mapping

Monomial = tuple  # tuple[tuple[str, int], ...], name-sorted

_ONE = Fraction(1)


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def mono_div(m1: Monomial, m2: Monomial) -> Monomial | None:
    """m1 / m2, or None when m2 does not divide m1."""
    exps = dict(m1)
    for name, e in m2:
        r = exps.get(name, 0) - e
        if r < 0:
            return None
        if r == 0:
            exps.pop(name, None)
        else:
            exps[name] = r
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_cmp(m1: Monomial, m2: Monomial) -> int:
    """Graded lex: total degree first, then lex on name-ordered exponents."""
    d1, d2 = mono_degree(m1), mono_degree(m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    e1, e2 = dict(m1), dict(m2)
    for name in sorted(e1.keys() | e2.keys()):
        a, b = e1.get(name, 0), e2.get(name, 0)
        if a != b:
            return 1 if a > b else -1
    return 0


_mono_key = cmp_to_key(mono_cmp)


class Poly:
    """Immutable exact multivariate polynomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        # coefficients are Fraction or plain int; the gcd engine runs on
        # int-primitive polynomials, and the numeric tower keeps mixed
        # representations equal and equally hashed
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = (
                        coeff if type(coeff) in (int, Fraction) else Fraction(coeff)
                    )
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, value) -> "Poly":
        q = Fraction(value)
        return cls({(): q}) if q else cls()

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Poly":
        if exp < 0:
            raise ValueError("exponent must be nonnegative")
        if exp == 0:
            return cls.const(1)
        return cls({((name, exp),): _ONE})

    # -- predicates and views ---------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return Fraction(self.terms.get((), 0))

    def variables(self) -> set[str]:
        return {name for mono in self.terms for name, _ in mono}

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        deg = 0
        for mono in self.terms:
            for n, e in mono:
                if n == name and e > deg:
                    deg = e
        return deg

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order (deterministic)."""
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]), reverse=True)

    def leading(self) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms, key=_mono_key)
        return mono, self.terms[mono]

    def leading_coeff(self) -> Fraction:
        return self.leading()[1]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = terms.get(mono, 0) + coeff
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return Poly(terms)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                s = terms.get(mono, 0) + c1 * c2
                if s:
                    terms[mono] = s
                else:
                    terms.pop(mono, None)
        return Poly(terms)

    __rmul__ = __mul__

    def scale(self, q) -> "Poly":
        q = Fraction(q)
        if not q:
            return Poly()
        return Poly({m: c * q for m, c in self.terms.items()})

    def __pow__(self, exp: int) -> "Poly":
        if exp < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        from .parser import render_poly

        return f"Poly({render_poly(self)!r})"

    # -- evaluation --------------------------------------------------------

    def evaluate(self, bindings: Mapping[str, Fraction]) -> Fraction:
        """Evaluate at a rational point; every variable must be bound."""
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            value = coeff
            for name, e in mono:
                if name not in bindings:
                    raise KeyError(f"unbound parameter {name!r}")
                value *= Fraction(bindings[name]) ** e
            total += value
        return total

    # -- univariate views (for gcd recursion) ------------------------------

    def as_univariate(self, name: str) -> dict[int, "Poly"]:
        """Coefficients of powers of `name`, each free of `name`."""
        coeffs: dict[int, dict[Monomial, Fraction]] = {}
        for mono, coeff in self.terms.items():
            e = 0
            rest = []
            for n, k in mono:
                if n == name:
                    e = k
                else:
                    rest.append((n, k))
            bucket = coeffs.setdefault(e, {})
            bucket[tuple(rest)] = bucket.get(tuple(rest), 0) + coeff
        return {e: Poly(t) for e, t in coeffs.items() if any(t.values())}

    @staticmethod
    def from_univariate(coeffs: Mapping[int, "Poly"], name: str) -> "Poly":
        total = Poly()
        for e, p in coeffs.items():
            total = total + p * Poly.var(name, e) if e else total + p
        return total


# -- division and gcd ------------------------------------------------------


def poly_divexact(f: Poly, g: Poly) -> Poly:
    """Exact quotient f/g; raises ValueError when g does not divide f.

    Long division keyed on dense exponent vectors (the variable set is
    fixed for one call, so grlex comparison is plain tuple comparison)
    with a max-heap of candidate monomials and lazy deletion.
    """
    if g.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero:
        return Poly()
    names = sorted(f.variables() | g.variables())

    def heap_key(mono: Monomial):
        exps = dict(mono)
        vec = tuple(-exps.get(n, 0) for n in names)
        return (sum(vec), vec)  # min-heap: negated degree and exponents

    g_terms = list(g.terms.items())
    gm = max(g.terms, key=_mono_key)
    gc = g.terms[gm]
    rem = dict(f.terms)
    heap = [heap_key(m) + (m,) for m in rem]
    heapq.heapify(heap)
    seen = set(rem)
    quotient: dict[Monomial, Fraction] = {}
    while heap:
        entry = heapq.heappop(heap)
        fm = entry[-1]
        fc = rem.get(fm, 0)
        if not fc:
            continue
        del rem[fm]
        mono = mono_div(fm, gm)
        if mono is None:
            raise ValueError("inexact polynomial division")
        coeff = Fraction(fc) / gc
        quotient[mono] = quotient.get(mono, 0) + coeff
        for m2, c2 in g_terms:
            if m2 == gm:
                continue
            target = mono_mul(mono, m2)
            rem[target] = rem.get(target, 0) - coeff * c2
            if target not in seen:
                seen.add(target)
                heapq.heappush(heap, heap_key(target) + (target,))
    if any(rem.values()):
        raise ValueError("inexact polynomial division")
    return Poly(quotient)


def _shift(f: Poly, name: str, exp: int) -> Poly:
    """Multiply by name^exp without touching coefficients."""
    if exp == 0 or f.is_zero:
        return f
    step = ((name, exp),)
    return Poly({mono_mul(m, step): c for m, c in f.terms.items()})


def _pseudo_rem(f: Poly, g: Poly, name: str) -> Poly:
    """Pseudo-remainder of f by g with respect to `name`."""
    dg = g.degree_in(name)
    gu = g.as_univariate(name)
    lc_g = gu[dg]
    while not f.is_zero:
        df = f.degree_in(name)
        if df < dg:
            break
        fu = f.as_univariate(name)
        lc_f = fu[df]
        f = f * lc_g - _shift(g * lc_f, name, df - dg)
    return f


def _int_primitive(f: Poly) -> Poly:
    """Associate of f with plain-int coefficients whose gcd is 1."""
    if f.is_zero:
        return f
    denom_lcm = math.lcm(*(c.denominator for c in f.terms.values()))
    scaled = {
        m: c.numerator * (denom_lcm // c.denominator) for m, c in f.terms.items()
    }
    num_gcd = math.gcd(*scaled.values())
    if num_gcd == 1:
        return Poly(scaled)
    return Poly({m: c // num_gcd for m, c in scaled.items()})


def _coeff_gcd(coeffs) -> Poly:
    """Gcd of a family of coefficient polynomials, int-primitive, with an
    early exit at constant content."""
    acc = None
    for p in sorted(coeffs, key=lambda q: (len(q.terms), q.total_degree())):
        acc = p if acc is None else poly_gcd(acc, p)
        if acc.is_constant:
            return Poly.const(1)
    return _int_primitive(acc) if acc is not None else Poly()


def _primitive_part(f: Poly, name: str) -> Poly:
    if f.is_zero:
        return f
    content = _coeff_gcd(f.as_univariate(name).values())
    if content.is_constant:
        return _int_primitive(f)
    return _int_primitive(poly_divexact(f, content))


def _monic(f: Poly) -> Poly:
    if f.is_zero:
        return f
    return f.scale(Fraction(1) / f.leading_coeff())


def _eval_except(p: Poly, top: str, pt: Mapping[str, int]) -> list[Fraction]:
    """Dense coefficient list of p in `top` with the other variables bound."""
    out = [Fraction(0)] * (p.degree_in(top) + 1)
    for mono, c in p.terms.items():
        e = 0
        v = Fraction(c)
        for n, k in mono:
            if n == top:
                e = k
            else:
                v *= Fraction(pt[n]) ** k
        out[e] += v
    return out


def _uni_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    """Degree of the univariate gcd of two dense coefficient lists."""

    def strip(v: list[Fraction]) -> list[Fraction]:
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = strip(list(a)), strip(list(b))
    while b:
        db, lb = len(b) - 1, b[-1]
        while len(a) - 1 >= db:
            shift = len(a) - 1 - db
            q = a[-1] / lb
            for i in range(db + 1):
                a[i + shift] -= q * b[i]
            strip(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd via content-and-primitive-part recursion on the top variable.

    The top variable is the name-largest variable present; contents are
    gcds of the univariate coefficients, computed recursively in the ring
    with one variable fewer.  Inputs are rescaled to integer-primitive
    associates so the pseudo-remainder sequence runs in integer
    arithmetic, and the sequence stops as soon as a remainder is free of
    the top variable (the primitive gcd is then 1).
    """
    if f.is_zero:
        return _monic(g)
    if g.is_zero:
        return _monic(f)
    names = sorted(f.variables() | g.variables())
    if not names:
        return Poly.const(1)
    f, g = _int_primitive(f), _int_primitive(g)
    top = names[-1]
    fu, gu = f.as_univariate(top), g.as_univariate(top)
    cf = _coeff_gcd(fu.values())
    cg = _coeff_gcd(gu.values())
    content = poly_gcd(cf, cg)
    pf = f if cf.is_constant else _int_primitive(poly_divexact(f, cf))
    pg = g if cg.is_constant else _int_primitive(poly_divexact(g, cg))
    if pf.degree_in(top) < pg.degree_in(top):
        pf, pg = pg, pf
    if pg.degree_in(top) >= 1:
        # specialize the other variables at integer points: when both
        # leading coefficients survive and the univariate images are
        # coprime, the primitive parts are coprime (their gcd would
        # specialize to a nonconstant common divisor otherwise)
        others = [n for n in names if n != top]
        vals = (2, 3, 5, 7, 11, 13, 17, 19)
        for attempt in range(4):
            pt = {n: vals[(i + 3 * attempt) % 8] for i, n in enumerate(others)}
            ff, gg = _eval_except(pf, top, pt), _eval_except(pg, top, pt)
            if ff[-1] == 0 or gg[-1] == 0:
                continue
            d_img = _uni_gcd_degree(ff, gg)
            if d_img == 0:
                return _monic(content)
            if d_img == pg.degree_in(top):
                try:
                    poly_divexact(pf, pg)
                except ValueError:
                    pass
                else:
                    return _monic(content * pg)
            break
    while not pg.is_zero:
        if pg.degree_in(top) == 0:
            # a nonzero remainder free of the top variable: the primitive
            # parts share no factor involving it, so only content survives
            return _monic(content)
        r = _pseudo_rem(pf, pg, top)
        pf, pg = pg, (_primitive_part(r, top) if not r.is_zero else Poly())
    return _monic(content * _primitive_part(pf, top))
