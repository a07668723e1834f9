"""Expression parsing and rendering for the kernel grammar.

Grammar (EBNF):

    expr    = term , { ("+" | "-") , term } ;
    term    = factor , { ("*" | "/") , factor } ;
    factor  = "-" , factor | power ;
    power   = atom , [ "^" , integer ] ;
    atom    = integer | identifier | "(" , expr , ")" ;

Integers are nonnegative decimal literals; identifiers match
[A-Za-z_][A-Za-z0-9_]*.  Exponents are nonnegative integers.  `render`
emits canonical text that reparses to an equal Scalar.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Poly
from .scalar import CasError, DivisionByZero, Scalar


class ParseError(CasError, ValueError):
    """Syntax error with position and the set of expected tokens."""

    def __init__(self, message: str, position: int, expected: Sequence[str] = ()):
        self.position = position
        self.expected = tuple(expected)
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{hint}")


class UnknownParameter(CasError, ValueError):
    """Identifier not in the declared parameter set."""

    def __init__(self, name: str, position: int, declared: Iterable[str]):
        self.name = name
        self.position = position
        super().__init__(
            f"unknown parameter {name!r} at position {position}"
            f" (declared: {', '.join(sorted(declared)) or 'none'})"
        )


class DivisionByZeroConstant(CasError, ValueError):
    """A subexpression divides by something identically zero."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"division by zero in expression at position {position}")


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    ident: str
    position: int


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / ^
    left: object
    right: object
    position: int


@dataclass(frozen=True)
class Neg:
    operand: object


# -- tokenizer -------------------------------------------------------------

_PUNCT = set("+-*/^()")


@dataclass(frozen=True)
class _Token:
    kind: str  # int | ident | punct | end
    text: str
    position: int


def _tokenize(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(_Token("int", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(_Token("ident", src[i:j], i))
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.current
        self.index += 1
        return tok

    def expect_punct(self, ch: str) -> None:
        tok = self.current
        if tok.kind == "punct" and tok.text == ch:
            self.advance()
            return
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.position, [repr(ch)])

    def parse(self):
        node = self.expr()
        tok = self.current
        if tok.kind != "end":
            raise ParseError(
                f"unexpected {tok.text!r}", tok.position, ["operator", "end of input"]
            )
        return node

    def expr(self):
        node = self.term()
        while self.current.kind == "punct" and self.current.text in "+-":
            tok = self.advance()
            rhs = self.term()
            node = BinOp(tok.text, node, rhs, tok.position)
        return node

    def term(self):
        node = self.factor()
        while self.current.kind == "punct" and self.current.text in "*/":
            tok = self.advance()
            rhs = self.factor()
            node = BinOp(tok.text, node, rhs, tok.position)
        return node

    def factor(self):
        tok = self.current
        if tok.kind == "punct" and tok.text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.current
        if tok.kind == "punct" and tok.text == "^":
            self.advance()
            etok = self.current
            if etok.kind != "int":
                raise ParseError(
                    f"unexpected {etok.text or 'end of input'!r}",
                    etok.position,
                    ["nonnegative integer exponent"],
                )
            self.advance()
            return BinOp("^", base, Num(int(etok.text)), tok.position)
        return base

    def atom(self):
        tok = self.current
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text))
        if tok.kind == "ident":
            self.advance()
            return Name(tok.text, tok.position)
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_punct(")")
            return node
        raise ParseError(
            f"unexpected {tok.text or 'end of input'!r}",
            tok.position,
            ["integer", "identifier", "'('"],
        )


def parse_ast(src: str):
    """Parse to an AST without interpreting identifiers."""
    return _Parser(_tokenize(src)).parse()


def eval_scalar(node, params: Iterable[str] | None) -> Scalar:
    """Interpret an AST over the Scalar field.

    `params` is the declared parameter set; None admits any identifier.
    """
    declared = None if params is None else set(params)

    def walk(n) -> Scalar:
        if isinstance(n, Num):
            return Scalar.from_fraction(n.value)
        if isinstance(n, Name):
            if declared is not None and n.ident not in declared:
                raise UnknownParameter(n.ident, n.position, declared)
            return Scalar.param(n.ident)
        if isinstance(n, Neg):
            return -walk(n.operand)
        if isinstance(n, BinOp):
            if n.op == "^":
                return walk(n.left) ** n.right.value
            left, right = walk(n.left), walk(n.right)
            if n.op == "+":
                return left + right
            if n.op == "-":
                return left - right
            if n.op == "*":
                return left * right
            if n.op == "/":
                if right.is_zero:
                    raise DivisionByZeroConstant(n.position)
                return left / right
        raise TypeError(f"unexpected AST node {n!r}")

    return walk(node)


def parse_expr(src: str, params: Iterable[str] | None = None) -> Scalar:
    """Parse an expression into a canonical Scalar."""
    return eval_scalar(parse_ast(src), params)


# -- rendering -------------------------------------------------------------


def _render_coeff_mono(coeff: Fraction, mono) -> tuple[bool, str]:
    """One term as (negative?, unsigned text)."""
    negative = coeff < 0
    coeff = abs(coeff)
    factors: list[str] = []
    if coeff.numerator != 1 or not mono:
        factors.append(str(coeff.numerator))
    for name, e in mono:
        factors.append(name if e == 1 else f"{name}^{e}")
    text = "*".join(factors)
    if coeff.denominator != 1:
        text = f"{text}/{coeff.denominator}"
    return negative, text


def render_poly(p: Poly) -> str:
    if p.is_zero:
        return "0"
    pieces: list[str] = []
    for index, (mono, coeff) in enumerate(p.sorted_terms()):
        negative, text = _render_coeff_mono(coeff, mono)
        if index == 0:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f"- {text}" if negative else f"+ {text}")
    return " ".join(pieces)


def _is_bare_power(p: Poly) -> bool:
    """True when p renders as a single var or var^k (safe denominator)."""
    if len(p.terms) != 1:
        return False
    (mono, coeff), = p.terms.items()
    return coeff == 1 and len(mono) == 1


def render(x: Scalar) -> str:
    """Canonical text; reparses to an equal Scalar."""
    num_text = render_poly(x.num)
    if x.den.is_constant and x.den.constant_value() == 1:
        return num_text
    if len(x.num.terms) > 1 or x.num.terms and "/" in num_text:
        num_text = f"({num_text})"
    den_text = render_poly(x.den)
    if not _is_bare_power(x.den):
        den_text = f"({den_text})"
    return f"{num_text}/{den_text}"
