"""Plain-text space definitions: parsing, validation, canonical rendering.

A space file carries one homogeneous pair in five sections:

    [params]      parameter names, one per line, plus constraints
                  written `expr != 0`
    [algebra]     `dim = n` fixing the basis e1..en, then the bracket
                  table as `bracket ei ej = expr` lines
    [isotropy]    labelled vectors spanning the isotropy subalgebra
    [complement]  labelled vectors forming the ordered complement basis
    [metric]      either explicit entries `g i j = expr` (symmetric
                  fill, omitted entries are zero) or one line `g = expr`
                  quadratic in the dual symbols t1..tn

`#` starts a comment, blank lines separate, expressions use the kernel
grammar.  Every nonzero bracket must be written in both orientations
with opposite values, so a table is antisymmetric by inspection rather
than by silent completion.

Loading validates what the format cannot express: antisymmetry of the
bracket table, the Jacobi identity, closure of the isotropy span,
independence of isotropy plus complement, metric symmetry, and generic
nondegeneracy of the Gram matrix.  A loaded pair that coincides with a
catalog family picks up that family's data, so golden-table checks
apply to files exactly as to builtin names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

from .cas import Matrix, Scalar, parse_expr, render
from .cas.parser import DivisionByZeroConstant, UnknownParameter
from .cas.parser import ParseError as ExprError
from .cas.scalar import CasError
from .families import FAMILY_KEYS, FamilyData, lookup
from .homspace import (
    DegenerateMetric,
    HomogeneousPair,
    InvariantMetric,
    builtin_pair,
    theta_form_to_gram,
)
from .liealg import LieAlgebra, Subspace, Vector

__all__ = [
    "ParseError",
    "ValidationError",
    "SpaceFile",
    "parse_space",
    "load_space",
    "space_from_pair",
    "render_space",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SECTION_NAMES = ("params", "algebra", "isotropy", "complement", "metric")
_REQUIRED = ("algebra", "isotropy", "complement", "metric")


class ParseError(ValueError):
    """Malformed space file, located by line and column."""

    def __init__(
        self,
        message: str,
        line: int,
        column: int = 1,
        source: str | None = None,
    ):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source or '<space>'}:{line}:{column}"
        super().__init__(f"{where}: {message}")


class ValidationError(ValueError):
    """Well-formed file whose data breaks a pair invariant."""

    def __init__(self, invariant: str, witness: str, source: str | None = None):
        self.invariant = invariant
        self.witness = witness
        self.source = source
        origin = f"{source}: " if source else ""
        super().__init__(f"{origin}{invariant} violated: {witness}")


# -- low-level helpers -----------------------------------------------------


def _split_sections(text: str, source: str | None):
    """Map section name -> (header line, [(line number, line text)])."""
    sections: dict[str, tuple[int, list[tuple[int, str]]]] = {}
    current: str | None = None
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            col = line.index("[") + 1
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno, col, source)
            name = stripped[1:-1].strip().lower()
            if name not in _SECTION_NAMES:
                raise ParseError(f"unknown section [{name}]", lineno, col, source)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno, col, source)
            sections[name] = (lineno, [])
            current = name
            continue
        if current is None:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError(
                "content before the first [section] header", lineno, col, source
            )
        sections[current][1].append((lineno, line))
    for name in _REQUIRED:
        if name not in sections:
            raise ParseError(f"missing section [{name}]", last + 1, 1, source)
    return sections


def _split_assignment(line: str, lineno: int, source: str | None):
    """Key tokens with columns, plus the expression text and its column."""
    key_part, eq, expr_part = line.partition("=")
    if not eq:
        raise ParseError("expected 'key = expression'", lineno, 1, source)
    tokens = key_part.split()
    if not tokens:
        raise ParseError("missing key before '='", lineno, 1, source)
    cols = []
    pos = 0
    for tok in tokens:
        pos = line.index(tok, pos)
        cols.append(pos + 1)
        pos += len(tok)
    lead = len(expr_part) - len(expr_part.lstrip())
    expr_col = len(key_part) + 2 + lead
    expr = expr_part.strip()
    if not expr:
        raise ParseError("missing expression after '='", lineno, expr_col, source)
    return tokens, cols, expr, expr_col


def _parse_scalar(
    src: str,
    params: Sequence[str],
    lineno: int,
    col0: int,
    source: str | None,
) -> Scalar:
    try:
        return parse_expr(src, params)
    except UnknownParameter as exc:
        raise ParseError(
            f"unknown name {exc.name!r}", lineno, col0 + exc.position, source
        ) from None
    except (ExprError, DivisionByZeroConstant) as exc:
        raise ParseError(str(exc), lineno, col0 + exc.position, source) from None
    except CasError as exc:
        raise ParseError(str(exc), lineno, col0, source) from None


def _linear_vector(
    src: str,
    params: Sequence[str],
    names: Sequence[str],
    lineno: int,
    col0: int,
    source: str | None,
) -> Vector:
    """Coefficients of an expression linear in the basis symbols."""
    value = _parse_scalar(src, tuple(params) + tuple(names), lineno, col0, source)
    one, zero = Scalar.one(), Scalar.zero()
    coeffs = []
    for name in names:
        binding = {n: (one if n == name else zero) for n in names}
        try:
            coeffs.append(value.substitute(binding))
        except CasError:
            raise ParseError(
                "right-hand side is not linear in the basis symbols",
                lineno,
                col0,
                source,
            ) from None
    rebuilt = Scalar.zero()
    for coeff, name in zip(coeffs, names):
        rebuilt = rebuilt + coeff * Scalar.param(name)
    if rebuilt != value:
        raise ParseError(
            "right-hand side is not a linear combination of the basis symbols",
            lineno,
            col0,
            source,
        )
    return Vector(coeffs)


# -- section parsers -------------------------------------------------------


def _parse_params(lines, source):
    declared: list[str] = []
    constraint_rows: list[tuple[int, str, int]] = []
    for lineno, line in lines:
        body = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if "!=" in body:
            lhs, _, rhs = body.partition("!=")
            if rhs.strip() != "0":
                raise ParseError(
                    "constraints read '<expr> != 0'", lineno, col, source
                )
            name = lhs.strip()
            constraint_rows.append((lineno, name, col))
            if _IDENT.fullmatch(name) and name not in declared:
                declared.append(name)
        elif "=" in body:
            raise ParseError(
                "the params section holds names and '!= 0' constraints only",
                lineno,
                col,
                source,
            )
        else:
            if not _IDENT.fullmatch(body):
                raise ParseError(
                    f"bad parameter name {body!r}", lineno, col, source
                )
            if body in declared:
                raise ParseError(
                    f"parameter {body!r} declared twice", lineno, col, source
                )
            declared.append(body)
    constraints: list[Scalar] = []
    texts: list[str] = []
    for lineno, expr_src, col in constraint_rows:
        value = _parse_scalar(expr_src, declared, lineno, col, source)
        if value.is_zero:
            raise ValidationError(
                "constraints",
                f"'{expr_src} != 0' is identically false",
                source,
            )
        constraints.append(value)
        texts.append(f"{expr_src} != 0")
    return tuple(declared), tuple(constraints), tuple(texts)


def _parse_algebra(section, params, source):
    header_line, lines = section
    dim = None
    bracket_rows = []
    for lineno, line in lines:
        tokens, cols, expr, expr_col = _split_assignment(line, lineno, source)
        if tokens[0] == "dim":
            if len(tokens) != 1:
                raise ParseError("dim takes no arguments", lineno, cols[0], source)
            if dim is not None:
                raise ParseError("dim given twice", lineno, cols[0], source)
            try:
                dim = int(expr)
            except ValueError:
                raise ParseError(
                    "dim must be an integer literal", lineno, expr_col, source
                ) from None
            if dim <= 0:
                raise ParseError(
                    "dim must be a positive integer", lineno, expr_col, source
                )
        elif tokens[0] == "bracket":
            if len(tokens) != 3:
                raise ParseError(
                    "bracket lines read 'bracket ei ej = expr'",
                    lineno,
                    cols[0],
                    source,
                )
            bracket_rows.append((lineno, tokens, cols, expr, expr_col))
        else:
            raise ParseError(
                f"unknown key {tokens[0]!r} in [algebra]", lineno, cols[0], source
            )
    if dim is None:
        raise ParseError("missing 'dim = <n>' in [algebra]", header_line, 1, source)
    names = tuple(f"e{i}" for i in range(1, dim + 1))
    index = {name: k for k, name in enumerate(names)}
    for p in params:
        if p in index:
            raise ParseError(
                f"parameter {p!r} collides with a basis vector name",
                header_line,
                1,
                source,
            )
    brackets: dict[tuple[int, int], Vector] = {}
    for lineno, tokens, cols, expr, expr_col in bracket_rows:
        pair = []
        for tok, col in zip(tokens[1:], cols[1:]):
            if tok not in index:
                raise ParseError(
                    f"unknown basis vector {tok!r}", lineno, col, source
                )
            pair.append(index[tok])
        key = (pair[0], pair[1])
        if key in brackets:
            raise ParseError(
                f"duplicate bracket entry for [{tokens[1]}, {tokens[2]}]",
                lineno,
                cols[0],
                source,
            )
        brackets[key] = _linear_vector(
            expr, params, names, lineno, expr_col, source
        )
    return dim, names, brackets


def _parse_vectors(section, params, names, source, what):
    _, lines = section
    labels: list[str] = []
    vectors: list[Vector] = []
    for lineno, line in lines:
        tokens, cols, expr, expr_col = _split_assignment(line, lineno, source)
        if len(tokens) != 1:
            raise ParseError(
                f"{what} lines read '<label> = <expression>'",
                lineno,
                cols[0],
                source,
            )
        label = tokens[0]
        if not _IDENT.fullmatch(label):
            raise ParseError(f"bad vector label {label!r}", lineno, cols[0], source)
        if label in labels:
            raise ParseError(
                f"vector {label!r} defined twice", lineno, cols[0], source
            )
        if label in names or label in params:
            raise ParseError(
                f"label {label!r} collides with a declared name",
                lineno,
                cols[0],
                source,
            )
        labels.append(label)
        vectors.append(
            _linear_vector(expr, params, names, lineno, expr_col, source)
        )
    return tuple(labels), tuple(vectors)


def _parse_metric(section, params, dim_m, source):
    header_line, lines = section
    symbols = tuple(f"t{i}" for i in range(1, dim_m + 1))
    theta: str | None = None
    entries: dict[tuple[int, int], tuple[int, Scalar]] = {}
    for lineno, line in lines:
        tokens, cols, expr, expr_col = _split_assignment(line, lineno, source)
        if tokens[0] != "g":
            raise ParseError(
                "metric lines read 'g = expr' or 'g i j = expr'",
                lineno,
                cols[0],
                source,
            )
        if len(tokens) == 1:
            if theta is not None:
                raise ParseError(
                    "duplicate metric expression", lineno, cols[0], source
                )
            if entries:
                raise ParseError(
                    "mix of quadratic form and explicit entries",
                    lineno,
                    cols[0],
                    source,
                )
            for sym in symbols:
                if sym in params:
                    raise ParseError(
                        f"parameter {sym!r} collides with a dual symbol",
                        lineno,
                        cols[0],
                        source,
                    )
            theta = expr
            continue
        if len(tokens) != 3:
            raise ParseError(
                "metric lines read 'g = expr' or 'g i j = expr'",
                lineno,
                cols[0],
                source,
            )
        if theta is not None:
            raise ParseError(
                "mix of quadratic form and explicit entries",
                lineno,
                cols[0],
                source,
            )
        slots = []
        for tok, col in zip(tokens[1:], cols[1:]):
            try:
                idx = int(tok)
            except ValueError:
                raise ParseError(
                    "metric entry indices must be integers", lineno, col, source
                ) from None
            if not 1 <= idx <= dim_m:
                raise ParseError(
                    f"metric index {idx} out of range 1..{dim_m}",
                    lineno,
                    col,
                    source,
                )
            slots.append(idx - 1)
        key = (slots[0], slots[1])
        if key in entries:
            raise ParseError(
                f"duplicate metric entry g {tokens[1]} {tokens[2]}",
                lineno,
                cols[0],
                source,
            )
        entries[key] = (lineno, _parse_scalar(expr, params, lineno, expr_col, source))
    if theta is not None:
        try:
            gram = theta_form_to_gram(theta, params, symbols)
        except UnknownParameter as exc:
            raise ParseError(
                f"unknown name {exc.name!r}", header_line, 1, source
            ) from None
        except (ExprError, DivisionByZeroConstant) as exc:
            raise ParseError(str(exc), header_line, 1, source) from None
        except (CasError, ValueError) as exc:
            raise ParseError(str(exc), header_line, 1, source) from None
        return gram, theta
    zero = Scalar.zero()
    rows = [[zero for _ in range(dim_m)] for _ in range(dim_m)]
    for (i, j), (lineno, value) in entries.items():
        mirror = entries.get((j, i))
        if i != j and mirror is not None and mirror[1] != value:
            raise ValidationError(
                "metric-symmetry",
                f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) disagree",
                source,
            )
        rows[i][j] = value
        if mirror is None:
            rows[j][i] = value
    return Matrix(rows), None


# -- the space file --------------------------------------------------------


@dataclass(frozen=True)
class SpaceFile:
    """Parsed space definition; `to_pair` validates and builds the pair."""

    dim: int
    brackets: Mapping[tuple[int, int], Vector]
    isotropy_labels: tuple[str, ...]
    isotropy: tuple[Vector, ...]
    complement_labels: tuple[str, ...]
    complement: tuple[Vector, ...]
    gram: Matrix
    params: tuple[str, ...]
    metric_params: tuple[str, ...]
    constraints: tuple[Scalar, ...]
    constraint_texts: tuple[str, ...]
    metric_theta: str | None = None
    source: str | None = None

    @property
    def basis_names(self) -> tuple[str, ...]:
        return tuple(f"e{i}" for i in range(1, self.dim + 1))

    def to_pair(self) -> HomogeneousPair:
        names = self.basis_names
        for (i, j), value in self.brackets.items():
            if value.is_zero:
                continue
            if i == j:
                raise ValidationError(
                    "antisymmetry",
                    f"[{names[i]}, {names[i]}] must vanish",
                    self.source,
                )
            mirror = self.brackets.get((j, i))
            if mirror is None:
                raise ValidationError(
                    "antisymmetry",
                    f"bracket {names[i]} {names[j]} has no matching"
                    f" bracket {names[j]} {names[i]} entry",
                    self.source,
                )
            if mirror != -value:
                raise ValidationError(
                    "antisymmetry",
                    f"[{names[i]}, {names[j]}] and [{names[j]}, {names[i]}]"
                    " do not negate each other",
                    self.source,
                )
        table = {k: v for k, v in self.brackets.items() if k[0] != k[1]}
        algebra = LieAlgebra(names, table)
        self._check_jacobi(algebra)
        if len(self.isotropy) + len(self.complement) != self.dim:
            raise ValidationError(
                "dimension",
                f"{len(self.isotropy)} isotropy + {len(self.complement)}"
                f" complement vectors cannot split dimension {self.dim}",
                self.source,
            )
        h_space = Subspace.span(self.isotropy, self.dim)
        closure = algebra.is_subalgebra(h_space)
        if not closure.closed:
            a, b = closure.witness
            raise ValidationError(
                "isotropy-subalgebra",
                f"the bracket of isotropy vectors {a + 1} and {b + 1}"
                " escapes their span",
                self.source,
            )
        try:
            metric = InvariantMetric(self.gram, self.metric_params)
        except DegenerateMetric:
            raise ValidationError(
                "metric-nondegeneracy",
                "the Gram matrix is singular as a rational function",
                self.source,
            ) from None
        family = self._identify(algebra)
        try:
            return HomogeneousPair(
                algebra, self.isotropy, self.complement, metric, family=family
            )
        except ValueError as exc:
            raise ValidationError("spanning", str(exc), self.source) from None

    def _check_jacobi(self, algebra: LieAlgebra) -> None:
        names = algebra.basis_names
        for i in range(algebra.dim):
            ei = algebra.basis_vector(i)
            for j in range(i + 1, algebra.dim):
                ej = algebra.basis_vector(j)
                for k in range(j + 1, algebra.dim):
                    ek = algebra.basis_vector(k)
                    cyc = (
                        algebra.bracket(algebra.bracket(ei, ej), ek)
                        + algebra.bracket(algebra.bracket(ej, ek), ei)
                        + algebra.bracket(algebra.bracket(ek, ei), ej)
                    )
                    if not cyc.is_zero:
                        bad = next(c for c in cyc if not c.is_zero)
                        raise ValidationError(
                            "jacobi",
                            f"cyclic sum on ({names[i]}, {names[j]},"
                            f" {names[k]}) leaves {render(bad)}",
                            self.source,
                        )

    def _identify(self, algebra: LieAlgebra) -> FamilyData | None:
        for key in FAMILY_KEYS:
            b = _builtin(key)
            if (
                b.g.dim == algebra.dim
                and b.g.table == algebra.table
                and b.h_vectors == self.isotropy
                and b.m_vectors == self.complement
                and b.metric.gram == self.gram
            ):
                return lookup(key)
        return None

    def render(self) -> str:
        names = self.basis_names
        out: list[str] = []
        if self.params or self.constraint_texts:
            out.append("[params]")
            out.extend(self.params)
            out.extend(self.constraint_texts)
            out.append("")
        out.append("[algebra]")
        out.append(f"dim = {self.dim}")
        for i, j in sorted(p for p in self.brackets if p[0] < p[1]):
            value = self.brackets[(i, j)]
            if value.is_zero:
                continue
            mirror = self.brackets.get((j, i), -value)
            out.append(
                f"bracket {names[i]} {names[j]} = {_linear_text(value, names)}"
            )
            out.append(
                f"bracket {names[j]} {names[i]} = {_linear_text(mirror, names)}"
            )
        out.append("")
        out.append("[isotropy]")
        for label, vec in zip(self.isotropy_labels, self.isotropy):
            out.append(f"{label} = {_linear_text(vec, names)}")
        out.append("")
        out.append("[complement]")
        for label, vec in zip(self.complement_labels, self.complement):
            out.append(f"{label} = {_linear_text(vec, names)}")
        out.append("")
        out.append("[metric]")
        if self.metric_theta is not None:
            out.append(f"g = {self.metric_theta}")
        else:
            n = len(self.complement)
            for i in range(n):
                for j in range(i, n):
                    entry = self.gram[i, j]
                    if not entry.is_zero:
                        out.append(f"g {i + 1} {j + 1} = {render(entry)}")
        return "\n".join(out) + "\n"


@lru_cache(maxsize=None)
def _builtin(key: str) -> HomogeneousPair:
    return builtin_pair(key)


def _coeff_term(coeff: Scalar, name: str) -> str:
    if coeff == Scalar.one():
        return name
    if coeff == Scalar.from_fraction(-1):
        return f"-{name}"
    text = render(coeff)
    if " " in text:
        text = f"({text})"
    return f"{text}*{name}"


def _linear_text(vec: Vector, names: Sequence[str]) -> str:
    terms = [
        _coeff_term(coeff, name)
        for coeff, name in zip(vec, names)
        if not coeff.is_zero
    ]
    if not terms:
        return "0"
    out = terms[0]
    for term in terms[1:]:
        if term.startswith("-"):
            out += f" - {term[1:]}"
        else:
            out += f" + {term}"
    return out


# -- public entry points ---------------------------------------------------


def parse_space(text: str, source: str | None = None) -> SpaceFile:
    """Parse space-file text; semantic pair checks wait for `to_pair`."""
    sections = _split_sections(text, source)
    if "params" in sections:
        params, constraints, texts = _parse_params(sections["params"][1], source)
    else:
        params, constraints, texts = (), (), ()
    dim, names, brackets = _parse_algebra(sections["algebra"], params, source)
    iso_labels, isotropy = _parse_vectors(
        sections["isotropy"], params, names, source, "isotropy"
    )
    comp_labels, complement = _parse_vectors(
        sections["complement"], params, names, source, "complement"
    )
    if not complement:
        raise ParseError(
            "the complement section needs at least one vector",
            sections["complement"][0],
            1,
            source,
        )
    gram, theta = _parse_metric(
        sections["metric"], params, len(complement), source
    )
    gram_vars: set[str] = set()
    for i in range(gram.nrows):
        for j in range(gram.ncols):
            gram_vars |= set(gram[i, j].variables())
    metric_params = tuple(p for p in params if p in gram_vars)
    return SpaceFile(
        dim=dim,
        brackets=brackets,
        isotropy_labels=iso_labels,
        isotropy=isotropy,
        complement_labels=comp_labels,
        complement=complement,
        gram=gram,
        params=params,
        metric_params=metric_params,
        constraints=constraints,
        constraint_texts=texts,
        metric_theta=theta,
        source=source,
    )


def load_space(path) -> HomogeneousPair:
    """Read, parse, and validate a space file into a homogeneous pair."""
    p = Path(path)
    return parse_space(p.read_text(), source=str(p)).to_pair()


def space_from_pair(
    pair: HomogeneousPair, constraints: Sequence[str] | None = None
) -> SpaceFile:
    """Space-file form of a pair; reloading reproduces the pair exactly."""
    g = pair.g
    seen: set[str] = set()
    for vec in g.table.values():
        for c in vec:
            seen |= set(c.variables())
    for vec in pair.h_vectors + pair.m_vectors:
        for c in vec:
            seen |= set(c.variables())
    gram = pair.metric.gram
    gram_vars: set[str] = set()
    for i in range(gram.nrows):
        for j in range(gram.ncols):
            gram_vars |= set(gram[i, j].variables())
    seen |= gram_vars
    declared = list(pair.metric.params)
    declared.extend(sorted(seen - set(declared)))
    family = pair.family
    if constraints is None:
        if family is not None:
            constraints = [f"{family.nondegeneracy} != 0"]
        elif not pair.metric.nondegeneracy_condition.is_constant:
            constraints = [f"{render(pair.metric.nondegeneracy_condition)} != 0"]
        else:
            constraints = []
    texts = []
    values = []
    for text in constraints:
        body = text[: text.index("!=")].strip() if "!=" in text else text.strip()
        values.append(parse_expr(body, declared))
        texts.append(f"{body} != 0")
    return SpaceFile(
        dim=g.dim,
        brackets=dict(g.table),
        isotropy_labels=tuple(f"h{i}" for i in range(1, pair.dim_h + 1)),
        isotropy=pair.h_vectors,
        complement_labels=tuple(f"u{i}" for i in range(1, pair.dim_m + 1)),
        complement=pair.m_vectors,
        gram=gram,
        params=tuple(declared),
        metric_params=pair.metric.params,
        constraints=tuple(values),
        constraint_texts=tuple(texts),
        metric_theta=family.metric_theta if family is not None else None,
        source=None,
    )


def render_space(pair: HomogeneousPair) -> str:
    return space_from_pair(pair).render()
