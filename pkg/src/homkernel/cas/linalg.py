"""Exact linear algebra over the Scalar field.

Gaussian elimination here is generic-point elimination: a symbolic pivot
is legitimate whenever it is nonzero as a rational function, and every
symbolic pivot used is reported as a genericity condition (the answer is
valid wherever those pivots do not vanish).  Pivot selection prefers
nonzero rational constants so that genericity lists stay minimal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .scalar import CasError, Scalar


class DimensionMismatch(CasError, ValueError):
    pass


class SingularMatrix(CasError, ValueError):
    pass


Vec = list[Scalar]


def vec(values: Iterable) -> Vec:
    return [x if isinstance(x, Scalar) else Scalar.from_fraction(x) for x in values]


def zero_vec(n: int) -> Vec:
    return [Scalar.zero() for _ in range(n)]


def vec_add(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch("vector lengths differ")
    return [a + b for a, b in zip(u, v)]


def vec_sub(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch("vector lengths differ")
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v: Vec) -> Vec:
    c = c if isinstance(c, Scalar) else Scalar.from_fraction(c)
    return [c * x for x in v]


def vec_is_zero(v: Vec) -> bool:
    return all(x.is_zero for x in v)


class Matrix:
    """Dense matrix of Scalars."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        rows = [vec(row) for row in entries]
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[Scalar.zero()] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Scalar.one() if i == j else Scalar.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Vec]) -> "Matrix":
        if not cols:
            return cls([])
        return cls([[col[i] for col in cols] for i in range(len(cols[0]))])

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, key: tuple[int, int]) -> Scalar:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> Vec:
        return list(self.entries[i])

    def column(self, j: int) -> Vec:
        return [row[j] for row in self.entries]

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([vec_add(r, s) for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([vec_sub(r, s) for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch("matrix product shapes differ")
            return Matrix(
                [
                    [
                        sum((self.entries[i][k] * other.entries[k][j] for k in range(self.ncols)), Scalar.zero())
                        for j in range(other.ncols)
                    ]
                    for i in range(self.nrows)
                ]
            )
        coerced = Scalar._coerce(other)
        if coerced is None:
            return NotImplemented
        return Matrix([[x * coerced for x in row] for row in self.entries])

    def __rmul__(self, other):
        coerced = Scalar._coerce(other)
        if coerced is None:
            return NotImplemented
        return Matrix([[coerced * x for x in row] for row in self.entries])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and all(a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))
        )

    def __hash__(self):
        return hash(tuple(tuple(row) for row in self.entries))

    def __repr__(self) -> str:
        from .parser import render

        rows = "; ".join(", ".join(render(x) for x in row) for row in self.entries)
        return f"Matrix[{rows}]"

    def _same_shape(self, other: "Matrix") -> None:
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise DimensionMismatch("matrix shapes differ")

    def transpose(self) -> "Matrix":
        return Matrix([[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def mat_vec(self, v: Vec) -> Vec:
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length != ncols")
        return [sum((row[j] * v[j] for j in range(self.ncols)), Scalar.zero()) for row in self.entries]

    def is_zero(self) -> bool:
        return all(x.is_zero for row in self.entries for x in row)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def map(self, f: Callable[[Scalar], Scalar]) -> "Matrix":
        return Matrix([[f(x) for x in row] for row in self.entries])

    def substitute(self, bindings) -> "Matrix":
        return self.map(lambda x: x.substitute(bindings))

    def evaluate(self, bindings) -> list[list[Fraction]]:
        return [[x.evaluate(bindings) for x in row] for row in self.entries]

    def commutator(self, other: "Matrix") -> "Matrix":
        return self * other - other * self

    def trace(self) -> Scalar:
        if self.nrows != self.ncols:
            raise DimensionMismatch("trace of non-square matrix")
        return sum((self.entries[i][i] for i in range(self.nrows)), Scalar.zero())

    def det(self) -> Scalar:
        """Determinant by exact elimination (any nonzero pivot is valid)."""
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of non-square matrix")
        n = self.nrows
        rows = [list(r) for r in self.entries]
        sign = 1
        result = Scalar.one()
        for col in range(n):
            pivot_row = _find_pivot(rows, col, col)
            if pivot_row is None:
                return Scalar.zero()
            if pivot_row != col:
                rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
                sign = -sign
            pivot = rows[col][col]
            result = result * pivot
            for i in range(col + 1, n):
                if rows[i][col].is_zero:
                    continue
                factor = rows[i][col] / pivot
                rows[i] = [rows[i][j] - factor * rows[col][j] for j in range(n)]
        return result * sign

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise DimensionMismatch("inverse of non-square matrix")
        if self.det().is_zero:
            raise SingularMatrix("matrix is singular as a rational-function matrix")
        n = self.nrows
        aug = [self.row(i) + Matrix.identity(n).row(i) for i in range(n)]
        reduced, pivots, _ = _rref(aug, ncols=n)
        if len(pivots) != n:
            raise SingularMatrix("matrix is singular as a rational-function matrix")
        return Matrix([row[n:] for row in reduced])


def _find_pivot(rows: list[Vec], col: int, start: int) -> int | None:
    """Row index of the preferred pivot in `col` at or below `start`.

    Nonzero rational constants win over symbolic entries; among equals,
    the first in row order wins (deterministic output).
    """
    symbolic = None
    for i in range(start, len(rows)):
        x = rows[i][col]
        if x.is_zero:
            continue
        if x.is_constant:
            return i
        if symbolic is None:
            symbolic = i
    return symbolic


def _rref(rows: list[Vec], ncols: int | None = None) -> tuple[list[Vec], list[int], list[Scalar]]:
    """Reduced row echelon form; returns (rows, pivot columns, genericity).

    Only the first `ncols` columns are eligible as pivots (the rest ride
    along, e.g. an augmented right-hand side).
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows, [], []
    width = len(rows[0])
    if ncols is None:
        ncols = width
    genericity: list[Scalar] = []
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = _find_pivot(rows, col, rank)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        if not pivot.is_constant and pivot not in genericity:
            genericity.append(pivot)
        rows[rank] = [x / pivot for x in rows[rank]]
        for i in range(len(rows)):
            if i == rank or rows[i][col].is_zero:
                continue
            factor = rows[i][col]
            rows[i] = [rows[i][j] - factor * rows[rank][j] for j in range(width)]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows, pivots, genericity


@dataclass(frozen=True)
class SolveResult:
    """Outcome of an exact linear solve over the Scalar field."""

    kind: str  # "unique" | "affine" | "inconsistent"
    solution: Vec | None = None
    nullbasis: list[Vec] = field(default_factory=list)
    genericity: list[Scalar] = field(default_factory=list)
    witness: Scalar | None = None  # nonzero residual for inconsistency

    @property
    def solvable(self) -> bool:
        return self.kind != "inconsistent"


def solve_linear(a: Matrix, b: Vec | Matrix) -> SolveResult:
    """Solve a x = b exactly, classifying the solution set.

    The classification is generic: it holds wherever the reported
    genericity conditions (symbolic pivots) are nonzero.  An inconsistent
    system carries a nonzero residual witness; when that witness is a
    nonzero rational constant and the genericity list is empty, the
    inconsistency holds at every parameter value.
    """
    rhs = b.column(0) if isinstance(b, Matrix) else vec(b)
    if len(rhs) != a.nrows:
        raise DimensionMismatch("right-hand side length != nrows")
    aug = [a.row(i) + [rhs[i]] for i in range(a.nrows)]
    reduced, pivots, genericity = _rref(aug, ncols=a.ncols)
    for row in reduced:
        if all(x.is_zero for x in row[: a.ncols]) and not row[a.ncols].is_zero:
            return SolveResult("inconsistent", genericity=genericity, witness=row[a.ncols])
    solution = zero_vec(a.ncols)
    for r, col in enumerate(pivots):
        solution[col] = reduced[r][a.ncols]
    free_cols = [j for j in range(a.ncols) if j not in pivots]
    if not free_cols:
        return SolveResult("unique", solution=solution, genericity=genericity)
    nullbasis = []
    for free in free_cols:
        v = zero_vec(a.ncols)
        v[free] = Scalar.one()
        for r, col in enumerate(pivots):
            v[col] = -reduced[r][free]
        nullbasis.append(v)
    return SolveResult("affine", solution=solution, nullbasis=nullbasis, genericity=genericity)


def nullspace(a: Matrix) -> tuple[list[Vec], list[Scalar]]:
    """Basis of the kernel of a, with the genericity conditions used."""
    result = solve_linear(a, zero_vec(a.nrows))
    return result.nullbasis, result.genericity


def rank(a: Matrix) -> tuple[int, list[Scalar]]:
    _, pivots, genericity = _rref([a.row(i) for i in range(a.nrows)])
    return len(pivots), genericity


def rational_signature(rows: list[list[Fraction]]) -> tuple[int, int]:
    """Sylvester signature (positives, negatives) of an exact symmetric matrix.

    Symmetric congruence diagonalization: a zero diagonal with a nonzero
    off-diagonal entry is repaired with the hyperbolic-pair move (add row
    and column j to row and column i) before pivoting.  Raises ValueError
    on a degenerate form.
    """
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    for row in m:
        if len(row) != n:
            raise DimensionMismatch("signature of non-square matrix")

    def swap(i: int, j: int) -> None:
        m[i], m[j] = m[j], m[i]
        for row_ in m:
            row_[i], row_[j] = row_[j], row_[i]

    pos = neg = 0
    for k in range(n):
        if m[k][k] == 0:
            l = next((l for l in range(k + 1, n) if m[l][l] != 0), None)
            if l is not None:
                swap(k, l)
            else:
                # whole remaining diagonal is zero: build a pivot from an
                # off-diagonal pair (row/col add is a congruence move and
                # yields 2*m[i][j] on the diagonal)
                pair = next(
                    ((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j] != 0),
                    None,
                )
                if pair is None:
                    raise ValueError("degenerate symmetric form")
                i, j = pair
                for col in range(n):
                    m[i][col] += m[j][col]
                for row_ in range(n):
                    m[row_][i] += m[row_][j]
                if i != k:
                    swap(k, i)
        pivot = m[k][k]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if m[i][k] == 0:
                continue
            factor = m[i][k] / pivot
            for col in range(n):
                m[i][col] -= factor * m[k][col]
            for row_ in range(n):
                m[row_][i] -= factor * m[row_][k]
    return pos, neg


def cofactor_det(a: Matrix) -> Scalar:
    """Laplace-expansion determinant; independent slow oracle for det()."""
    n = a.nrows
    if n != a.ncols:
        raise DimensionMismatch("determinant of non-square matrix")
    if n == 0:
        return Scalar.one()
    if n == 1:
        return a[0, 0]
    total = Scalar.zero()
    rest = [a.row(i) for i in range(1, n)]
    for j in range(n):
        if a[0, j].is_zero:
            continue
        minor = Matrix([row[:j] + row[j + 1 :] for row in rest])
        term = a[0, j] * cofactor_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total
