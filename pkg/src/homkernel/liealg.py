"""Finite-dimensional Lie algebras over the exact scalar field.

A Lie algebra is stored through its structure constants in a fixed
basis.  Antisymmetry is enforced at construction; the Jacobi identity is
checked on demand (jacobi_residual), so deliberately broken tables can
be built and diagnosed.  Subspaces keep an echelonized spanning set,
which makes membership and closure tests exact linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cas import Matrix, Scalar
from .cas.linalg import DimensionMismatch, _rref, solve_linear


class GenericityRequired(ValueError):
    """Profile of a parameter-dependent algebra without an explicit opt-in."""


def _to_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)):
        return Scalar.from_fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


class Vector:
    """Coordinate vector in a fixed basis."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(_to_scalar(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    @classmethod
    def zero(cls, dim: int) -> "Vector":
        return cls([Scalar.zero()] * dim)

    @classmethod
    def basis(cls, dim: int, k: int) -> "Vector":
        return cls([Scalar.one() if i == k else Scalar.zero() for i in range(dim)])

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> Scalar:
        return self.coords[i]

    def __add__(self, other: "Vector") -> "Vector":
        if len(other) != len(self):
            raise DimensionMismatch("vector sizes differ")
        return Vector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Vector") -> "Vector":
        if len(other) != len(self):
            raise DimensionMismatch("vector sizes differ")
        return Vector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Vector":
        return Vector(-c for c in self.coords)

    def scale(self, q) -> "Vector":
        q = _to_scalar(q)
        return Vector(q * c for c in self.coords)

    __rmul__ = scale
    __mul__ = scale

    def substitute(self, bindings: Mapping[str, Scalar]) -> "Vector":
        return Vector(c.substitute(bindings) for c in self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        from .cas import render

        return "Vector(" + ", ".join(render(c) for c in self.coords) + ")"


class LieAlgebra:
    """Lie algebra given by structure constants over the scalar field.

    `brackets` maps 0-based index pairs (i, j) to the coordinates of
    [e_i, e_j].  Either orientation (or both) of a pair may be supplied;
    a missing orientation is filled in by antisymmetry and a doubly
    supplied one is cross-checked.
    """

    __slots__ = ("basis_names", "dim", "table")

    def __init__(
        self,
        basis_names: Sequence[str],
        brackets: Mapping[tuple[int, int], Sequence],
    ):
        names = tuple(basis_names)
        dim = len(names)
        if dim == 0:
            raise ValueError("empty basis")
        if len(set(names)) != dim:
            raise ValueError("duplicate basis names")
        table: dict[tuple[int, int], Vector] = {}
        for (i, j), coords in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"bracket index ({i}, {j}) out of range")
            vec = coords if isinstance(coords, Vector) else Vector(coords)
            if vec.dim != dim:
                raise DimensionMismatch(
                    f"bracket [{names[i]}, {names[j]}] has {vec.dim} coordinates"
                )
            if i == j:
                if not vec.is_zero:
                    raise ValueError(f"[{names[i]}, {names[i]}] must vanish")
                continue
            if (i, j) in table:
                if table[(i, j)] != vec:
                    raise ValueError(
                        f"conflicting entries for [{names[i]}, {names[j]}]"
                    )
                continue
            table[(i, j)] = vec
            if (j, i) in brackets:
                mirror = brackets[(j, i)]
                mirror = mirror if isinstance(mirror, Vector) else Vector(mirror)
                if mirror != -vec:
                    raise ValueError(
                        f"antisymmetry broken between [{names[i]}, {names[j]}]"
                        f" and [{names[j]}, {names[i]}]"
                    )
                table[(j, i)] = mirror
            else:
                table[(j, i)] = -vec
        clean = {k: v for k, v in table.items() if not v.is_zero}
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "table", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    def structure_constant(self, i: int, j: int) -> Vector:
        """[e_i, e_j] as a coordinate vector."""
        return self.table.get((i, j), Vector.zero(self.dim))

    def basis_vector(self, k: int) -> Vector:
        return Vector.basis(self.dim, k)

    def bracket(self, x: Vector, y: Vector) -> Vector:
        if x.dim != self.dim or y.dim != self.dim:
            raise DimensionMismatch("vector does not live in this algebra")
        out = [Scalar.zero()] * self.dim
        for (i, j), vec in self.table.items():
            w = x[i] * y[j]
            if w.is_zero:
                continue
            for k, c in enumerate(vec.coords):
                if not c.is_zero:
                    out[k] = out[k] + w * c
        return Vector(out)

    def ad_matrix(self, x: Vector) -> Matrix:
        """Matrix of y -> [x, y]; column j holds the coordinates of [x, e_j]."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns([list(c) for c in cols])

    def jacobi_residual(self) -> list[Scalar]:
        """Components of the cyclic bracket sums over all basis triples i<j<k."""
        out: list[Scalar] = []
        for i in range(self.dim):
            ei = self.basis_vector(i)
            for j in range(i + 1, self.dim):
                ej = self.basis_vector(j)
                for k in range(j + 1, self.dim):
                    ek = self.basis_vector(k)
                    s = (
                        self.bracket(self.bracket(ei, ej), ek)
                        + self.bracket(self.bracket(ej, ek), ei)
                        + self.bracket(self.bracket(ek, ei), ej)
                    )
                    out.extend(s.coords)
        return out

    @property
    def is_lie(self) -> bool:
        return all(r.is_zero for r in self.jacobi_residual())

    def is_subalgebra(self, s: "Subspace") -> "SubalgebraResult":
        if s.ambient_dim != self.dim:
            raise DimensionMismatch("subspace lives in a different space")
        vecs = s.basis
        for a in range(len(vecs)):
            for b in range(a + 1, len(vecs)):
                residual = s.reduce(self.bracket(vecs[a], vecs[b]))
                if not residual.is_zero:
                    return SubalgebraResult("not_closed", (a, b), residual)
        return SubalgebraResult("closed", None, None)

    def apply_automorphism(self, p: Matrix) -> "AutomorphismResult":
        """Structure constants in the basis e'_j = P e_j.

        Also reports the bracket-preservation residual: all-zero iff P is
        an automorphism of this algebra.
        """
        if p.nrows != self.dim or p.ncols != self.dim:
            raise DimensionMismatch("basis change has wrong shape")
        p_inv = p.inverse()
        cols = [Vector([p[i, j] for i in range(self.dim)]) for j in range(self.dim)]
        new: dict[tuple[int, int], Vector] = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                w = self.bracket(cols[i], cols[j])
                new[(i, j)] = Vector(p_inv.mat_vec(list(w)))
        algebra = LieAlgebra(self.basis_names, new)
        residuals: list[Scalar] = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                diff = algebra.structure_constant(i, j) - self.structure_constant(i, j)
                residuals.extend(diff.coords)
        return AutomorphismResult(algebra, residuals)

    @property
    def has_parameters(self) -> bool:
        return any(
            not c.is_constant for vec in self.table.values() for c in vec.coords
        )

    def substitute(self, bindings: Mapping[str, Scalar]) -> "LieAlgebra":
        """Same table with parameters substituted."""
        return LieAlgebra(
            self.basis_names,
            {pair: vec.substitute(bindings) for pair, vec in self.table.items()},
        )

    def algebra_profile(self, assume_generic=None) -> "AlgebraProfile":
        """Derived and lower central series dimensions plus the center.

        Dimensions can jump at special parameter values, so an algebra
        whose structure constants carry parameters is refused unless the
        caller passes `assume_generic` (a list of expressions it accepts
        as nonzero; may be empty).  The returned profile records every
        pivot condition actually assumed during elimination.
        """
        if self.has_parameters and assume_generic is None:
            raise GenericityRequired(
                "structure constants carry parameters; pass assume_generic"
                " to accept rank answers that hold only generically"
            )
        genericity: list[Scalar] = list(assume_generic or ())

        def union(conditions: Iterable[Scalar]) -> None:
            for c in conditions:
                if c not in genericity:
                    genericity.append(c)

        def bracket_span(left: "Subspace", right: "Subspace") -> "Subspace":
            produced = [
                self.bracket(x, y) for x in left.basis for y in right.basis
            ]
            s = Subspace.span(produced, self.dim)
            union(s.genericity)
            return s

        full = Subspace.span(
            [self.basis_vector(k) for k in range(self.dim)], self.dim
        )
        derived = [self.dim]
        current = full
        while True:
            nxt = bracket_span(current, current)
            if nxt.rank == current.rank:
                break  # stabilized (perfect part)
            derived.append(nxt.rank)
            current = nxt
            if nxt.rank == 0:
                break
        lower = [self.dim]
        current = full
        while True:
            nxt = bracket_span(full, current)
            if nxt.rank == current.rank:
                break
            lower.append(nxt.rank)
            current = nxt
            if nxt.rank == 0:
                break
        # center: [x, e_j] = 0 for all j, as a linear system on x
        rows = []
        for j in range(self.dim):
            for k in range(self.dim):
                rows.append(
                    [self.structure_constant(i, j)[k] for i in range(self.dim)]
                )
        result = solve_linear(Matrix(rows), [Scalar.zero()] * len(rows))
        union(result.genericity)
        center = len(result.nullbasis)
        return AlgebraProfile(
            tuple(derived), tuple(lower), center, tuple(genericity)
        )


@dataclass(frozen=True)
class SubalgebraResult:
    """Closure verdict for a subspace under the bracket."""

    kind: str  # "closed" | "not_closed"
    witness: tuple[int, int] | None
    escaping: Vector | None

    @property
    def closed(self) -> bool:
        return self.kind == "closed"


@dataclass(frozen=True)
class AutomorphismResult:
    """Transformed algebra plus the bracket-preservation residual."""

    algebra: LieAlgebra
    residuals: list[Scalar]

    @property
    def is_automorphism(self) -> bool:
        return all(r.is_zero for r in self.residuals)


@dataclass(frozen=True)
class AlgebraProfile:
    derived_dims: tuple[int, ...]
    lower_central_dims: tuple[int, ...]
    center_dim: int
    genericity: tuple[Scalar, ...]


class Subspace:
    """Span of vectors, stored as a reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "rows", "pivots", "genericity")

    def __init__(self, ambient_dim: int, rows, pivots, genericity):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "genericity", genericity)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, vectors: Iterable[Vector], ambient_dim: int) -> "Subspace":
        vecs = list(vectors)
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatch("spanning vector has wrong length")
        if not vecs:
            return cls(ambient_dim, [], [], [])
        echelon, pivots, genericity = _rref(
            [list(v) for v in vecs], ambient_dim
        )
        return cls(ambient_dim, echelon[: len(pivots)], pivots, genericity)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def basis(self) -> list[Vector]:
        return [Vector(row) for row in self.rows]

    def reduce(self, v: Vector) -> Vector:
        """Residual of v after elimination against the echelon basis."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector has wrong length")
        work = list(v)
        for row, p in zip(self.rows, self.pivots):
            factor = work[p]
            if factor.is_zero:
                continue
            work = [w - factor * r for w, r in zip(work, row)]
        return Vector(work)

    def contains(self, v: Vector) -> bool:
        return self.reduce(v).is_zero

    def __repr__(self) -> str:
        return f"Subspace(rank {self.rank} of dim {self.ambient_dim})"
