"""Canonical connection and curvature of a metric homogeneous pair.

The connection map lambda sends each algebra element X to a matrix acting
on complement coordinates, determined by

    <lambda(X)Y, Z> = (1/2)(<[X,Y]_m, Z> + <[Z,X]_m, Y> + <[Z,Y]_m, X_m>)

for Y, Z in the complement.  Column j of the matrix holds the coordinates
of lambda(X)u_j.  Curvature pairs are

    R(X, Y) = [lambda(X), lambda(Y)] - lambda([X, Y])

where the bracket on the right is taken in the full algebra, so the
isotropy part of [X, Y] contributes through lambda restricted to h.

Sign conventions, fixed here once: ricci(X, Y) is the trace of the map
Z -> R(Z, X)Y over the complement basis, and the scalar curvature is the
metric contraction of ricci.  With these choices a metric of constant
sectional curvature k has scalar curvature 12k in dimension four.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cas.linalg import Matrix, SingularMatrix
from .cas.scalar import Scalar
from .homspace import HomogeneousPair
from .liealg import Vector

__all__ = [
    "SingularGram",
    "ConnectionData",
    "compute_lambda",
    "connection_axiom_residuals",
    "CurvatureData",
    "curvature",
    "pair_symmetry_residuals",
    "curvature_invariants",
    "ConstantCurvature",
    "NotConstant",
    "constant_curvature_fit",
    "locally_symmetric_residual",
]

_HALF = Scalar.from_fraction(Fraction(1, 2))


class SingularGram(ValueError):
    """The metric Gram matrix admits no inverse."""


def _unit(dim: int, i: int) -> Vector:
    return Vector([1 if k == i else 0 for k in range(dim)])


class ConnectionData:
    """Connection matrices, one per algebra basis element."""

    __slots__ = ("pair", "by_basis", "_on_m")

    def __init__(self, pair: HomogeneousPair, by_basis):
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "by_basis", tuple(by_basis))
        object.__setattr__(
            self,
            "_on_m",
            tuple(self.of_vector(u) for u in pair.m_vectors),
        )

    def __setattr__(self, name, value):
        raise AttributeError("ConnectionData is immutable")

    def of_vector(self, x: Vector) -> Matrix:
        """lambda(x) for any algebra vector, by linearity."""
        dm = self.pair.dim_m
        out = Matrix.zero(dm, dm)
        for coord, mat in zip(x, self.by_basis):
            if coord.is_zero:
                continue
            out = out + coord * mat
        return out

    def on_complement(self, i: int) -> Matrix:
        """lambda(u_i) for the i-th complement basis vector."""
        return self._on_m[i]

    def apply(self, x_coords: Vector, y_coords: Vector) -> Vector:
        """lambda(x)y for complement coordinate vectors x and y."""
        mat = self.of_vector(self.pair.embed_m(x_coords))
        return Vector(mat.mat_vec(list(y_coords)))


def compute_lambda(pair: HomogeneousPair) -> ConnectionData:
    """Solve the Gram system for the connection matrix of every basis element."""
    g = pair.g
    dm = pair.dim_m
    gram = pair.metric.gram
    try:
        ginv = gram.inverse()
    except SingularMatrix as exc:
        raise SingularGram("metric Gram matrix is singular") from exc
    mm = [
        [pair.project_m(g.bracket(pair.m_vectors[l], pair.m_vectors[j])) for j in range(dm)]
        for l in range(dm)
    ]
    by_basis = []
    for k in range(g.dim):
        x = _unit(g.dim, k)
        xm = pair.project_m(x)
        xu = [pair.project_m(g.bracket(x, pair.m_vectors[j])) for j in range(dm)]
        w = [gram.mat_vec(list(xu[j])) for j in range(dm)]
        rows = []
        for l in range(dm):
            row = []
            for j in range(dm):
                term = w[j][l] - w[l][j] + pair.metric.ip(mm[l][j], xm)
                row.append(_HALF * term)
            rows.append(row)
        by_basis.append(ginv * Matrix(rows))
    return ConnectionData(pair, by_basis)


def connection_axiom_residuals(pair: HomogeneousPair, conn: ConnectionData) -> dict:
    """Torsion, metric-compatibility, and isotropy residuals; all must vanish."""
    dm = pair.dim_m
    units = [_unit(dm, i) for i in range(dm)]
    torsion = {}
    for i in range(dm):
        for j in range(i + 1, dm):
            li = Vector(conn.on_complement(i).column(j))
            lj = Vector(conn.on_complement(j).column(i))
            torsion[(i, j)] = li - lj - pair.bracket_m(units[i], units[j])
    compat = {}
    for k in range(pair.g.dim):
        mat = conn.by_basis[k]
        for i in range(dm):
            for j in range(i, dm):
                left = pair.metric.ip(Vector(mat.column(i)), units[j])
                right = pair.metric.ip(units[i], Vector(mat.column(j)))
                compat[(k, i, j)] = left + right
    isotropy = {}
    for k, hv in enumerate(pair.h_vectors):
        cols = [list(pair.project_m(pair.g.bracket(hv, u))) for u in pair.m_vectors]
        isotropy[k] = conn.of_vector(hv) - Matrix.from_columns(cols)
    return {"torsion": torsion, "compat": compat, "isotropy": isotropy}


class CurvatureData:
    """Curvature pair-matrices R(u_i, u_j) for i < j, with Bianchi residuals."""

    __slots__ = ("pair", "table", "bianchi")

    def __init__(self, pair: HomogeneousPair, table):
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "table", dict(table))
        dm = pair.dim_m
        residuals = []
        for i in range(dm):
            for j in range(i + 1, dm):
                for k in range(j + 1, dm):
                    total = (
                        Vector(self.matrix(i, j).column(k))
                        + Vector(self.matrix(j, k).column(i))
                        + Vector(self.matrix(k, i).column(j))
                    )
                    residuals.append(((i, j, k), total))
        object.__setattr__(self, "bianchi", tuple(residuals))

    def __setattr__(self, name, value):
        raise AttributeError("CurvatureData is immutable")

    def matrix(self, i: int, j: int) -> Matrix:
        """R(u_i, u_j), antisymmetric in the arguments."""
        if i == j:
            return Matrix.zero(self.pair.dim_m, self.pair.dim_m)
        if i < j:
            return self.table[(i, j)]
        return -self.table[(j, i)]

    def of_vectors(self, xc: Vector, yc: Vector) -> Matrix:
        """R(x, y) for complement coordinate vectors, by bilinearity."""
        dm = self.pair.dim_m
        out = Matrix.zero(dm, dm)
        for (i, j), mat in self.table.items():
            coeff = xc[i] * yc[j] - xc[j] * yc[i]
            if coeff.is_zero:
                continue
            out = out + coeff * mat
        return out


def curvature(pair: HomogeneousPair, conn: ConnectionData) -> CurvatureData:
    """All pair-matrices R(u_i, u_j) = [lambda(u_i), lambda(u_j)] - lambda([u_i, u_j])."""
    dm = pair.dim_m
    table = {}
    for i in range(dm):
        for j in range(i + 1, dm):
            li = conn.on_complement(i)
            lj = conn.on_complement(j)
            br = pair.g.bracket(pair.m_vectors[i], pair.m_vectors[j])
            table[(i, j)] = li.commutator(lj) - conn.of_vector(br)
    return CurvatureData(pair, table)


def pair_symmetry_residuals(pair: HomogeneousPair, curv: CurvatureData) -> dict:
    """<R(X,Y)Z, W> - <R(Z,W)X, Y> over basis tuples; zero for a metric connection."""
    dm = pair.dim_m
    units = [_unit(dm, i) for i in range(dm)]
    out = {}
    for i in range(dm):
        for j in range(i + 1, dm):
            for k in range(dm):
                for l in range(k + 1, dm):
                    if (k, l) < (i, j):
                        continue
                    left = pair.metric.ip(Vector(curv.matrix(i, j).column(k)), units[l])
                    right = pair.metric.ip(Vector(curv.matrix(k, l).column(i)), units[j])
                    out[(i, j, k, l)] = left - right
    return out


def curvature_invariants(pair: HomogeneousPair, curv: CurvatureData) -> dict:
    """Ricci matrix and scalar curvature under the conventions fixed above."""
    dm = pair.dim_m
    ric_rows = []
    for i in range(dm):
        row = []
        for j in range(dm):
            total = Scalar.zero()
            for k in range(dm):
                total = total + curv.matrix(k, i)[k, j]
            row.append(total)
        ric_rows.append(row)
    ricci = Matrix(ric_rows)
    ginv = pair.metric.gram.inverse()
    scalar = (ginv * ricci).trace()
    return {"ricci": ricci, "scalar": scalar}


@dataclass(frozen=True)
class ConstantCurvature:
    """Successful sectional-curvature fit with the fitted constant."""

    k: Scalar


@dataclass(frozen=True)
class NotConstant:
    """A basis triple where the constant-curvature form fails, with residual."""

    witness: tuple
    residual: Scalar


def constant_curvature_fit(pair: HomogeneousPair, curv: CurvatureData):
    """Fit R(X,Y)Z = k(<Y,Z>X - <X,Z>Y) over all basis triples, linear in k."""
    dm = pair.dim_m
    gram = pair.metric.gram
    equations = []
    for i in range(dm):
        for j in range(i + 1, dm):
            mat = curv.matrix(i, j)
            for l in range(dm):
                for c in range(dm):
                    coeff = Scalar.zero()
                    if c == i:
                        coeff = coeff + gram[j, l]
                    if c == j:
                        coeff = coeff - gram[i, l]
                    equations.append(((i, j, l, c), coeff, mat[c, l]))
    pivot = None
    for eq in equations:
        if eq[1].is_constant and not eq[1].is_zero:
            pivot = eq
            break
    if pivot is None:
        for eq in equations:
            if not eq[1].is_zero:
                pivot = eq
                break
    if pivot is None:
        for key, _, val in equations:
            if not val.is_zero:
                return NotConstant(key, val)
        return ConstantCurvature(Scalar.zero())
    k = pivot[2] / pivot[1]
    for key, coeff, val in equations:
        residual = val - k * coeff
        if not residual.is_zero:
            return NotConstant(key, residual)
    return ConstantCurvature(k)


def locally_symmetric_residual(
    pair: HomogeneousPair,
    conn: ConnectionData,
    curv: Optional[CurvatureData] = None,
) -> dict:
    """Derivation action of lambda on R; vanishes for all m-directions iff
    the curvature is invariant under the connection flow.

    The matching residuals for isotropy directions must vanish
    unconditionally; a failure there means the data is inconsistent.
    """
    if curv is None:
        curv = curvature(pair, conn)
    dm = pair.dim_m
    units = [_unit(dm, i) for i in range(dm)]

    def residual(lam: Matrix, i: int, j: int) -> Matrix:
        rij = curv.matrix(i, j)
        out = lam * rij - rij * lam
        out = out - curv.of_vectors(Vector(lam.column(i)), units[j])
        out = out - curv.of_vectors(units[i], Vector(lam.column(j)))
        return out

    for hv in pair.h_vectors:
        lam_h = conn.of_vector(hv)
        for i in range(dm):
            for j in range(i + 1, dm):
                if not residual(lam_h, i, j).is_zero():
                    raise ArithmeticError(
                        "curvature is not equivariant under the isotropy action"
                    )
    out = {}
    for k in range(dm):
        lam = conn.on_complement(k)
        for i in range(dm):
            for j in range(i + 1, dm):
                out[(k, i, j)] = residual(lam, i, j)
    return out
