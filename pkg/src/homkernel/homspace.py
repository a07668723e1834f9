"""Homogeneous pairs: complements, invariant metrics, reductivity.

A pair couples a Lie algebra g with an isotropy subalgebra h and a
distinguished complement m carrying an invariant metric.  The metric is
handed over as a quadratic expression in the dual symbols t1..tn and
expanded mechanically into a Gram matrix, so the builtin tables are
generated rather than typed.

Reductivity is decided exactly: an ad(h)-invariant complement exists iff
the graph of some linear map phi: m -> h is ad(h)-stable, which is a
linear system in the entries of phi because [h, phi(X)] stays inside the
subalgebra h.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cas import Matrix, Poly, Scalar, parse_expr, rational_signature, solve_linear
from .cas.linalg import DimensionMismatch, SingularMatrix
from .families import FamilyData, lookup
from .liealg import LieAlgebra, Subspace, Vector


class DegenerateAtPoint(ValueError):
    """Metric evaluation produced a degenerate symmetric form."""


class DegenerateMetric(ValueError):
    """Gram matrix is singular as a rational function."""


@dataclass(frozen=True)
class FamilyId:
    """Catalog tag plus the sign eta where the family needs one."""

    tag: str
    eta: int | None = None

    _NEEDS_ETA = ("A3",)
    _FIXED_ETA = {"A4": 1, "B2": -1}

    def __post_init__(self):
        tag = self.tag.upper()
        object.__setattr__(self, "tag", tag)
        if tag not in ("A1", "A2", "A3", "A4", "B1", "B2"):
            raise ValueError(f"unknown family tag {self.tag!r}")
        if tag in self._NEEDS_ETA:
            if self.eta not in (1, -1):
                raise ValueError(f"family {tag} needs eta = +1 or -1")
        elif tag in self._FIXED_ETA:
            fixed = self._FIXED_ETA[tag]
            if self.eta is None:
                object.__setattr__(self, "eta", fixed)
            elif self.eta != fixed:
                raise ValueError(f"family {tag} has eta = {fixed:+d}")
        elif self.eta is not None:
            raise ValueError(f"family {tag} takes no eta")

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        cleaned = text.strip().upper().replace(" ", "")
        if cleaned.endswith("+"):
            return cls(cleaned[:-1], +1)
        if cleaned.endswith("-"):
            return cls(cleaned[:-1], -1)
        return cls(cleaned)

    @property
    def registry_key(self) -> str:
        if self.tag == "A3":
            return "A3+" if self.eta == 1 else "A3-"
        return self.tag

    def __str__(self) -> str:
        if self.tag == "A3":
            return "A3+" if self.eta == 1 else "A3-"
        return self.tag


_T_SYMBOLS = ("t1", "t2", "t3", "t4")


def theta_form_to_gram(
    expr: str,
    params: Sequence[str],
    symbols: Sequence[str] = _T_SYMBOLS,
) -> Matrix:
    """Expand a quadratic in the dual symbols into a Gram matrix.

    A cross term ti*tj stands for the symmetric product of the two dual
    one-forms, so its coefficient is split evenly between the (i, j) and
    (j, i) entries; a square ti*ti lands whole on the diagonal.
    """
    n = len(symbols)
    index = {name: k for k, name in enumerate(symbols)}
    value = parse_expr(expr, tuple(params) + tuple(symbols))
    if not value.den.is_constant:
        raise ValueError("dual symbols must not appear in a denominator")
    den = value.den.constant_value()
    gram_polys = [[{} for _ in range(n)] for _ in range(n)]
    for mono, coeff in value.num.terms.items():
        t_part = [(v, e) for v, e in mono if v in index]
        p_part = tuple((v, e) for v, e in mono if v not in index)
        degree = sum(e for _, e in t_part)
        if degree != 2:
            raise ValueError(f"term of degree {degree} in the dual symbols")
        q = Fraction(coeff) / den
        if len(t_part) == 1:
            i = index[t_part[0][0]]
            j = i
            half = q
        else:
            i = index[t_part[0][0]]
            j = index[t_part[1][0]]
            half = q / 2
        for slot in ({(i, j), (j, i)} if i != j else {(i, i)}):
            acc = gram_polys[slot[0]][slot[1]]
            acc[p_part] = acc.get(p_part, Fraction(0)) + half
    return Matrix(
        [[Scalar(Poly(gram_polys[i][j]), Poly.const(1)) for j in range(n)] for i in range(n)]
    )


class InvariantMetric:
    """Symmetric bilinear form on the complement, in u-coordinates."""

    __slots__ = ("gram", "nondegeneracy_condition", "params")

    def __init__(self, gram: Matrix, params: Sequence[str] = ()):
        if gram.nrows != gram.ncols:
            raise DimensionMismatch("Gram matrix must be square")
        if not gram.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")
        det = gram.det()
        if det.is_zero:
            raise DegenerateMetric("metric is degenerate as a rational function")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "nondegeneracy_condition", det)
        object.__setattr__(self, "params", tuple(params))

    def __setattr__(self, name, value):
        raise AttributeError("InvariantMetric is immutable")

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def ip(self, x: Vector, y: Vector) -> Scalar:
        """Inner product of two coordinate vectors."""
        if x.dim != self.dim or y.dim != self.dim:
            raise DimensionMismatch("vector does not match the metric dimension")
        total = Scalar.zero()
        for i in range(self.dim):
            if x[i].is_zero:
                continue
            for j in range(self.dim):
                g = self.gram[i, j]
                if g.is_zero or y[j].is_zero:
                    continue
                total = total + x[i] * g * y[j]
        return total

    def substitute(self, bindings: Mapping[str, Scalar]) -> "InvariantMetric":
        remaining = tuple(p for p in self.params if p not in bindings)
        return InvariantMetric(self.gram.substitute(bindings), remaining)

    def signature_at(self, bindings: Mapping[str, Fraction]) -> tuple[int, int]:
        """Sylvester signature (p, q) at a rational parameter point."""
        rows = self.gram.evaluate(bindings)
        try:
            return rational_signature(rows)
        except ValueError as exc:
            raise DegenerateAtPoint(str(exc)) from exc


class HomogeneousPair:
    """Algebra, isotropy subalgebra, ordered complement, invariant metric."""

    __slots__ = (
        "g",
        "h_vectors",
        "m_vectors",
        "metric",
        "h_space",
        "m_space",
        "family",
        "_adapted_inverse",
    )

    def __init__(
        self,
        g: LieAlgebra,
        h_vectors: Sequence[Vector],
        m_vectors: Sequence[Vector],
        metric: InvariantMetric,
        family: FamilyData | None = None,
    ):
        h_vectors = tuple(h_vectors)
        m_vectors = tuple(m_vectors)
        if len(h_vectors) + len(m_vectors) != g.dim:
            raise DimensionMismatch("h and m dimensions must sum to dim g")
        if metric.dim != len(m_vectors):
            raise DimensionMismatch("metric dimension differs from dim m")
        columns = [list(v) for v in h_vectors] + [list(v) for v in m_vectors]
        adapted = Matrix.from_columns(columns)
        try:
            adapted_inverse = adapted.inverse()
        except SingularMatrix:
            raise ValueError("h and m do not span g independently") from None
        h_space = Subspace.span(h_vectors, g.dim)
        closure = g.is_subalgebra(h_space)
        if not closure.closed:
            a, b = closure.witness
            raise ValueError(f"isotropy is not a subalgebra (pair {a}, {b})")
        m_space = Subspace.span(m_vectors, g.dim)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h_vectors", h_vectors)
        object.__setattr__(self, "m_vectors", m_vectors)
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "h_space", h_space)
        object.__setattr__(self, "m_space", m_space)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "_adapted_inverse", adapted_inverse)

    def __setattr__(self, name, value):
        raise AttributeError("HomogeneousPair is immutable")

    @property
    def dim_h(self) -> int:
        return len(self.h_vectors)

    @property
    def dim_m(self) -> int:
        return len(self.m_vectors)

    def decompose(self, x: Vector) -> tuple[Vector, Vector]:
        """Coordinates (h-part, m-part) of x in the adapted basis."""
        coords = self._adapted_inverse.mat_vec(list(x))
        return Vector(coords[: self.dim_h]), Vector(coords[self.dim_h :])

    def project_m(self, x: Vector) -> Vector:
        """m-component of x, in u-coordinates."""
        return self.decompose(x)[1]

    def project_h(self, x: Vector) -> Vector:
        return self.decompose(x)[0]

    def embed_m(self, coords: Vector) -> Vector:
        """u-coordinates back to a vector of g."""
        if coords.dim != self.dim_m:
            raise DimensionMismatch("coordinate vector has wrong length")
        out = Vector.zero(self.g.dim)
        for c, u in zip(coords, self.m_vectors):
            out = out + u.scale(c)
        return out

    def embed_h(self, coords: Vector) -> Vector:
        if coords.dim != self.dim_h:
            raise DimensionMismatch("coordinate vector has wrong length")
        out = Vector.zero(self.g.dim)
        for c, hv in zip(coords, self.h_vectors):
            out = out + hv.scale(c)
        return out

    def bracket_m(self, xc: Vector, yc: Vector) -> Vector:
        """m-part of the bracket of two complement vectors, u-coordinates."""
        return self.project_m(self.g.bracket(self.embed_m(xc), self.embed_m(yc)))

    def substitute(self, bindings: Mapping[str, Scalar]) -> "HomogeneousPair":
        return HomogeneousPair(
            self.g.substitute(bindings),
            [v.substitute(bindings) for v in self.h_vectors],
            [v.substitute(bindings) for v in self.m_vectors],
            self.metric.substitute(bindings),
            self.family,
        )


def builtin_pair(family: FamilyId | str) -> HomogeneousPair:
    """The catalog pair for one family, with its symbolic metric."""
    fid = FamilyId.parse(family) if isinstance(family, str) else family
    data = lookup(fid.registry_key)
    gram = theta_form_to_gram(data.metric_theta, data.metric_params)
    metric = InvariantMetric(gram, data.metric_params)
    return HomogeneousPair(
        data.algebra(), data.h_basis(), data.m_basis(), metric, family=data
    )


def toy_reductive_pair() -> HomogeneousPair:
    """Rotation algebra with a one-dimensional isotropy; reductive."""
    g = LieAlgebra(
        ("e1", "e2", "e3"),
        {
            (0, 1): (0, 0, 1),
            (1, 2): (1, 0, 0),
            (2, 0): (0, 1, 0),
        },
    )
    metric = InvariantMetric(Matrix.identity(2))
    return HomogeneousPair(
        g,
        [Vector((0, 0, 1))],
        [Vector((1, 0, 0)), Vector((0, 1, 0))],
        metric,
    )


def gram_det(pair: HomogeneousPair) -> Scalar:
    return pair.metric.nondegeneracy_condition


def signature_at(
    pair: HomogeneousPair, bindings: Mapping[str, Fraction]
) -> tuple[int, int]:
    return pair.metric.signature_at(bindings)


@dataclass(frozen=True)
class Reductivity:
    """Outcome of the invariant-complement decision.

    kind "reductive" carries a witness phi (rows indexed by h, columns by
    u); "non_reductive" is certified for every parameter value; kind
    "conditionally_reductive" means the elimination's answer relied on
    the recorded expressions being nonzero, so special parameter values
    need a re-decision after substitution.
    """

    kind: str  # "reductive" | "non_reductive" | "conditionally_reductive"
    phi: Matrix | None = None
    genericity: tuple[Scalar, ...] = ()

    @property
    def reductive(self) -> bool:
        return self.kind == "reductive"


def nonreductivity_decide(pair: HomogeneousPair) -> Reductivity:
    """Decide whether some complement to h is ad(h)-invariant.

    The complement candidates are graphs of linear maps phi: m -> h over
    the fixed m; the stability condition
        [h_k, X]_h + [h_k, phi(X)] - phi([h_k, X]_m) = 0
    is linear in phi because h closes under the bracket.
    """
    dh, dm = pair.dim_h, pair.dim_m
    if dh == 0:
        return Reductivity("reductive", None)
    g = pair.g
    # bracket decompositions, all in adapted coordinates
    hu_h: dict[tuple[int, int], Vector] = {}
    hu_m: dict[tuple[int, int], Vector] = {}
    for k in range(dh):
        for i in range(dm):
            w = g.bracket(pair.h_vectors[k], pair.m_vectors[i])
            hpart, mpart = pair.decompose(w)
            hu_h[(k, i)] = hpart
            hu_m[(k, i)] = mpart
    hh_h: dict[tuple[int, int], Vector] = {}
    for k in range(dh):
        for s in range(dh):
            w = g.bracket(pair.h_vectors[k], pair.h_vectors[s])
            hh_h[(k, s)] = pair.project_h(w)
    # unknown phi_{s,i} = h_s-component of phi(u_i), flattened s*dm + i
    rows: list[list[Scalar]] = []
    rhs: list[Scalar] = []
    n_unknowns = dh * dm
    for k in range(dh):
        for i in range(dm):
            for c in range(dh):
                row = [Scalar.zero()] * n_unknowns
                for s in range(dh):
                    row[s * dm + i] = row[s * dm + i] + hh_h[(k, s)][c]
                mu = hu_m[(k, i)]
                for j in range(dm):
                    row[c * dm + j] = row[c * dm + j] - mu[j]
                rows.append(row)
                rhs.append(-hu_h[(k, i)][c])
    result = solve_linear(Matrix(rows), rhs)
    genericity = tuple(result.genericity)
    if result.kind == "inconsistent":
        witness_ok = not genericity
        if witness_ok and result.witness is not None and result.witness.is_constant:
            return Reductivity("non_reductive")
        extra = ()
        if result.witness is not None and not result.witness.is_constant:
            extra = (result.witness,)
        return Reductivity("conditionally_reductive", None, genericity + extra)
    solution = result.solution
    phi = Matrix(
        [[solution[s * dm + i] for i in range(dm)] for s in range(dh)]
    )
    if genericity:
        return Reductivity("conditionally_reductive", phi, genericity)
    return Reductivity("reductive", phi)
