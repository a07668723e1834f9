"""Invariant hypersurface analysis: normals, frames, shape operators.

A hypersurface candidate is a unit normal xi in the complement with
<xi, xi> = eps (eps = +1 or -1) together with a tangent frame V1, V2, V3
spanning the orthogonal complement of xi.  Everything here works over
the exact scalar field and treats frame coordinates as constants, so
directional-derivative terms vanish throughout.

Conventions.  The shape operator is S(V) = -lambda(V) xi and the scalar
second fundamental form is h(V_i, V_j) = eps <lambda(V_i) V_j, xi>; the
two are linked by <S V_i, V_j> = eps h(V_i, V_j).  The tangential
projection is tan(W) = W - eps <W, xi> xi.  A candidate passes the
algebraic Codazzi test when R(V_i, V_j) xi = 0 for all frame pairs; the
displayed case frames realize every such candidate with constant
coordinates (after the quoted eliminations make the unit-norm equation
an identity), and no constant candidate exists at all over the families
whose case table is empty.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence

from .cas import Matrix, Poly, Scalar, SingularMatrix, nullspace, solve_linear
from .connection import ConnectionData, CurvatureData, compute_lambda, curvature
from .homspace import DegenerateMetric, FamilyId, HomogeneousPair, InvariantMetric
from .liealg import LieAlgebra, Vector


class NotFamilyA2(ValueError):
    """The pair is not an A2 pair in the family metric form."""


class SymmetricLocus(ValueError):
    """The metric sits on the locally symmetric locus b = 0."""


class CaseConstraintViolated(ValueError):
    """A displayed-case constraint fails; carries the constraint and residual."""

    def __init__(self, constraint: str, residual: Scalar):
        self.constraint = constraint
        self.residual = residual
        super().__init__(f"case constraint {constraint} fails (residual {residual})")


class DegenerateFrame(ValueError):
    """Tangent frame is not orthogonal to xi, not rank 3, or metrically degenerate."""


class NormalComponentNonzero(ValueError):
    """A shape-operator image left the tangent space."""


class FrameGramSingular(ValueError):
    """The 3x3 frame Gram matrix is singular, blocking the frame solve."""


class NotASubalgebra(ValueError):
    """The frame span is not closed under the bracket."""


class InducedMetricDegenerate(ValueError):
    """The metric restricted to the frame span is degenerate."""


_ETA = {"A3+": 1, "A3-": -1, "A4": 1, "B2": -1}

_CASE_BASE = {"A2": "A2", "A3+": "A3", "A3-": "A3", "A4": "A4", "B2": "A4"}

_SLOT_NAMES = ("alpha", "beta", "gamma", "delta")


def _frac(value) -> Scalar:
    return value if isinstance(value, Scalar) else Scalar.from_fraction(value)


class NormalField:
    """Constant-coordinate normal with exactly unit (timelike or spacelike) norm."""

    __slots__ = ("pair", "xi", "eps")

    def __init__(self, pair: HomogeneousPair, xi: Vector, eps: int):
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if xi.dim != pair.dim_m:
            raise ValueError("normal must be a complement coordinate vector")
        norm = pair.metric.ip(xi, xi)
        residual = norm - Scalar.from_fraction(eps)
        if not residual.is_zero:
            raise ValueError(
                f"<xi, xi> - ({eps:+d}) = {residual} does not vanish; "
                "bind the coordinates so the unit-norm equation is exact"
            )
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eps", eps)

    def __setattr__(self, name, value):
        raise AttributeError("NormalField is immutable")


class TangentFrame:
    """Three frame vectors spanning the orthogonal complement of the normal."""

    __slots__ = ("normal", "vectors", "gram")

    def __init__(self, normal: NormalField, vectors: Sequence[Vector]):
        pair = normal.pair
        vectors = tuple(vectors)
        if len(vectors) != pair.dim_m - 1:
            raise DegenerateFrame("a tangent frame needs dim(m) - 1 vectors")
        for idx, v in enumerate(vectors):
            overlap = pair.metric.ip(v, normal.xi)
            if not overlap.is_zero:
                raise DegenerateFrame(
                    f"frame vector {idx + 1} is not orthogonal to the normal "
                    f"(<V, xi> = {overlap})"
                )
        # independence is implied by nondegeneracy of the restricted metric,
        # so a single Gram inversion covers both checks
        gram = _frame_gram(pair, vectors)
        try:
            gram.inverse()
        except SingularMatrix:
            raise DegenerateFrame(
                "the metric restricted to the frame span is degenerate"
            ) from None
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "gram", gram)

    def __setattr__(self, name, value):
        raise AttributeError("TangentFrame is immutable")


@dataclass(frozen=True)
class ShapeData:
    """Shape operator in frame coordinates and the scalar second fundamental form."""

    S: Matrix
    h2ff: Matrix


@dataclass(frozen=True)
class Phi:
    """The scalar invariant controlling a case's parallel condition."""

    value: Scalar


@dataclass(frozen=True)
class ParallelData:
    """Covariant-derivative residuals of S with the derived classification flags."""

    residuals: Mapping[tuple[int, int], Vector]
    totally_geodesic: bool
    parallel: bool

    @property
    def proper_parallel(self) -> bool:
        return self.parallel and not self.totally_geodesic


def _frame_gram(pair: HomogeneousPair, vectors: Sequence[Vector]) -> Matrix:
    return Matrix(
        [[pair.metric.ip(v, w) for w in vectors] for v in vectors]
    )


def _symbols_of(matrix: Matrix) -> set[str]:
    names: set[str] = set()
    for i in range(matrix.nrows):
        for j in range(matrix.ncols):
            names |= matrix[i, j].variables()
    return names


def _exact_sqrt(value: Scalar, symbol: str) -> tuple[Scalar, dict[str, Scalar]]:
    """Square root of a metric coefficient, adjoining a symbol if needed.

    A plain parameter p maps to a fresh symbol s with the binding p -> s^2,
    so every later cancellation is rational.  A positive perfect-square
    rational takes its literal root.  Anything else is out of reach for an
    exact kernel and is rejected.
    """
    names = value.variables()
    if len(names) == 1:
        (name,) = names
        if value == Scalar(Poly.var(name)):
            root = Scalar(Poly.var(symbol))
            return root, {name: root * root}
    if value.is_constant:
        q = value.constant_value()
        if q > 0:
            num, den = q.numerator, q.denominator
            rn, rd = isqrt(num), isqrt(den)
            if rn * rn == num and rd * rd == den:
                return Scalar.from_fraction(Fraction(rn, rd)), {}
        raise ValueError(
            f"no exact square root of {q}; bind the coefficient to a "
            "positive perfect square or leave it symbolic"
        )
    raise ValueError(
        "metric coefficient must be a plain parameter or a perfect-square "
        "rational to normalize exactly"
    )


def _a2_form_values(gram: Matrix) -> tuple[Scalar, Scalar, Scalar, Scalar] | None:
    """Read (a, b, c, d) off an A2-form Gram matrix, or None if malformed."""
    a = gram[1, 1]
    b = gram[2, 2]
    c = gram[2, 3]
    d = gram[3, 3]
    zero = Scalar.zero()
    template = [
        [zero, zero, -a, zero],
        [zero, a, zero, zero],
        [-a, zero, b, c],
        [zero, zero, c, d],
    ]
    for i in range(4):
        for j in range(4):
            if gram[i, j] != template[i][j]:
                return None
    return a, b, c, d


_A2_NORMALIZED_TEMPLATE = (
    (0, 0, -1, 0),
    (0, 1, 0, 0),
    (-1, 0, 1, 0),
)


def _a2_is_normalized(gram: Matrix) -> bool:
    for i, row in enumerate(_A2_NORMALIZED_TEMPLATE):
        for j, value in enumerate(row):
            if gram[i, j] != Scalar.from_fraction(value):
                return False
    return all(gram[3, j].is_zero for j in range(3))


def normalize_A2_metric(pair: HomogeneousPair) -> tuple[HomogeneousPair, Matrix]:
    """Pull an A2 metric back to the one-parameter form a = b = 1, c = 0.

    Returns the renormalized pair together with the complement automorphism
    realizing the congruence; the d coefficient and the structure constant
    survive unchanged.  On the b = 0 locus no such pullback exists and
    SymmetricLocus is raised instead.
    """
    fam = pair.family
    if fam is None or fam.key != "A2":
        raise NotFamilyA2("normalization is defined for A2 pairs only")
    gram = pair.metric.gram
    values = _a2_form_values(gram)
    if values is None:
        raise NotFamilyA2("metric Gram matrix is not in the A2 family form")
    a_v, b_v, c_v, d_v = values
    if b_v.is_zero:
        raise SymmetricLocus(
            "b = 0 is the locally symmetric locus; the pullback divides by b"
        )
    if _a2_is_normalized(gram):
        return pair, Matrix.identity(4)
    taken = _symbols_of(gram)
    sym_a = "sa" if "sa" not in taken else "sa0"
    sym_b = "sb" if "sb" not in taken else "sb0"
    root_a, binds_a = _exact_sqrt(a_v, sym_a)
    root_b, binds_b = _exact_sqrt(b_v, sym_b)
    binds = {**binds_a, **binds_b}
    gram_s = gram.substitute(binds) if binds else gram
    a_sq = root_a * root_a
    c_s = c_v.substitute(binds) if binds else c_v
    one = Scalar.one()
    zero = Scalar.zero()
    auto = Matrix(
        [
            [root_b / a_sq, zero, zero, c_s / a_sq],
            [zero, one / root_a, zero, zero],
            [zero, zero, one / root_b, zero],
            [zero, zero, zero, one],
        ]
    )
    pulled = auto.transpose() * gram_s * auto
    d_s = d_v.substitute(binds) if binds else d_v
    expected = Matrix(
        [
            [zero, zero, -one, zero],
            [zero, one, zero, zero],
            [-one, zero, one, zero],
            [zero, zero, zero, d_s],
        ]
    )
    if pulled != expected:
        raise ArithmeticError("metric pullback failed to land on the reduced form")
    algebra = fam.m_algebra()
    if algebra is not None and not algebra.apply_automorphism(auto).is_automorphism:
        raise ArithmeticError("pullback matrix is not a complement automorphism")
    params = tuple(p for p in pair.metric.params if p not in ("a", "b", "c"))
    metric = InvariantMetric(expected, params)
    normalized = HomogeneousPair(
        pair.g, pair.h_vectors, pair.m_vectors, metric, family=fam
    )
    return normalized, auto


@dataclass(frozen=True)
class CaseSpec:
    """One displayed hypersurface case: vanishing pattern plus eliminations."""

    family: str
    tag: str
    zero_slots: tuple[int, ...]
    nonzero_slots: tuple[int, ...]
    kappa: Fraction | None = None


_CASES = {
    ("A2", "i"): CaseSpec("A2", "i", (1, 2), (3,)),
    ("A2", "ii"): CaseSpec("A2", "ii", (2, 3), (1,)),
    ("A2", "iii"): CaseSpec("A2", "iii", (2,), (1, 3), kappa=Fraction(2)),
    ("A3", "i"): CaseSpec("A3", "i", (2, 3), (1,)),
    ("A3", "ii"): CaseSpec("A3", "ii", (1, 3), (2,)),
    ("A4", "i"): CaseSpec("A4", "i", (0, 1), (3,)),
    ("A4", "ii"): CaseSpec("A4", "ii", (1, 3), (0,)),
}


def case_table(fid: FamilyId | str) -> tuple[str, ...]:
    """Case tags available for a family; empty when no candidate survives."""
    base = _CASE_BASE.get(_registry_key(fid))
    if base is None:
        return ()
    return tuple(tag for (fam, tag) in sorted(_CASES) if fam == base)


def case_spec(fid: FamilyId | str, case: str) -> CaseSpec:
    """The vanishing pattern record behind one case tag."""
    return _case_for(fid, case)[0]


def _registry_key(fid: FamilyId | str) -> str:
    if isinstance(fid, str):
        fid = FamilyId.parse(fid)
    return fid.registry_key


def _case_for(fid: FamilyId | str, case: str) -> tuple[CaseSpec, str]:
    key = _registry_key(fid)
    base = _CASE_BASE.get(key)
    if base is None:
        raise ValueError(
            f"family {key} admits no such hypersurface: no case table exists"
        )
    try:
        return _CASES[(base, case)], key
    except KeyError:
        tags = ", ".join(case_table(key))
        raise ValueError(f"unknown case {case!r} for {key} (have: {tags})") from None


def _structure_kappa(pair: HomogeneousPair) -> Scalar:
    """Coefficient of u2 in [u2, u4], the one free structure constant."""
    dm = pair.dim_m
    bracket = pair.bracket_m(Vector.basis(dm, 1), Vector.basis(dm, 3))
    return bracket[1]


def case_eliminations(
    fid: FamilyId | str, case: str, eps: int, coords: Sequence[Scalar]
) -> dict[str, Scalar]:
    """Metric-parameter bindings that turn the unit-norm equation into an identity."""
    spec, key = _case_for(fid, case)
    eps_s = Scalar.from_fraction(eps)
    alpha, beta, gamma, delta = coords
    if spec.family == "A2":
        if spec.tag == "i":
            return {"d": eps_s / (delta * delta)}
        if spec.tag == "ii":
            return {}
        return {"d": (eps_s - beta * beta) / (delta * delta)}
    if spec.family == "A3":
        if spec.tag == "i":
            return {"a": eps_s / (beta * beta)}
        return {"b": eps_s / (gamma * gamma)}
    if spec.tag == "i":
        return {"a": (eps_s + eps_s) / (delta * delta)}
    eta = Scalar.from_fraction(_ETA[key])
    return {"a": eps_s * eta / (alpha * alpha)}


def normal_for_case(
    pair: HomogeneousPair,
    fid: FamilyId | str,
    case: str,
    eps: int,
    coords: Sequence,
) -> tuple[HomogeneousPair, NormalField]:
    """Bind a pair to a case and build the unit normal in one step.

    The returned pair carries the case's metric eliminations (and, for the
    kappa-pinned case, the structure constant); the NormalField is exact
    against it.  Coordinates may be symbols or rationals.
    """
    spec, _ = _case_for(fid, case)
    coords = [_frac(c) for c in coords]
    for slot in spec.zero_slots:
        if not coords[slot].is_zero:
            raise CaseConstraintViolated(f"{_SLOT_NAMES[slot]} = 0", coords[slot])
    for slot in spec.nonzero_slots:
        if coords[slot].is_zero:
            raise CaseConstraintViolated(f"{_SLOT_NAMES[slot]} != 0", coords[slot])
    binds = dict(case_eliminations(fid, case, eps, coords))
    if spec.kappa is not None:
        binds["k"] = Scalar.from_fraction(spec.kappa)
    bound = pair.substitute(binds) if binds else pair
    return bound, NormalField(bound, Vector(coords), eps)


def frame_for_case(
    fid: FamilyId | str, case: str, xi: NormalField
) -> TangentFrame:
    """The displayed tangent frame for one case of one family.

    Validates the case's vanishing pattern (and the pinned structure
    constant where one is required) before building the frame, so a
    mismatched normal fails with the violated constraint rather than with
    a downstream degeneracy.
    """
    spec, key = _case_for(fid, case)
    pair = xi.pair
    coords = list(xi.xi)
    alpha, beta, gamma, delta = coords
    for slot in spec.zero_slots:
        if not coords[slot].is_zero:
            raise CaseConstraintViolated(f"{_SLOT_NAMES[slot]} = 0", coords[slot])
    for slot in spec.nonzero_slots:
        if coords[slot].is_zero:
            raise CaseConstraintViolated(f"{_SLOT_NAMES[slot]} != 0", coords[slot])
    if spec.kappa is not None:
        kappa = _structure_kappa(pair)
        residual = kappa - Scalar.from_fraction(spec.kappa)
        if not residual.is_zero:
            raise CaseConstraintViolated(f"kappa = {spec.kappa}", residual)
    gram = pair.metric.gram
    dm = pair.dim_m
    unit = [Vector.basis(dm, i) for i in range(dm)]
    if spec.family == "A2":
        if not _a2_is_normalized(gram):
            raise CaseConstraintViolated(
                "metric in the reduced form a = b = 1, c = 0 "
                "(apply normalize_A2_metric first)",
                gram[2, 2] - Scalar.one(),
            )
        d = gram[3, 3]
        if spec.tag == "i":
            vectors = [unit[0], unit[1], unit[2].scale(d * delta) + unit[3].scale(alpha)]
        elif spec.tag == "ii":
            vectors = [unit[0], unit[1].scale(alpha) + unit[2].scale(beta), unit[3]]
        else:
            vectors = [
                unit[0],
                unit[1].scale(d * delta) - unit[3].scale(beta),
                unit[1].scale(alpha) + unit[2].scale(beta),
            ]
    elif spec.family == "A3":
        a, b, c = gram[0, 3], gram[2, 2], gram[2, 3]
        if spec.tag == "i":
            vectors = [unit[0], unit[2], unit[1].scale(alpha) - unit[3].scale(beta)]
        else:
            vectors = [
                unit[0],
                unit[1],
                unit[2].scale(a * alpha + c * gamma) - unit[3].scale(b * gamma),
            ]
    else:
        eta = Scalar.from_fraction(_ETA[key])
        a = gram[1, 2]
        if gram[0, 0] != eta * a:
            raise CaseConstraintViolated("metric matches the family sign", gram[0, 0] - eta * a)
        if spec.tag == "i":
            vectors = [
                unit[0],
                unit[1].scale(delta) - unit[3].scale(gamma + gamma),
                unit[2],
            ]
        else:
            vectors = [
                unit[3],
                unit[0].scale(gamma) - unit[1].scale(eta * alpha),
                unit[2],
            ]
    return TangentFrame(xi, vectors)


def case_phi(fid: FamilyId | str, case: str, xi: NormalField) -> Phi:
    """The scalar invariant whose vanishing locus enters a case's classification."""
    spec, key = _case_for(fid, case)
    alpha, beta, gamma, delta = list(xi.xi)
    gram = xi.pair.metric.gram
    eps_s = Scalar.from_fraction(xi.eps)
    if (spec.family, spec.tag) == ("A2", "i"):
        return Phi(alpha * alpha - eps_s)
    if (spec.family, spec.tag) == ("A3", "ii"):
        a, b, c, d = gram[0, 3], gram[2, 2], gram[2, 3], gram[3, 3]
        return Phi(
            a * alpha * alpha
            + (c + c) * alpha * gamma
            + ((c * c - b * d) / a) * gamma * gamma
        )
    if (spec.family, spec.tag) == ("A4", "ii"):
        eta = Scalar.from_fraction(_ETA[key])
        a, b = gram[1, 2], gram[1, 1]
        return Phi(gamma * gamma - eta * alpha * alpha * b / a)
    raise ValueError(f"case {case!r} of {spec.family} has no phi invariant")


def orthogonal_frame(pair: HomogeneousPair, xi: NormalField) -> TangentFrame:
    """A generic tangent frame from the nullspace of the normal's metric row."""
    row = pair.metric.gram.mat_vec(list(xi.xi))
    basis, _ = nullspace(Matrix([row]))
    return TangentFrame(xi, [Vector(v) for v in basis])


def codazzi_residual(
    pair: HomogeneousPair,
    conn: ConnectionData,
    xi: NormalField,
    frame: TangentFrame,
    curv: CurvatureData | None = None,
) -> dict[tuple[int, int], Vector]:
    """The three vectors R(V_i, V_j) xi; all vanish iff the candidate passes."""
    if curv is None:
        curv = curvature(pair, conn)
    out = {}
    vs = frame.vectors
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            mat = curv.of_vectors(vs[i], vs[j])
            out[(i, j)] = Vector(mat.mat_vec(list(xi.xi)))
    return out


def shape_operator(
    pair: HomogeneousPair,
    conn: ConnectionData,
    xi: NormalField,
    frame: TangentFrame,
) -> ShapeData:
    """Shape operator S(V) = -lambda(V) xi, solved into frame coordinates.

    The image of each frame vector is checked to be tangent; the frame
    Gram system then yields the coordinate matrix, cross-checked against
    the second fundamental form through <S V_i, V_j> = eps h(V_i, V_j).
    """
    vs = frame.vectors
    eps_s = Scalar.from_fraction(xi.eps)
    images = []
    for idx, v in enumerate(vs):
        w = -conn.apply(v, xi.xi)
        overlap = pair.metric.ip(w, xi.xi)
        if not overlap.is_zero:
            raise NormalComponentNonzero(
                f"S(V{idx + 1}) has normal component {overlap}"
            )
        images.append(w)
    gram = _frame_gram(pair, vs)
    try:
        gram_inv = gram.inverse()
    except SingularMatrix:
        raise FrameGramSingular("frame Gram matrix is singular") from None
    columns = [
        gram_inv.mat_vec([pair.metric.ip(w, v) for v in vs]) for w in images
    ]
    shape = Matrix.from_columns(columns)
    h2ff = Matrix(
        [
            [eps_s * pair.metric.ip(conn.apply(vi, vj), xi.xi) for vj in vs]
            for vi in vs
        ]
    )
    for i in range(len(vs)):
        for j in range(len(vs)):
            lhs = sum(
                (shape[k, i] * gram[k, j] for k in range(len(vs))), Scalar.zero()
            )
            if lhs != eps_s * h2ff[i, j]:
                raise ArithmeticError(
                    "shape operator and second fundamental form disagree"
                )
    return ShapeData(S=shape, h2ff=h2ff)


def self_adjoint_residual(
    pair: HomogeneousPair, frame: TangentFrame, shape: ShapeData
) -> Matrix:
    """<S V_i, V_j> - <V_i, S V_j> as a 3x3 matrix; symmetric S gives zero."""
    gram = _frame_gram(pair, frame.vectors)
    product = shape.S.transpose() * gram
    return product - product.transpose()


def _tangential(pair: HomogeneousPair, xi: NormalField, w: Vector) -> Vector:
    overlap = pair.metric.ip(w, xi.xi)
    if overlap.is_zero:
        return w
    return w - xi.xi.scale(Scalar.from_fraction(xi.eps) * overlap)


def parallel_residual(
    pair: HomogeneousPair,
    conn: ConnectionData,
    xi: NormalField,
    frame: TangentFrame,
    shape: ShapeData,
) -> ParallelData:
    """Residuals tan(lambda(V_i) S V_j) - S tan(lambda(V_i) V_j) with flags.

    All residuals vanish exactly when S is parallel for the induced
    connection; a zero S is flagged totally geodesic, and parallel with
    nonzero S is proper parallel.
    """
    vs = frame.vectors
    n = len(vs)
    gram = _frame_gram(pair, vs)
    try:
        gram_inv = gram.inverse()
    except SingularMatrix:
        raise FrameGramSingular("frame Gram matrix is singular") from None
    shaped = []
    for j in range(n):
        total = Vector.zero(pair.dim_m)
        for k in range(n):
            coeff = shape.S[k, j]
            if not coeff.is_zero:
                total = total + vs[k].scale(coeff)
        shaped.append(total)
    residuals = {}
    for i in range(n):
        for j in range(n):
            first = _tangential(pair, xi, conn.apply(vs[i], shaped[j]))
            flat = _tangential(pair, xi, conn.apply(vs[i], vs[j]))
            tau = gram_inv.mat_vec([pair.metric.ip(flat, v) for v in vs])
            mapped = shape.S.mat_vec(tau)
            second = Vector.zero(pair.dim_m)
            for k in range(n):
                if not mapped[k].is_zero:
                    second = second + vs[k].scale(mapped[k])
            residuals[(i, j)] = first - second
    geodesic = shape.S.is_zero()
    parallel = all(v.is_zero for v in residuals.values())
    return ParallelData(
        residuals=residuals, totally_geodesic=geodesic, parallel=parallel
    )


def intrinsic_geometry(
    pair: HomogeneousPair, frame: TangentFrame
) -> tuple[HomogeneousPair, ConnectionData, CurvatureData]:
    """The frame span as a three-dimensional pair with its own geometry.

    Requires the embedded frame to close under the bracket; the induced
    metric must restrict nondegenerately.  The returned pair has trivial
    isotropy, so its connection and curvature come from the same engine
    as the ambient ones.
    """
    vs = frame.vectors
    embedded = [pair.embed_m(v) for v in vs]
    span = Matrix.from_columns([list(v) for v in embedded])
    brackets = {}
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            w = pair.g.bracket(embedded[i], embedded[j])
            result = solve_linear(span, list(w))
            if not result.solvable:
                raise NotASubalgebra(
                    f"[V{i + 1}, V{j + 1}] leaves the frame span"
                )
            brackets[(i, j)] = tuple(result.solution)
    algebra = LieAlgebra(tuple(f"v{i + 1}" for i in range(len(vs))), brackets)
    gram = _frame_gram(pair, vs)
    try:
        metric = InvariantMetric(gram, ())
    except DegenerateMetric:
        raise InducedMetricDegenerate(
            "metric restricted to the frame span is degenerate"
        ) from None
    sub = HomogeneousPair(
        algebra,
        [],
        [Vector.basis(len(vs), i) for i in range(len(vs))],
        metric,
    )
    conn = compute_lambda(sub)
    return sub, conn, curvature(sub, conn)


def gauss_codazzi_verify(
    pair: HomogeneousPair,
    conn: ConnectionData,
    xi: NormalField,
    frame: TangentFrame,
    shape: ShapeData,
    intrinsic: tuple[HomogeneousPair, ConnectionData, CurvatureData],
    curv: CurvatureData | None = None,
) -> dict[str, dict]:
    """Residuals of the Gauss and Codazzi equations against the intrinsic geometry.

    The tangential projection of the ambient connection is first checked
    to agree with the intrinsic connection of the frame span; that
    agreement is what licenses using the intrinsic curvature in the Gauss
    equation and the intrinsic covariant derivative in the Codazzi one.
    """
    if curv is None:
        curv = curvature(pair, conn)
    sub, conn3, curv3 = intrinsic
    vs = frame.vectors
    n = len(vs)
    eps_s = Scalar.from_fraction(xi.eps)
    gram = _frame_gram(pair, vs)
    try:
        gram_inv = gram.inverse()
    except SingularMatrix:
        raise FrameGramSingular("frame Gram matrix is singular") from None
    lam3 = [conn3.on_complement(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            flat = _tangential(pair, xi, conn.apply(vs[i], vs[j]))
            tau = gram_inv.mat_vec([pair.metric.ip(flat, v) for v in vs])
            for k in range(n):
                if tau[k] != lam3[i][k, j]:
                    raise ArithmeticError(
                        "tangential ambient connection differs from the "
                        "intrinsic connection of the frame span"
                    )
    h = shape.h2ff
    gauss = {}
    codazzi = {}
    for i in range(n):
        for j in range(i + 1, n):
            ambient = curv.of_vectors(vs[i], vs[j])
            for k in range(n):
                image = Vector(ambient.mat_vec(list(vs[k])))
                intrinsic_col = Vector(curv3.matrix(i, j).column(k))
                for l in range(n):
                    outer = pair.metric.ip(image, vs[l])
                    inner = sub.metric.ip(intrinsic_col, Vector.basis(n, l))
                    wall = eps_s * (h[i, k] * h[j, l] - h[i, l] * h[j, k])
                    gauss[(i, j, k, l)] = outer - inner - wall
                normal_part = eps_s * pair.metric.ip(image, xi.xi)
                codazzi[(i, j, k)] = normal_part - (
                    _nabla_h(lam3, h, i, j, k) - _nabla_h(lam3, h, j, i, k)
                )
    return {"gauss": gauss, "codazzi": codazzi}


def _nabla_h(lam3: Sequence[Matrix], h: Matrix, i: int, j: int, k: int) -> Scalar:
    """(nabla_{V_i} h)(V_j, V_k) for constant frame coefficients."""
    n = h.nrows
    total = Scalar.zero()
    for m in range(n):
        total = total - lam3[i][m, j] * h[m, k] - lam3[i][m, k] * h[j, m]
    return total
