"""Connection and curvature: reference tables, axioms, invariants, loci."""

from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from homkernel.cas.linalg import Matrix
from homkernel.cas.parser import parse_expr, render
from homkernel.cas.scalar import Scalar
from homkernel.connection import (
    ConnectionData,
    ConstantCurvature,
    NotConstant,
    SingularGram,
    compute_lambda,
    connection_axiom_residuals,
    constant_curvature_fit,
    curvature,
    curvature_invariants,
    locally_symmetric_residual,
    pair_symmetry_residuals,
)
from homkernel.families import FAMILY_KEYS
from homkernel.golden import golden_curvature, golden_lambda
from homkernel.homspace import HomogeneousPair, InvariantMetric, builtin_pair
from homkernel.liealg import LieAlgebra, Vector

KEYS = list(FAMILY_KEYS)
PARAMS = ("a", "b", "c", "d", "k")


def sc(src: str) -> Scalar:
    return parse_expr(src, PARAMS)


@lru_cache(maxsize=None)
def geometry(key, binds=()):
    pair = builtin_pair(key)
    if binds:
        pair = pair.substitute({name: sc(src) for name, src in binds})
    conn = compute_lambda(pair)
    return pair, conn, curvature(pair, conn)


def bound(key, **binds):
    return geometry(key, tuple(sorted(binds.items())))


def flat_pair() -> HomogeneousPair:
    g = LieAlgebra(["e1", "e2", "e3", "e4"], {})
    basis = [Vector([1 if i == j else 0 for j in range(4)]) for i in range(4)]
    return HomogeneousPair(g, [], basis, InvariantMetric(Matrix.identity(4)))


def unit(i: int) -> Vector:
    return Vector([1 if j == i else 0 for j in range(4)])


fractions = st.fractions(
    min_value=Fraction(-6), max_value=Fraction(6), max_denominator=5
)
vec4 = st.tuples(fractions, fractions, fractions, fractions).map(Vector)
vec5 = st.tuples(fractions, fractions, fractions, fractions, fractions).map(Vector)

A1_POINT = (("a", "5"), ("b", "3"), ("c", "2"), ("d", "7"))


class TestGoldenTables:
    @pytest.mark.parametrize("key", KEYS)
    def test_lambda_entry_for_entry(self, key):
        _, conn, _ = geometry(key)
        reference = golden_lambda(key)
        for i in range(4):
            assert conn.on_complement(i) == reference[i]

    @pytest.mark.parametrize("key", KEYS)
    def test_curvature_entry_for_entry(self, key):
        _, _, curv = geometry(key)
        for pos, mat in golden_curvature(key).items():
            assert curv.matrix(*pos) == mat

    def test_a1_lambda_u4_columns(self):
        _, conn, _ = geometry("A1")
        lam = conn.on_complement(3)
        assert Vector(lam.column(0)) == unit(3)
        assert Vector(lam.column(1)) == -unit(0)
        assert Vector(lam.column(2)) == unit(3).scale(sc("-1/2"))

    @pytest.mark.parametrize("key,eta", [("A4", 1), ("B2", -1)])
    def test_a4_b2_lambda_u3_columns(self, key, eta):
        _, conn, _ = geometry(key)
        lam = conn.on_complement(2)
        assert Vector(lam.column(0)) == -unit(2)
        assert Vector(lam.column(1)) == unit(0).scale(Scalar.from_fraction(eta))

    @pytest.mark.parametrize("key,eta", [("A4", 1), ("B2", -1)])
    def test_a4_b2_curvature_u3_u4_support(self, key, eta):
        _, _, curv = geometry(key)
        mat = curv.matrix(2, 3)
        half = Scalar.from_fraction(Fraction(eta, 2))
        for r in range(4):
            for c in range(4):
                if (r, c) == (2, 3):
                    assert mat[r, c] == -half
                elif (r, c) == (3, 1):
                    assert mat[r, c] == Scalar.from_fraction(eta)
                else:
                    assert mat[r, c].is_zero

    def test_a2_curvature_u1_u2_columns(self):
        _, _, curv = geometry("A2")
        mat = curv.matrix(0, 1)
        coeff = sc("-k*k*a/d")
        assert Vector(mat.column(1)) == unit(0).scale(coeff)
        assert Vector(mat.column(2)) == unit(1).scale(coeff)

    @pytest.mark.parametrize("key", KEYS)
    def test_repeated_argument_vanishes(self, key):
        _, _, curv = geometry(key)
        for i in range(4):
            assert curv.matrix(i, i).is_zero()
        assert curv.matrix(2, 0) == -curv.matrix(0, 2)


class TestAxioms:
    @pytest.mark.parametrize("key", KEYS)
    def test_all_residuals_vanish(self, key):
        pair, conn, _ = geometry(key)
        residuals = connection_axiom_residuals(pair, conn)
        assert all(v.is_zero for v in residuals["torsion"].values())
        assert all(s.is_zero for s in residuals["compat"].values())
        assert all(m.is_zero() for m in residuals["isotropy"].values())

    def test_a4_torsion_pair_u3_u1(self):
        pair, conn, _ = geometry("A4")
        left = Vector(conn.on_complement(2).column(0))
        right = Vector(conn.on_complement(0).column(2))
        assert left == -unit(2)
        assert right == -unit(2)
        assert pair.bracket_m(unit(2), unit(0)).is_zero
        assert (left - right).is_zero

    def test_perturbed_lambda_detected(self):
        pair, conn, _ = geometry("A1")
        bumped = list(conn.by_basis)
        rows = [list(r) for r in bumped[0].entries]
        rows[0][0] = rows[0][0] + Scalar.one()
        bumped[0] = Matrix(rows)
        residuals = connection_axiom_residuals(pair, ConnectionData(pair, bumped))
        flat = list(residuals["torsion"].values())
        compat_bad = any(not s.is_zero for s in residuals["compat"].values())
        torsion_bad = any(not v.is_zero for v in flat)
        assert compat_bad or torsion_bad

    def test_abelian_connection_vanishes(self):
        pair = flat_pair()
        conn = compute_lambda(pair)
        assert all(m.is_zero() for m in conn.by_basis)
        residuals = connection_axiom_residuals(pair, conn)
        assert all(v.is_zero for v in residuals["torsion"].values())

    def test_singular_gram_is_value_error(self):
        assert issubclass(SingularGram, ValueError)


class TestCurvatureIdentities:
    @pytest.mark.parametrize("key", KEYS)
    def test_first_bianchi(self, key):
        _, _, curv = geometry(key)
        assert curv.bianchi
        assert all(v.is_zero for _, v in curv.bianchi)

    @pytest.mark.parametrize("key", KEYS)
    def test_pair_symmetry(self, key):
        pair, _, curv = geometry(key)
        residuals = pair_symmetry_residuals(pair, curv)
        assert residuals
        assert all(s.is_zero for s in residuals.values())

    @pytest.mark.parametrize("key", KEYS)
    def test_isotropy_equivariance_accepted(self, key):
        pair, conn, curv = geometry(key)
        residuals = locally_symmetric_residual(pair, conn, curv)
        assert len(residuals) == 24


class TestInvariants:
    SCALARS = {
        "A1": "-6/a",
        "A2": "-12*k*k/d",
        "A3+": "-12/b",
        "A3-": "-12/b",
        "A4": "-12/a",
        "B1": "6*d/(a*a)",
        "B2": "12/a",
    }

    @pytest.mark.parametrize("key", KEYS)
    def test_scalar_regression(self, key):
        pair, _, curv = geometry(key)
        invariants = curvature_invariants(pair, curv)
        assert invariants["scalar"] == sc(self.SCALARS[key])

    def test_a1_scalar_against_adjugate_contraction(self):
        pair, _, curv = geometry("A1")
        invariants = curvature_invariants(pair, curv)
        point = {"a": Fraction(5), "b": Fraction(3), "c": Fraction(2), "d": Fraction(7)}
        gram = pair.metric.gram.evaluate(point)
        ricci = invariants["ricci"].evaluate(point)

        def minor(rows, i, j):
            return [
                [x for jj, x in enumerate(row) if jj != j]
                for ii, row in enumerate(rows)
                if ii != i
            ]

        def det(rows):
            if len(rows) == 1:
                return rows[0][0]
            return sum(
                (-1) ** j * rows[0][j] * det(minor(rows, 0, j))
                for j in range(len(rows))
            )

        d = det(gram)
        total = Fraction(0)
        for i in range(4):
            for j in range(4):
                cof = (-1) ** (i + j) * det(minor(gram, j, i))
                total += cof * ricci[i][j] / d
        expected = invariants["scalar"].evaluate(point)
        assert total == expected == Fraction(-6, 5)

    def test_flat_abelian_invariants(self):
        pair = flat_pair()
        conn = compute_lambda(pair)
        curv = curvature(pair, conn)
        invariants = curvature_invariants(pair, curv)
        assert invariants["ricci"].is_zero()
        assert invariants["scalar"].is_zero
        fit = constant_curvature_fit(pair, curv)
        assert fit == ConstantCurvature(Scalar.zero())


class TestConstantCurvature:
    LOCI = {
        "A2": ({"b": "0"}, "-k*k/d"),
        "A3+": ({"d": "-b"}, "-1/b"),
        "A3-": ({"d": "b"}, "-1/b"),
        "A4": ({"b": "0"}, "-1/a"),
        "B2": ({"b": "0"}, "1/a"),
        "B1": ({"b": "0", "c": "0", "d": "0"}, "0"),
    }

    @pytest.mark.parametrize("key", sorted(LOCI))
    def test_fit_on_locus(self, key):
        binds, expected = self.LOCI[key]
        pair, _, curv = bound(key, **binds)
        fit = constant_curvature_fit(pair, curv)
        assert isinstance(fit, ConstantCurvature)
        assert fit.k == sc(expected)

    @pytest.mark.parametrize("key", sorted(LOCI))
    def test_scalar_is_twelve_k_on_locus(self, key):
        binds, _ = self.LOCI[key]
        pair, _, curv = bound(key, **binds)
        fit = constant_curvature_fit(pair, curv)
        invariants = curvature_invariants(pair, curv)
        assert invariants["scalar"] == Scalar.from_fraction(12) * fit.k

    @pytest.mark.parametrize(
        "key,binds",
        [
            ("A1", {}),
            ("A1", {"b": "0"}),
            ("A2", {}),
            ("A3+", {}),
            ("B1", {"b": "0", "c": "0", "d": "1"}),
        ],
    )
    def test_not_constant_off_locus(self, key, binds):
        pair, _, curv = bound(key, **binds)
        fit = constant_curvature_fit(pair, curv)
        assert isinstance(fit, NotConstant)
        assert len(fit.witness) == 4
        assert not fit.residual.is_zero


class TestLocallySymmetric:
    ON_LOCUS = [
        ("A1", {"b": "0"}),
        ("A2", {"b": "0"}),
        ("A3+", {"d": "-b"}),
        ("A3-", {"d": "b"}),
        ("A4", {"b": "0"}),
        ("B2", {"b": "0"}),
        ("B1", {"d": "c*c/b"}),
        ("B1", {"b": "1", "c": "1", "d": "1"}),
    ]

    OFF_LOCUS = [
        ("A1", {"a": "1", "b": "1", "c": "0", "d": "0"}),
        ("A2", {}),
        ("A3+", {}),
        ("A3-", {}),
        ("A4", {"a": "1", "b": "1"}),
        ("B2", {}),
        ("B1", {"b": "1", "c": "0", "d": "1"}),
    ]

    @pytest.mark.parametrize("key,binds", ON_LOCUS)
    def test_vanishes_on_locus(self, key, binds):
        pair, conn, curv = bound(key, **binds)
        residuals = locally_symmetric_residual(pair, conn, curv)
        assert all(m.is_zero() for m in residuals.values())

    @pytest.mark.parametrize("key,binds", OFF_LOCUS)
    def test_nonzero_off_locus(self, key, binds):
        pair, conn, curv = bound(key, **binds)
        residuals = locally_symmetric_residual(pair, conn, curv)
        assert any(not m.is_zero() for m in residuals.values())


class TestNumericProperties:
    @settings(deadline=None, max_examples=60)
    @given(x=vec4, y=vec4)
    def test_torsion_free_at_point(self, x, y):
        pair, conn, _ = bound("A1", **dict(A1_POINT))
        left = conn.apply(x, y) - conn.apply(y, x)
        assert left == pair.bracket_m(x, y)

    @settings(deadline=None, max_examples=60)
    @given(x=vec5, y=vec4, z=vec4)
    def test_metric_compatibility_at_point(self, x, y, z):
        pair, conn, _ = bound("A1", **dict(A1_POINT))
        lam = conn.of_vector(x)
        left = pair.metric.ip(Vector(lam.mat_vec(list(y))), z)
        right = pair.metric.ip(y, Vector(lam.mat_vec(list(z))))
        assert (left + right).is_zero

    @settings(deadline=None, max_examples=60)
    @given(x=vec4, y=vec4)
    def test_curvature_bilinear_antisymmetry(self, x, y):
        _, _, curv = bound("A1", **dict(A1_POINT))
        assert curv.of_vectors(x, x).is_zero()
        assert curv.of_vectors(x, y) == -curv.of_vectors(y, x)
