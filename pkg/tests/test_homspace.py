"""Homogeneous pairs: Gram generation, projections, signature, reductivity."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homkernel.cas import (
    Matrix,
    Scalar,
    cofactor_det,
    parse_expr,
    rational_signature,
    render,
)
from homkernel.families import FAMILY_KEYS
from homkernel.homspace import (
    DegenerateAtPoint,
    DegenerateMetric,
    FamilyId,
    HomogeneousPair,
    InvariantMetric,
    builtin_pair,
    gram_det,
    nonreductivity_decide,
    signature_at,
    theta_form_to_gram,
    toy_reductive_pair,
)
from homkernel.liealg import LieAlgebra, Vector

fractions = st.fractions(min_value=-8, max_value=8, max_denominator=6)

EXPECTED_DETS = {
    "A1": "a^3*(a - 4*d)/4",
    "A2": "-a^3*d",
    "A3+": "-a^3*b",
    "A3-": "-a^3*b",
    "A4": "-a^4/2",
    "B2": "a^4/2",
    "B1": "a^4",
}


def frac_point(seed, names, avoid):
    """Random rational parameter point satisfying avoid != 0."""
    rng = random.Random(seed)
    while True:
        point = {
            n: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for n in names
        }
        if avoid(point):
            return point


# -- family tags -----------------------------------------------------------


class TestFamilyId:
    def test_parse_plain(self):
        assert FamilyId.parse("a1") == FamilyId("A1")
        assert FamilyId.parse(" b2 ") == FamilyId("B2", -1)

    def test_parse_eta_suffix(self):
        assert FamilyId.parse("A3+") == FamilyId("A3", 1)
        assert FamilyId.parse("a3 -") == FamilyId("A3", -1)

    def test_eta_required_for_split_family(self):
        with pytest.raises(ValueError, match="eta"):
            FamilyId("A3")

    def test_eta_fixed_for_shared_table(self):
        assert FamilyId("A4").eta == 1
        assert FamilyId("B2").eta == -1
        with pytest.raises(ValueError):
            FamilyId("A4", -1)

    def test_eta_rejected_elsewhere(self):
        with pytest.raises(ValueError):
            FamilyId("A1", 1)

    def test_unknown_tag(self):
        with pytest.raises(ValueError, match="unknown"):
            FamilyId.parse("C9")

    def test_registry_roundtrip(self):
        for key in FAMILY_KEYS:
            assert FamilyId.parse(key).registry_key == key
            assert str(FamilyId.parse(key)) == key


# -- Gram generation -------------------------------------------------------


class TestGram:
    def test_determinants_frozen_and_oracle_checked(self):
        for key, det_str in EXPECTED_DETS.items():
            pair = builtin_pair(key)
            det = gram_det(pair)
            assert det == parse_expr(det_str, pair.metric.params), key
            assert det == cofactor_det(pair.metric.gram), key

    def test_gram_entries_first_family(self):
        g = builtin_pair("A1").metric.gram
        rows = [[render(g[i, j]) for j in range(4)] for i in range(4)]
        assert rows == [
            ["a", "0", "-a/2", "0"],
            ["0", "b", "c", "a"],
            ["-a/2", "c", "d", "0"],
            ["0", "a", "0", "0"],
        ]

    def test_gram_entries_schroedinger_family(self):
        g = builtin_pair("A4").metric.gram
        rows = [[render(g[i, j]) for j in range(4)] for i in range(4)]
        assert rows == [
            ["a", "0", "0", "0"],
            ["0", "b", "a", "0"],
            ["0", "a", "0", "0"],
            ["0", "0", "0", "a/2"],
        ]
        b2 = builtin_pair("B2").metric.gram
        assert render(b2[0, 0]) == "-a"
        for i in range(4):
            for j in range(4):
                if (i, j) != (0, 0):
                    assert b2[i, j] == g[i, j]

    def test_gram_symmetric_everywhere(self):
        for key in FAMILY_KEYS:
            assert builtin_pair(key).metric.gram.is_symmetric(), key

    def test_half_rule_on_cross_terms(self):
        g = theta_form_to_gram("6*t1*t2", ("a",))
        assert g[0, 1] == Scalar.from_fraction(3)
        assert g[1, 0] == Scalar.from_fraction(3)
        assert g[0, 0].is_zero

    def test_square_terms_not_halved(self):
        g = theta_form_to_gram("a*t3*t3", ("a",))
        assert g[2, 2] == Scalar.param("a")

    def test_degenerate_expansion_rejected(self):
        g = theta_form_to_gram("a*t1*t1", ("a",))
        with pytest.raises(DegenerateMetric):
            InvariantMetric(g, ("a",))

    def test_non_quadratic_rejected(self):
        with pytest.raises(ValueError, match="degree"):
            theta_form_to_gram("a*t1", ("a",))
        with pytest.raises(ValueError, match="degree"):
            theta_form_to_gram("t1*t2*t3", ("a",))

    def test_dual_symbol_in_denominator_rejected(self):
        with pytest.raises(ValueError, match="denominator"):
            theta_form_to_gram("a/t1", ("a",))

    def test_asymmetric_gram_rejected(self):
        m = Matrix([[Scalar.zero(), Scalar.one()], [Scalar.zero(), Scalar.one()]])
        with pytest.raises(ValueError, match="symmetric"):
            InvariantMetric(m)


# -- projections -----------------------------------------------------------


class TestProjection:
    def test_complement_coordinates_of_ambient_basis(self):
        pair = builtin_pair("A1")
        half = Scalar.from_fraction(Fraction(1, 2))
        e3 = Vector((0, 0, 1, 0, 0))
        e4 = Vector((0, 0, 0, 1, 0))
        assert pair.project_m(e3) == Vector((0, 0, 0, Fraction(1, 2)))
        assert pair.project_m(e4) == Vector((0, 0, 0, Fraction(-1, 2)))
        assert pair.project_m(e3)[3] == half

    def test_isotropy_projects_to_zero(self):
        for key in FAMILY_KEYS:
            pair = builtin_pair(key)
            for hv in pair.h_vectors:
                assert pair.project_m(hv).is_zero, key

    def test_identity_on_complement(self):
        pair = builtin_pair("B1")
        coords = Vector((3, Fraction(-1, 2), 0, 7))
        assert pair.project_m(pair.embed_m(coords)) == coords

    @settings(deadline=None, max_examples=20)
    @given(st.lists(fractions, min_size=5, max_size=5))
    def test_idempotent(self, raw):
        pair = builtin_pair("A1")
        x = Vector(raw)
        once = pair.project_m(x)
        again = pair.project_m(pair.embed_m(once))
        assert once == again

    @settings(deadline=None, max_examples=20)
    @given(st.lists(fractions, min_size=6, max_size=6))
    def test_decomposition_reassembles(self, raw):
        pair = builtin_pair("B2")
        x = Vector(raw)
        hc, mc = pair.decompose(x)
        assert pair.embed_h(hc) + pair.embed_m(mc) == x


# -- pair validation -------------------------------------------------------


class TestPairValidation:
    def test_isotropy_must_be_subalgebra(self):
        fam = builtin_pair("A1")
        g = fam.g
        metric = InvariantMetric(Matrix.identity(3))
        with pytest.raises(ValueError, match="subalgebra"):
            HomogeneousPair(
                g,
                [Vector((0, 1, 0, 0, 0)), Vector((0, 0, 1, 0, 0))],
                [Vector((1, 0, 0, 0, 0)), Vector((0, 0, 0, 1, 0)), Vector((0, 0, 0, 0, 1))],
                metric,
            )

    def test_overlapping_spans_rejected(self):
        g = builtin_pair("A1").g
        metric = InvariantMetric(Matrix.identity(4))
        with pytest.raises(ValueError, match="independ"):
            HomogeneousPair(
                g,
                [Vector((1, 0, 0, 0, 0))],
                [
                    Vector((1, 0, 0, 0, 0)),
                    Vector((0, 1, 0, 0, 0)),
                    Vector((0, 0, 1, 0, 0)),
                    Vector((0, 0, 0, 1, 0)),
                ],
                metric,
            )

    def test_dimension_sum_enforced(self):
        g = builtin_pair("A1").g
        with pytest.raises(Exception, match="sum"):
            HomogeneousPair(
                g, [], [Vector((1, 0, 0, 0, 0))], InvariantMetric(Matrix.identity(1))
            )


# -- signature -------------------------------------------------------------


def sig_kind(sig):
    return {frozenset({3, 1}): "lorentzian", frozenset({2}): "neutral"}[
        frozenset(sig)
    ]


class TestSignature:
    def test_shared_table_signs(self):
        point = {"a": Fraction(1), "b": Fraction(0)}
        assert sig_kind(signature_at(builtin_pair("A4"), point)) == "lorentzian"
        assert sig_kind(signature_at(builtin_pair("B2"), point)) == "neutral"

    def test_shared_table_signs_do_not_depend_on_b(self):
        point = {"a": Fraction(-2), "b": Fraction(5, 3)}
        assert sig_kind(signature_at(builtin_pair("A4"), point)) == "lorentzian"
        assert sig_kind(signature_at(builtin_pair("B2"), point)) == "neutral"

    def test_discriminant_decides_first_family(self):
        # disc = a(a-4d): negative -> Lorentzian, positive -> neutral
        base = {"b": Fraction(0), "c": Fraction(0)}
        lor = signature_at(builtin_pair("A1"), {**base, "a": Fraction(1), "d": Fraction(1)})
        neu = signature_at(builtin_pair("A1"), {**base, "a": Fraction(1), "d": Fraction(0)})
        assert sig_kind(lor) == "lorentzian"
        assert sig_kind(neu) == "neutral"

    def test_discriminant_rule_at_random_points(self):
        pair = builtin_pair("A1")
        for seed in range(12):
            point = frac_point(
                seed,
                ("a", "b", "c", "d"),
                lambda p: p["a"] * (p["a"] - 4 * p["d"]) != 0,
            )
            value = point["a"] * (point["a"] - 4 * point["d"])
            want = "lorentzian" if value < 0 else "neutral"
            assert sig_kind(signature_at(pair, point)) == want, point

    def test_degenerate_point_rejected(self):
        pair = builtin_pair("A1")
        with pytest.raises(DegenerateAtPoint):
            signature_at(
                pair,
                {"a": Fraction(4), "b": Fraction(1), "c": Fraction(0), "d": Fraction(1)},
            )

    def test_congruence_invariance(self):
        pair = builtin_pair("A2")
        point = {"a": Fraction(1), "b": Fraction(2), "c": Fraction(-1), "d": Fraction(3)}
        rows = pair.metric.gram.evaluate(point)
        base = rational_signature(rows)
        rng = random.Random(7)
        for _ in range(6):
            while True:
                p = [
                    [Fraction(rng.randint(-4, 4)) for _ in range(4)]
                    for _ in range(4)
                ]
                det = Matrix([[Scalar.from_fraction(x) for x in row] for row in p]).det()
                if not det.is_zero:
                    break
            moved = [
                [
                    sum(p[k][i] * rows[k][l] * p[l][j] for k in range(4) for l in range(4))
                    for j in range(4)
                ]
                for i in range(4)
            ]
            assert rational_signature(moved) == base


# -- reductivity -----------------------------------------------------------


def pair_1d(bracket_coords):
    """Two-dimensional pair: h = span{e1}, m = span{e2}, [e1,e2] given."""
    g = LieAlgebra(("e1", "e2"), {(0, 1): bracket_coords})
    return HomogeneousPair(
        g,
        [Vector((1, 0))],
        [Vector((0, 1))],
        InvariantMetric(Matrix.identity(1)),
    )


class TestReductivity:
    def test_all_builtin_pairs_non_reductive_unconditionally(self):
        for key in FAMILY_KEYS:
            result = nonreductivity_decide(builtin_pair(key))
            assert result.kind == "non_reductive", key
            assert result.genericity == (), key

    def test_rotation_pair_reductive_with_zero_map(self):
        result = nonreductivity_decide(toy_reductive_pair())
        assert result.kind == "reductive"
        assert result.phi.is_zero()

    def test_trivial_isotropy_reductive(self):
        g = LieAlgebra(("e1", "e2", "e3", "e4"), {})
        pair = HomogeneousPair(
            g,
            [],
            [Vector.basis(4, k) for k in range(4)],
            InvariantMetric(Matrix.identity(4)),
        )
        result = nonreductivity_decide(pair)
        assert result.kind == "reductive"

    def test_affine_line_pair_non_reductive(self):
        # [h, x] = h: the isotropy leaks into every complement
        result = nonreductivity_decide(pair_1d((1, 0)))
        assert result.kind == "non_reductive"

    def test_shifted_complement_found_by_nonzero_witness(self):
        # [h, x] = h + x: the graph of phi(x) = h is invariant
        result = nonreductivity_decide(pair_1d((1, 1)))
        assert result.kind == "reductive"
        assert result.phi == Matrix([[Scalar.one()]])

    def test_parameter_dependent_case_reported_conditionally(self):
        k = Scalar.param("k")
        result = nonreductivity_decide(pair_1d((Scalar.one(), k)))
        assert result.kind == "conditionally_reductive"
        assert result.genericity
        assert result.phi == Matrix([[Scalar.one() / k]])

    def test_parameter_dependent_case_re_decided_at_points(self):
        k = Scalar.param("k")
        pair = pair_1d((Scalar.one(), k))
        at_zero = nonreductivity_decide(pair.substitute({"k": Scalar.zero()}))
        assert at_zero.kind == "non_reductive"
        at_two = nonreductivity_decide(pair.substitute({"k": Scalar.from_fraction(2)}))
        assert at_two.kind == "reductive"

    def test_modified_isotropy_of_shared_table_still_non_reductive(self):
        # replacing e3+e6 by e3 keeps an unconditional obstruction:
        # the new isotropy is abelian, so the correction term vanishes
        fam = builtin_pair("A4")
        pair = HomogeneousPair(
            fam.g,
            [Vector((0, 0, 1, 0, 0, 0)), Vector((0, 0, 0, 0, 1, 0))],
            fam.m_vectors,
            fam.metric,
        )
        result = nonreductivity_decide(pair)
        assert result.kind == "non_reductive"

    def test_numeric_weight_members_still_non_reductive(self):
        pair = builtin_pair("A2")
        for value in (0, 1, -1, 2, Fraction(1, 2)):
            fixed = pair.substitute({"k": Scalar.from_fraction(Fraction(value))})
            assert nonreductivity_decide(fixed).kind == "non_reductive", value

    def test_reductive_witness_defines_invariant_graph(self):
        pair = pair_1d((1, 1))
        phi = nonreductivity_decide(pair).phi
        # complement spanned by x + phi(x): bracket with h stays inside
        shifted = pair.embed_m(Vector((1,))) + pair.embed_h(
            Vector([phi[0, 0]])
        )
        moved = pair.g.bracket(pair.h_vectors[0], shifted)
        # moved must be proportional to the shifted vector
        assert moved == shifted
