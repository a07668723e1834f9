"""Space files: parsing, validation, round-trips, fixture integrity."""
from pathlib import Path

import pytest

from homkernel.families import lookup
from homkernel.homspace import builtin_pair, toy_reductive_pair
from homkernel.spacefile import (
    ParseError,
    ValidationError,
    load_space,
    parse_space,
    render_space,
    space_from_pair,
)

SPACES = Path(__file__).resolve().parent.parent / "spaces"

FIXTURES = {
    "A1": "a1.space",
    "A2": "a2.space",
    "A3+": "a3p.space",
    "A3-": "a3m.space",
    "A4": "a4.space",
    "B1": "b1.space",
    "B2": "b2.space",
}


def pairs_equal(p, q):
    return (
        p.g.basis_names == q.g.basis_names
        and p.g.table == q.g.table
        and p.h_vectors == q.h_vectors
        and p.m_vectors == q.m_vectors
        and p.metric.gram == q.metric.gram
        and p.metric.params == q.metric.params
    )


MINIMAL = (
    "[algebra]\n"
    "dim = 2\n"
    "\n"
    "[isotropy]\n"
    "\n"
    "[complement]\n"
    "u1 = e1\n"
    "u2 = e2\n"
    "\n"
    "[metric]\n"
    "g 1 2 = 1\n"
)


# -- round-trips and shipped fixtures --------------------------------------


class TestRoundTrip:
    @pytest.mark.parametrize("key", FIXTURES)
    def test_render_reload_identical(self, key):
        original = builtin_pair(key)
        loaded = parse_space(render_space(original)).to_pair()
        assert pairs_equal(original, loaded)
        assert loaded.family is original.family

    @pytest.mark.parametrize("key", FIXTURES)
    def test_render_is_deterministic(self, key):
        text = render_space(builtin_pair(key))
        again = space_from_pair(parse_space(text).to_pair()).render()
        assert text == again

    def test_toy_pair_round_trips_without_family(self):
        toy = toy_reductive_pair()
        loaded = parse_space(render_space(toy)).to_pair()
        assert pairs_equal(toy, loaded)
        assert loaded.family is None

    def test_gram_entry_form_reaches_the_same_pair(self):
        import dataclasses

        original = builtin_pair("A4")
        entry_form = dataclasses.replace(
            space_from_pair(original), metric_theta=None
        )
        assert "g = " not in entry_form.render()
        loaded = parse_space(entry_form.render()).to_pair()
        assert pairs_equal(original, loaded)
        assert loaded.family is original.family


class TestShippedFixtures:
    @pytest.mark.parametrize("key", FIXTURES, ids=list(FIXTURES.values()))
    def test_fixture_loads_to_builtin(self, key):
        loaded = load_space(SPACES / FIXTURES[key])
        assert pairs_equal(loaded, builtin_pair(key))
        assert loaded.family is lookup(key)

    @pytest.mark.parametrize("key", FIXTURES, ids=list(FIXTURES.values()))
    def test_fixture_text_is_canonical(self, key):
        on_disk = (SPACES / FIXTURES[key]).read_text()
        assert on_disk == render_space(builtin_pair(key))

    def test_a2_declares_structure_parameter(self):
        space = parse_space((SPACES / "a2.space").read_text())
        assert space.params == ("a", "b", "c", "d", "k")
        assert space.metric_params == ("a", "b", "c", "d")
        assert space.constraint_texts == ("a*d != 0",)

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_space(tmp_path / "nowhere.space")

    def test_load_space_from_temp_copy(self, tmp_path):
        target = tmp_path / "copy.space"
        target.write_text((SPACES / "b1.space").read_text())
        assert pairs_equal(load_space(target), builtin_pair("B1"))


# -- format features -------------------------------------------------------


class TestFormatFeatures:
    def test_minimal_file_loads(self):
        pair = parse_space(MINIMAL).to_pair()
        assert pair.dim_h == 0
        assert pair.dim_m == 2
        assert pair.family is None

    def test_omitted_gram_entries_default_to_zero(self):
        pair = parse_space(MINIMAL).to_pair()
        assert pair.metric.gram[0, 0].is_zero
        assert pair.metric.gram[1, 1].is_zero
        assert pair.metric.gram[0, 1] == pair.metric.gram[1, 0]

    def test_theta_cross_term_splits_in_half(self):
        text = MINIMAL.replace("g 1 2 = 1", "g = t1*t2 + 3*t1*t1")
        space = parse_space(text)
        three = space.gram[0, 0]
        assert str(three.constant_value()) == "3"
        assert str(space.gram[0, 1].constant_value()) == "1/2"
        assert space.gram[0, 1] == space.gram[1, 0]

    def test_comments_and_section_order_are_free(self):
        text = (
            "# leading note\n"
            "[metric]\n"
            "g 1 2 = 1  # antidiagonal\n"
            "[complement]\n"
            "u1 = e1\n"
            "u2 = e2\n"
            "[isotropy]\n"
            "[algebra]\n"
            "dim = 2\n"
        )
        assert pairs_equal(parse_space(text).to_pair(), parse_space(MINIMAL).to_pair())

    def test_sign_mirrored_entries_may_both_appear(self):
        text = MINIMAL.replace("g 1 2 = 1", "g 1 2 = 1\ng 2 1 = 1")
        pair = parse_space(text).to_pair()
        assert pair.metric.gram[1, 0] == pair.metric.gram[0, 1]

    def test_parameter_coefficients_in_vectors(self):
        text = (
            "[params]\n"
            "s != 0\n"
            "[algebra]\n"
            "dim = 2\n"
            "[isotropy]\n"
            "[complement]\n"
            "u1 = s*e1 - e2\n"
            "u2 = e2\n"
            "[metric]\n"
            "g 1 1 = 1\n"
            "g 2 2 = s\n"
        )
        space = parse_space(text)
        assert space.params == ("s",)
        assert space.metric_params == ("s",)
        pair = space.to_pair()
        assert not pair.m_vectors[0][0].is_constant

    def test_tweaked_catalog_file_loses_its_family(self):
        text = render_space(builtin_pair("A1"))
        text = text.replace("bracket e1 e2 = 2*e2", "bracket e1 e2 = 3*e2")
        text = text.replace("bracket e2 e1 = -2*e2", "bracket e2 e1 = -3*e2")
        text = text.replace("bracket e1 e3 = -2*e3", "bracket e1 e3 = -3*e3")
        text = text.replace("bracket e3 e1 = 2*e3", "bracket e3 e1 = 3*e3")
        pair = parse_space(text).to_pair()
        assert pair.family is None
        assert pair.g.is_lie


# -- parse errors ----------------------------------------------------------


class TestParseErrors:
    def expect(self, text, line, column, fragment):
        with pytest.raises(ParseError) as excinfo:
            parse_space(text)
        err = excinfo.value
        assert err.line == line, str(err)
        assert err.column == column, str(err)
        assert fragment in str(err)
        return err

    def test_unknown_section(self):
        self.expect("[nonsense]\n", 1, 1, "unknown section")

    def test_duplicate_section(self):
        self.expect("[algebra]\ndim = 2\n[algebra]\n", 3, 1, "duplicate section")

    def test_content_before_header(self):
        self.expect("  dim = 2\n", 1, 3, "before the first")

    def test_unterminated_header(self):
        self.expect("[algebra\n", 1, 1, "unterminated")

    def test_missing_section(self):
        err = self.expect("[algebra]\ndim = 2\n", 3, 1, "missing section")
        assert "[isotropy]" in str(err)

    def test_missing_dim(self):
        self.expect(
            "[algebra]\nbracket e1 e2 = 0\n" + MINIMAL.replace("[algebra]\ndim = 2\n", ""),
            1,
            1,
            "missing 'dim",
        )

    def test_dim_not_integer(self):
        self.expect(MINIMAL.replace("dim = 2", "dim = two"), 2, 7, "integer")

    def test_unknown_basis_vector_column(self):
        text = MINIMAL.replace("[isotropy]", "[isotropy]\nh1 = e1")
        broken = text.replace("dim = 2\n", "dim = 2\nbracket e1 e9 = e1\n")
        self.expect(broken, 3, 12, "unknown basis vector 'e9'")

    def test_duplicate_bracket_line(self):
        text = MINIMAL.replace(
            "dim = 2\n", "dim = 2\nbracket e1 e2 = 0\nbracket e1 e2 = 0\n"
        )
        self.expect(text, 4, 1, "duplicate bracket entry")

    def test_nonlinear_right_hand_side(self):
        self.expect(MINIMAL.replace("u1 = e1", "u1 = e1*e2"), 7, 6, "linear")

    def test_affine_right_hand_side(self):
        self.expect(MINIMAL.replace("u1 = e1", "u1 = e1 + 1"), 7, 6, "linear")

    def test_unknown_name_position(self):
        self.expect(MINIMAL.replace("u1 = e1", "u1 = z"), 7, 6, "unknown name 'z'")

    def test_bad_parameter_name(self):
        self.expect("[params]\n3bad\n" + MINIMAL, 2, 1, "bad parameter name")

    def test_duplicate_parameter(self):
        self.expect("[params]\na\na\n" + MINIMAL, 3, 1, "declared twice")

    def test_constraint_must_compare_with_zero(self):
        self.expect("[params]\na != 5\n" + MINIMAL, 2, 1, "!= 0")

    def test_assignment_rejected_in_params(self):
        self.expect("[params]\na = 5\n" + MINIMAL, 2, 1, "constraints only")

    def test_metric_index_out_of_range(self):
        self.expect(MINIMAL.replace("g 1 2 = 1", "g 1 3 = 1"), 11, 5, "out of range")

    def test_metric_index_not_integer(self):
        self.expect(MINIMAL.replace("g 1 2 = 1", "g x 2 = 1"), 11, 3, "integers")

    def test_duplicate_metric_entry(self):
        text = MINIMAL.replace("g 1 2 = 1", "g 1 2 = 1\ng 1 2 = 2")
        self.expect(text, 12, 1, "duplicate metric entry")

    def test_mixed_metric_forms(self):
        text = MINIMAL.replace("g 1 2 = 1", "g 1 2 = 1\ng = t1*t2")
        self.expect(text, 12, 1, "mix of quadratic form")

    def test_duplicate_theta(self):
        text = MINIMAL.replace("g 1 2 = 1", "g = t1*t2\ng = t1*t2")
        self.expect(text, 12, 1, "duplicate metric expression")

    def test_theta_degree_must_be_two(self):
        text = MINIMAL.replace("g 1 2 = 1", "g = t1*t2 + t1")
        with pytest.raises(ParseError, match="degree 1"):
            parse_space(text)

    def test_param_collides_with_dual_symbol(self):
        text = (
            "[params]\nt1\n"
            + MINIMAL.replace("g 1 2 = 1", "g = t1*t2")
        )
        with pytest.raises(ParseError, match="dual symbol"):
            parse_space(text)

    def test_param_collides_with_basis_vector(self):
        with pytest.raises(ParseError, match="basis vector name"):
            parse_space("[params]\ne1\n" + MINIMAL)

    def test_label_collides_with_basis_vector(self):
        with pytest.raises(ParseError, match="collides with a declared name"):
            parse_space(MINIMAL.replace("u1 = e1", "e2 = e1"))

    def test_duplicate_label(self):
        with pytest.raises(ParseError, match="defined twice"):
            parse_space(MINIMAL.replace("u2 = e2", "u1 = e2"))

    def test_missing_equals(self):
        with pytest.raises(ParseError, match="expected 'key = expression'"):
            parse_space(MINIMAL.replace("u1 = e1", "u1 e1"))

    def test_empty_complement(self):
        text = (
            "[algebra]\ndim = 1\n[isotropy]\nh1 = e1\n[complement]\n"
            "[metric]\n"
        )
        with pytest.raises(ParseError, match="at least one vector"):
            parse_space(text)

    def test_source_appears_in_message(self):
        with pytest.raises(ParseError, match="zed.space:1:1"):
            parse_space("[nonsense]\n", source="zed.space")


# -- validation errors -----------------------------------------------------


class TestValidationErrors:
    def expect(self, text, invariant, fragment):
        space = parse_space(text)
        with pytest.raises(ValidationError) as excinfo:
            space.to_pair()
        err = excinfo.value
        assert err.invariant == invariant
        assert fragment in err.witness
        return err

    def test_missing_mirror_bracket(self):
        text = MINIMAL.replace("dim = 2\n", "dim = 2\nbracket e1 e2 = e1\n")
        self.expect(text, "antisymmetry", "no matching bracket e2 e1")

    def test_mirror_not_negated(self):
        text = MINIMAL.replace(
            "dim = 2\n",
            "dim = 2\nbracket e1 e2 = e1\nbracket e2 e1 = e1\n",
        )
        self.expect(text, "antisymmetry", "do not negate")

    def test_self_bracket_must_vanish(self):
        text = MINIMAL.replace("dim = 2\n", "dim = 2\nbracket e1 e1 = e2\n")
        self.expect(text, "antisymmetry", "must vanish")

    def test_jacobi_violation(self):
        text = (
            "[algebra]\n"
            "dim = 3\n"
            "bracket e1 e2 = e3\n"
            "bracket e2 e1 = -e3\n"
            "bracket e1 e3 = e1\n"
            "bracket e3 e1 = -e1\n"
            "[isotropy]\n"
            "[complement]\n"
            "u1 = e1\n"
            "u2 = e2\n"
            "u3 = e3\n"
            "[metric]\n"
            "g 1 1 = 1\n"
            "g 2 2 = 1\n"
            "g 3 3 = 1\n"
        )
        err = self.expect(text, "jacobi", "cyclic sum")
        assert "(e1, e2, e3)" in err.witness

    def test_isotropy_must_close(self):
        text = (
            "[algebra]\n"
            "dim = 3\n"
            "bracket e1 e2 = e3\n"
            "bracket e2 e1 = -e3\n"
            "bracket e2 e3 = e1\n"
            "bracket e3 e2 = -e1\n"
            "bracket e3 e1 = e2\n"
            "bracket e1 e3 = -e2\n"
            "[isotropy]\n"
            "h1 = e1\n"
            "h2 = e2\n"
            "[complement]\n"
            "u1 = e3\n"
            "[metric]\n"
            "g 1 1 = 1\n"
        )
        self.expect(text, "isotropy-subalgebra", "escapes their span")

    def test_dimension_split(self):
        text = MINIMAL.replace("[isotropy]\n", "[isotropy]\nh1 = e1\n")
        self.expect(text, "dimension", "cannot split dimension 2")

    def test_spanning_failure(self):
        text = MINIMAL.replace(
            "[isotropy]\n", "[isotropy]\nh1 = e1\n"
        ).replace("dim = 2", "dim = 3").replace("u1 = e1", "u1 = e1")
        text = text.replace("u2 = e2", "u2 = e1 + e1")
        self.expect(text, "spanning", "span")

    def test_degenerate_metric(self):
        text = MINIMAL.replace("g 1 2 = 1", "g 1 1 = 1")
        self.expect(text, "metric-nondegeneracy", "singular")

    def test_metric_symmetry_conflict(self):
        text = MINIMAL.replace("g 1 2 = 1", "g 1 2 = 1\ng 2 1 = 2")
        space_error = None
        with pytest.raises(ValidationError) as excinfo:
            parse_space(text)
        space_error = excinfo.value
        assert space_error.invariant == "metric-symmetry"
        assert "(1,2)" in space_error.witness

    def test_unsatisfiable_constraint(self):
        text = "[params]\na\na - a != 0\n" + MINIMAL
        with pytest.raises(ValidationError) as excinfo:
            parse_space(text)
        assert excinfo.value.invariant == "constraints"

    def test_spec_example_one_sided_bracket(self):
        text = (
            "[algebra]\n"
            "dim = 3\n"
            "bracket e1 e2 = e3\n"
            "[isotropy]\n"
            "[complement]\n"
            "u1 = e1\n"
            "u2 = e2\n"
            "u3 = e3\n"
            "[metric]\n"
            "g 1 1 = 1\n"
            "g 2 2 = 1\n"
            "g 3 3 = 1\n"
        )
        space = parse_space(text)
        with pytest.raises(ValidationError) as excinfo:
            space.to_pair()
        assert excinfo.value.invariant == "antisymmetry"
