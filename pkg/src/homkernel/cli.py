"""Command line front end for the kernel.

Four subcommands cover the workflows the library supports end to end:

``check``      structural validations (Jacobi, non-reductivity, connection
               axioms, reference tables, symmetry loci) on a catalog family,
               a ``.space`` file, or the reductive ``toy`` pair.
``show``       the reference connection or curvature tables of a family.
``classify``   the hypersurface pipeline for one unit normal field.
``table1``     the family survey table, rebuilt from witness instances and
               seeded refutation sweeps.

Every executed check appears exactly once in the report.  Human output is a
line per check; ``--format machine`` switches to the stable line protocol

    SPACE <subject>
    CONSTRAINT <text>
    NOTE <token>
    CHECK <name> <PASS|FAIL|COND> [witness ...]
    VERDICT <slug>

where witness tokens never contain spaces.  A COND result lists polynomial
conditions: the checked property holds exactly when every listed expression
vanishes (tokens ``expr=0``), and genericity assumptions appear as
``expr!=0``.  Reports are deterministic given the same inputs and seed.

The process exit status is 0 when no non-advisory check fails; otherwise it
is the code of the first failing check: 1 jacobi, 2 nonreductive,
3 connection-axioms, 4 golden-lambda, 5 golden-curvature, 6 symmetric-locus,
7 constant-curvature-locus, 8 codazzi, 9 self-adjoint, 10 shape,
11 gauss-codazzi, 12 survey rows, 13 anything else.  Classification verdicts
(``parallel``, ``totally-geodesic``) are advisory: reporting that a candidate
is not totally geodesic is an answer, not a failure.  Usage and input errors
exit with status 2.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from pathlib import Path

from .cas import CasError
from .cas.linalg import Matrix
from .cas.parser import parse_expr, render
from .cas.poly import Poly, poly_gcd
from .cas.scalar import Scalar
from .connection import (
    ConstantCurvature,
    NotConstant,
    SingularGram,
    compute_lambda,
    connection_axiom_residuals,
    constant_curvature_fit,
    curvature,
    locally_symmetric_residual,
    pair_symmetry_residuals,
)
from .families import lookup
from .golden import golden_curvature, golden_lambda
from .homspace import (
    DegenerateMetric,
    HomogeneousPair,
    builtin_pair,
    nonreductivity_decide,
    toy_reductive_pair,
)
from .hypersurface import (
    CaseConstraintViolated,
    DegenerateFrame,
    FrameGramSingular,
    InducedMetricDegenerate,
    NormalComponentNonzero,
    NormalField,
    NotASubalgebra,
    NotFamilyA2,
    SymmetricLocus,
    TangentFrame,
    case_eliminations,
    case_phi,
    case_spec,
    case_table,
    codazzi_residual,
    frame_for_case,
    gauss_codazzi_verify,
    intrinsic_geometry,
    normal_for_case,
    normalize_A2_metric,
    orthogonal_frame,
    parallel_residual,
    self_adjoint_residual,
    shape_operator,
)
from .liealg import Vector
from .spacefile import ParseError as SpaceParseError
from .spacefile import ValidationError, parse_space

_COORD_NAMES = ("alpha", "beta", "gamma", "delta")

_CHECK_ORDER = (
    "jacobi",
    "nonreductive",
    "connection-axioms",
    "golden-lambda",
    "golden-curvature",
    "symmetric-locus",
    "constant-curvature-locus",
)
_FAMILY_CHECKS = frozenset(
    ("golden-lambda", "golden-curvature", "symmetric-locus", "constant-curvature-locus")
)

_EXIT_CODES = {
    "jacobi": 1,
    "nonreductive": 2,
    "connection-axioms": 3,
    "golden-lambda": 4,
    "golden-curvature": 5,
    "symmetric-locus": 6,
    "constant-curvature-locus": 7,
    "codazzi": 8,
    "self-adjoint": 9,
    "shape": 10,
    "gauss-codazzi": 11,
    "A1": 12,
    "A2": 12,
    "A3": 12,
    "A4": 12,
    "B1": 12,
    "B2": 12,
}

# parameter bindings that land a family on its locally symmetric locus, and
# on its constant curvature locus; keys match families.REGISTRY
_SYM_BINDS = {
    "A1": {"b": "0"},
    "A2": {"b": "0"},
    "A3+": {"d": "-b"},
    "A3-": {"d": "b"},
    "A4": {"b": "0"},
    "B2": {"b": "0"},
    "B1": {"d": "c*c/b"},
}
_CC_BINDS = {
    "A2": {"b": "0"},
    "A3+": {"d": "-b"},
    "A3-": {"d": "b"},
    "A4": {"b": "0"},
    "B2": {"b": "0"},
    "B1": {"b": "0", "c": "0", "d": "0"},
}


# -- report type -----------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one executed check.

    ``status`` is ``"pass"``, ``"fail"``, or ``"cond"``.  ``witnesses`` are
    short tokens: locus equations for a pass, offending positions or
    residuals for a failure, vanishing conditions for a conditional result.
    Advisory results report classification outcomes and never drive the
    process exit status.
    """

    name: str
    status: str
    witnesses: tuple[str, ...] = ()
    advisory: bool = False


@dataclass(frozen=True)
class Report:
    """A finished run: subject, executed checks, echoed constraints."""

    subject: str
    results: tuple[CheckResult, ...]
    constraints: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    verdict: str | None = None

    @property
    def exit_code(self) -> int:
        for result in self.results:
            if result.status == "fail" and not result.advisory:
                return _EXIT_CODES.get(result.name, 13)
        return 0

    @property
    def passed(self) -> bool:
        return self.exit_code == 0


def _squeeze(text: str) -> str:
    return text.replace(" ", "")


def render_machine(report: Report) -> str:
    lines = [f"SPACE {report.subject}"]
    lines.extend(f"CONSTRAINT {text}" for text in report.constraints)
    lines.extend(f"NOTE {_squeeze(note)}" for note in report.notes)
    for result in report.results:
        parts = [f"CHECK {result.name} {result.status.upper()}"]
        parts.extend(_squeeze(w) for w in result.witnesses)
        lines.append(" ".join(parts))
    if report.verdict is not None:
        lines.append(f"VERDICT {report.verdict}")
    return "\n".join(lines) + "\n"


_MARK = {"yes": "✓", "no": "✗"}


def _human_table(report: Report) -> list[str]:
    header = ("family", "codazzi", "proper parallel", "totally geodesic")
    rows = []
    for result in report.results:
        flags = dict(
            w.split("=", 1) for w in result.witnesses[:3] if "=" in w
        )
        rows.append(
            (
                result.name,
                _MARK.get(flags.get("codazzi", "?"), "?"),
                _MARK.get(flags.get("parallel", "?"), "?"),
                _MARK.get(flags.get("geodesic", "?"), "?"),
            )
        )
    widths = [max(len(r[i]) for r in (header, *rows)) for i in range(4)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    for result in report.results:
        extra = result.witnesses[3:]
        if result.status != "pass":
            extra = result.witnesses
        if extra:
            lines.append(f"{result.name}: {' '.join(extra)}")
    return lines


def render_human(report: Report) -> str:
    lines = [f"subject: {report.subject}"]
    lines.extend(f"constraint: {text}" for text in report.constraints)
    lines.extend(f"note: {note}" for note in report.notes)
    if report.subject == "table1":
        lines.extend(_human_table(report))
    else:
        width = max((len(r.name) for r in report.results), default=0)
        for result in report.results:
            tail = f"  {' '.join(result.witnesses)}" if result.witnesses else ""
            lines.append(f"{result.name.ljust(width)}  {result.status}{tail}")
    if report.verdict is not None:
        lines.append(f"verdict: {report.verdict}")
    counts = {"pass": 0, "fail": 0, "cond": 0}
    for result in report.results:
        counts[result.status] += 1
    lines.append(
        f"summary: {len(report.results)} checks, {counts['pass']} pass, "
        f"{counts['fail']} fail, {counts['cond']} conditional"
    )
    return "\n".join(lines) + "\n"


def render_report(report: Report, fmt: str = "human") -> str:
    return render_machine(report) if fmt == "machine" else render_human(report)


# -- polynomial condition helpers ------------------------------------------


def _content_free(poly: Poly) -> Poly:
    coeffs = [Fraction(c) for c in poly.terms.values()]
    if not coeffs:
        return poly
    content = Fraction(
        reduce(gcd, (abs(c.numerator) for c in coeffs)),
        reduce(lcm, (c.denominator for c in coeffs)),
    )
    if content == 1:
        return poly
    return Poly({m: Fraction(c) / content for m, c in poly.terms.items()})


def _canonical(value: Scalar) -> Scalar:
    """Forget denominators, constant content, and the overall sign."""
    cond = Scalar(_content_free(value.num))
    if render(cond).startswith("-"):
        cond = -cond
    return cond


def _divides(factor: Scalar, value: Scalar) -> bool:
    if factor.is_zero:
        return False
    return Scalar((value / factor).den).is_constant


def _strip_nonzero(cond: Scalar, nonzero: set[str]) -> Scalar:
    for name in sorted(nonzero):
        unit = Scalar.param(name)
        while not cond.is_constant and _divides(unit, cond):
            cond = Scalar((cond / unit).num)
    return cond


def _obstructions(labeled, nonzero):
    """Split nonzero residual entries into conditions and impossibilities.

    ``labeled`` yields ``(label, scalar)`` pairs.  Returns the minimal list
    of canonical vanishing conditions under divisibility, plus the labeled
    raw values whose vanishing is blocked by the known-nonzero symbols.
    """
    conditions: dict[str, Scalar] = {}
    blocked: list[tuple[str, Scalar]] = []
    for label, value in labeled:
        if value.is_zero:
            continue
        cond = _canonical(_strip_nonzero(_canonical(Scalar(value.num)), nonzero))
        if cond.is_constant:
            blocked.append((label, value))
        else:
            conditions.setdefault(render(cond), cond)
    ordered = sorted(conditions.values(), key=lambda c: (len(render(c)), render(c)))
    kept: list[Scalar] = []
    for cond in ordered:
        if not any(_divides(previous, cond) for previous in kept):
            kept.append(cond)
    return kept, blocked


def _condition_token(cond: Scalar, phi: Scalar | None) -> str:
    if phi is not None and not phi.is_constant:
        factor = _canonical(Scalar(phi.num))
        quotient = cond / factor
        if Scalar(quotient.den).is_constant and not quotient.is_constant:
            cofactor = _canonical(Scalar(quotient.num))
            return f"({render(cofactor)})*({render(factor)})=0"
    return f"{render(cond)}=0"


def _classified(name, labeled, nonzero, phi=None, advisory=True) -> CheckResult:
    kept, blocked = _obstructions(labeled, nonzero)
    if not kept and not blocked:
        return CheckResult(name, "pass", (), advisory)
    if blocked:
        shown = tuple(
            f"{label}={_squeeze(render(value))}" for label, value in blocked[:3]
        )
        return CheckResult(name, "fail", ("never", *shown), advisory)
    tokens = tuple(_condition_token(cond, phi) for cond in kept)
    return CheckResult(name, "cond", tokens, advisory)


def _vector_entries(prefix, mapping):
    for key in sorted(mapping):
        vec = mapping[key]
        label = "(" + ",".join(f"V{i + 1}" for i in key) + ")"
        for m in range(vec.dim):
            yield f"{prefix}{label}[{m}]", vec[m]


def _matrix_entries(prefix, matrix, rows, cols):
    for i in range(rows):
        for j in range(cols):
            yield f"{prefix}[{i}][{j}]", matrix[i, j]


def _matrix_token(matrix: Matrix, rows: int, cols: int) -> str:
    body = ",".join(
        "[" + ",".join(_squeeze(render(matrix[i, j])) for j in range(cols)) + "]"
        for i in range(rows)
    )
    return f"[{body}]"


def _forced_nonzero(pair: HomogeneousPair) -> set[str]:
    """Parameters the nondegeneracy determinant forces away from zero."""
    det = pair.metric.nondegeneracy_condition
    names = set()
    for name in det.variables():
        if det.substitute({name: Scalar.zero()}).is_zero:
            names.add(name)
    return names


# -- check command ---------------------------------------------------------


def _local_params(pair: HomogeneousPair) -> tuple[str, ...]:
    names = list(pair.metric.params)
    extra = set()
    for vec in pair.g.table.values():
        for i in range(vec.dim):
            extra.update(vec[i].variables())
    for name in sorted(extra):
        if name not in names:
            names.append(name)
    return tuple(names)


def _family_scalar(pair: HomogeneousPair, src: str) -> Scalar:
    return parse_expr(src, _local_params(pair))


def _jacobi_check(pair, ctx) -> CheckResult:
    g = pair.g
    if g.is_lie:
        return CheckResult("jacobi", "pass")
    n = len(g.basis_names)
    basis = [Vector.basis(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                x, y, z = basis[i], basis[j], basis[k]
                total = (
                    g.bracket(x, g.bracket(y, z))
                    + g.bracket(y, g.bracket(z, x))
                    + g.bracket(z, g.bracket(x, y))
                )
                if not total.is_zero:
                    return CheckResult(
                        "jacobi",
                        "fail",
                        (f"triple=(e{i + 1},e{j + 1},e{k + 1})",),
                    )
    return CheckResult("jacobi", "fail", ("residual-not-located",))


def _nonreductive_check(pair, ctx) -> CheckResult:
    decision = nonreductivity_decide(pair)
    if decision.kind == "non_reductive":
        return CheckResult("nonreductive", "pass", ("non-reductive",))
    if decision.kind == "reductive":
        phi = decision.phi
        token = _matrix_token(phi, pair.dim_h, pair.dim_m)
        return CheckResult("nonreductive", "fail", ("reductive", f"phi={token}"))
    conditions = tuple(
        f"{_squeeze(render(g))}!=0" for g in decision.genericity
    )
    return CheckResult("nonreductive", "cond", conditions)


def _connection(pair, ctx):
    if "conn" not in ctx:
        ctx["conn"] = compute_lambda(pair)
    return ctx["conn"]


def _curvature(pair, ctx):
    if "curv" not in ctx:
        ctx["curv"] = curvature(pair, _connection(pair, ctx))
    return ctx["curv"]


def _axioms_check(pair, ctx) -> CheckResult:
    conn = _connection(pair, ctx)
    residuals = connection_axiom_residuals(pair, conn)
    for key in sorted(residuals["torsion"]):
        if not residuals["torsion"][key].is_zero:
            return CheckResult(
                "connection-axioms", "fail", ("axiom=torsion", f"at={key}")
            )
    for key in sorted(residuals["compat"]):
        if not residuals["compat"][key].is_zero:
            return CheckResult(
                "connection-axioms", "fail", ("axiom=compatibility", f"at={key}")
            )
    for key in sorted(residuals["isotropy"]):
        if not residuals["isotropy"][key].is_zero():
            return CheckResult(
                "connection-axioms", "fail", ("axiom=isotropy", f"at={key}")
            )
    curv = _curvature(pair, ctx)
    for key, value in curv.bianchi:
        if not value.is_zero:
            return CheckResult(
                "connection-axioms", "fail", ("axiom=bianchi", f"at={key}")
            )
    symmetry = pair_symmetry_residuals(pair, curv)
    for key in sorted(symmetry):
        if not symmetry[key].is_zero:
            return CheckResult(
                "connection-axioms", "fail", ("axiom=pair-symmetry", f"at={key}")
            )
    return CheckResult("connection-axioms", "pass")


def _golden_lambda_check(pair, ctx) -> CheckResult:
    conn = _connection(pair, ctx)
    reference = golden_lambda(pair.family.key)
    for i in range(pair.dim_m):
        if conn.on_complement(i) != reference[i]:
            return CheckResult(
                "golden-lambda", "fail", (f"matrix=lambda(u{i + 1})",)
            )
    return CheckResult("golden-lambda", "pass")


def _golden_curvature_check(pair, ctx) -> CheckResult:
    curv = _curvature(pair, ctx)
    for pos, mat in golden_curvature(pair.family.key).items():
        if curv.matrix(*pos) != mat:
            i, j = pos
            return CheckResult(
                "golden-curvature", "fail", (f"matrix=R(u{i + 1},u{j + 1})",)
            )
    return CheckResult("golden-curvature", "pass")


def _symmetric_locus_check(pair, ctx) -> CheckResult:
    fam = pair.family
    residuals = locally_symmetric_residual(
        pair, _connection(pair, ctx), _curvature(pair, ctx)
    )
    binds = {
        name: _family_scalar(pair, src) for name, src in _SYM_BINDS[fam.key].items()
    }
    off_locus = any(not mat.is_zero() for mat in residuals.values())
    on_locus = all(mat.substitute(binds).is_zero() for mat in residuals.values())
    tokens = tuple(f"{_squeeze(text)}=0" for text in fam.symmetric_locus)
    if on_locus and off_locus:
        return CheckResult("symmetric-locus", "pass", tokens)
    if not on_locus:
        return CheckResult("symmetric-locus", "fail", ("residual-on-locus", *tokens))
    return CheckResult("symmetric-locus", "fail", ("symmetric-everywhere",))


def _witness_token(witness) -> str:
    return "R(" + ",".join(f"u{i + 1}" for i in witness) + ")"


def _constant_curvature_check(pair, ctx) -> CheckResult:
    fam = pair.family
    generic_fit = constant_curvature_fit(pair, _curvature(pair, ctx))
    if fam.constant_curvature_locus is None:
        if isinstance(generic_fit, NotConstant):
            return CheckResult(
                "constant-curvature-locus",
                "pass",
                ("empty", f"witness={_witness_token(generic_fit.witness)}"),
            )
        return CheckResult(
            "constant-curvature-locus",
            "fail",
            (f"K={_squeeze(render(generic_fit.k))}",),
        )
    if not isinstance(generic_fit, NotConstant):
        return CheckResult("constant-curvature-locus", "fail", ("constant-off-locus",))
    binds = {
        name: _family_scalar(pair, src) for name, src in _CC_BINDS[fam.key].items()
    }
    bound = pair.substitute(binds)
    fit = constant_curvature_fit(bound, curvature(bound, compute_lambda(bound)))
    if isinstance(fit, ConstantCurvature):
        tokens = tuple(f"{_squeeze(text)}=0" for text in fam.constant_curvature_locus)
        return CheckResult(
            "constant-curvature-locus",
            "pass",
            (*tokens, f"K={_squeeze(render(fit.k))}"),
        )
    return CheckResult(
        "constant-curvature-locus",
        "fail",
        ("fit-failed-on-locus", f"witness={_witness_token(fit.witness)}"),
    )


_CHECK_FUNCS = {
    "jacobi": _jacobi_check,
    "nonreductive": _nonreductive_check,
    "connection-axioms": _axioms_check,
    "golden-lambda": _golden_lambda_check,
    "golden-curvature": _golden_curvature_check,
    "symmetric-locus": _symmetric_locus_check,
    "constant-curvature-locus": _constant_curvature_check,
}


def run_checks(
    pair: HomogeneousPair,
    checks=None,
    *,
    subject: str | None = None,
    constraints=None,
) -> Report:
    """Run structural checks on a pair and collect the report.

    ``checks`` defaults to every check the pair supports: all seven for a
    catalog family, the first three for an unrecognized space.  Requesting a
    family-only check for a family-less pair raises ValueError.
    """
    fam = pair.family
    available = _CHECK_ORDER if fam else tuple(
        name for name in _CHECK_ORDER if name not in _FAMILY_CHECKS
    )
    if checks is None:
        selected = available
    else:
        chosen = []
        for name in checks:
            if name not in _CHECK_ORDER:
                known = ", ".join(_CHECK_ORDER)
                raise ValueError(f"unknown check {name!r} (have: {known})")
            if name not in available:
                raise ValueError(f"check {name!r} needs a catalog family")
            if name not in chosen:
                chosen.append(name)
        selected = tuple(sorted(chosen, key=_CHECK_ORDER.index))
    if constraints is None:
        constraints = (f"{fam.nondegeneracy} != 0",) if fam else ()
    ctx: dict = {}
    results = tuple(_CHECK_FUNCS[name](pair, ctx) for name in selected)
    return Report(
        subject or (fam.key if fam else "space"), results, tuple(constraints)
    )


# -- classify command ------------------------------------------------------


def _declared_names(pair: HomogeneousPair) -> tuple[str, ...]:
    names = list(_local_params(pair))
    for name in _COORD_NAMES:
        if name not in names:
            names.append(name)
    return tuple(names)


def _parse_vector(texts, params, what) -> Vector:
    if len(texts) != 4:
        raise ValueError(f"{what} needs 4 comma-separated components")
    return Vector([parse_expr(text.strip(), params) for text in texts])


def _solve_unit_norm(pair, coords, eps):
    """Bind one symbol so the normal becomes unit, or raise ValueError."""
    xi = Vector(coords)
    residual = pair.metric.ip(xi, xi) - Scalar.from_fraction(eps)
    if residual.is_zero:
        return pair, xi, {}
    free = set()
    for component in coords:
        free.update(component.variables())
    candidates = list(reversed(pair.metric.params))
    candidates.extend(n for n in reversed(_COORD_NAMES) if n in free)
    zero, one = Scalar.zero(), Scalar.one()
    for name in candidates:
        base = residual.substitute({name: zero})
        slope = residual.substitute({name: one}) - base
        if slope.is_zero:
            continue
        solution = -base / slope
        if not residual.substitute({name: solution}).is_zero:
            continue
        try:
            bound = pair.substitute({name: solution})
        except (DegenerateMetric, ValueError):
            continue
        new_coords = [c.substitute({name: solution}) for c in coords]
        return bound, Vector(new_coords), {name: solution}
    raise ValueError(
        "the normal is not unit, and no single symbol binding makes it unit"
    )


def _case_nonzero(spec, xi: NormalField) -> set[str]:
    names = set()
    for slot in spec.nonzero_slots:
        poly = xi.xi[slot].num
        if len(poly.terms) == 1:
            (mono,) = poly.terms
            names.update(var for var, _ in mono)
    return names


def _closure_note(exc: NotASubalgebra) -> str:
    text = str(exc)
    head = text.split("]")[0] + "]" if "]" in text else text
    return f"frame-not-closed={_squeeze(head)}"


def _verdict(results: dict[str, CheckResult]) -> str:
    codazzi = results["codazzi"].status
    if codazzi == "fail":
        return "not-codazzi"
    parallel = results.get("parallel")
    geodesic = results.get("totally-geodesic")
    if parallel is None or geodesic is None:
        return "undetermined"
    if parallel.status == "pass" and geodesic.status == "pass":
        return "totally-geodesic"
    if parallel.status == "pass" and geodesic.status == "fail":
        return "proper-parallel"
    if parallel.status == "pass":
        return "parallel"
    if parallel.status == "cond":
        return "conditional"
    return "codazzi-only"


def classify(
    pair: HomogeneousPair,
    normal: str,
    eps: int,
    *,
    case: str | None = None,
    frame: str | None = None,
    binds=None,
    subject: str | None = None,
    constraints=None,
) -> Report:
    """Run the hypersurface pipeline for one constant normal field.

    ``normal`` holds four comma-separated coefficient expressions over the
    declared parameters and the coordinate symbols alpha..delta.  A ``case``
    tag applies that case's vanishing pattern and parameter eliminations; a
    semicolon-separated ``frame`` supplies three tangent vectors; with
    neither, an orthogonal complement frame is computed.  ``binds`` fixes
    parameters first.  The pipeline reports the Codazzi equation, shape
    operator self-adjointness, parallelism, and the intrinsic cross-check
    when the frame closes under the bracket.
    """
    fam = pair.family
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    notes: list[str] = []
    if fam is not None and fam.key == "A2":
        pair, _ = normalize_A2_metric(pair)
        notes.append("metric-normalized")
    params = _declared_names(pair)
    if binds:
        bind_map = {}
        for name, src in binds.items():
            if name not in params:
                raise ValueError(f"cannot bind unknown parameter {name!r}")
            bind_map[name] = parse_expr(src, params)
        pair = pair.substitute(bind_map)
        notes.extend(
            f"bind:{name}={_squeeze(render(value))}"
            for name, value in sorted(bind_map.items())
        )
    else:
        bind_map = {}
    coords = list(_parse_vector(normal.split(","), params, "the normal"))
    if bind_map:
        coords = [c.substitute(bind_map) for c in coords]

    nonzero = set()
    if case is not None:
        if fam is None:
            raise ValueError("case tags need a catalog family")
        if not case_table(fam.key):
            raise ValueError(f"family {fam.key} has no hypersurface case table")
        if frame is not None:
            raise ValueError("give either a case tag or an explicit frame")
        eliminations = case_eliminations(fam.key, case, eps, coords)
        bound, xi = normal_for_case(pair, fam.key, case, eps, coords)
        notes.extend(
            f"bind:{name}={_squeeze(render(value))}"
            for name, value in sorted(eliminations.items())
        )
        spec = case_spec(fam.key, case)
        if spec.kappa is not None:
            notes.append(f"bind:kappa={spec.kappa}")
        tangent = frame_for_case(fam.key, case, xi)
        nonzero |= _case_nonzero(spec, xi)
        try:
            phi = case_phi(fam.key, case, xi).value
        except ValueError:
            phi = None
    else:
        bound, xi_vec, solved = _solve_unit_norm(pair, coords, eps)
        notes.extend(
            f"bind:{name}=({_squeeze(render(value))})"
            for name, value in solved.items()
        )
        xi = NormalField(bound, xi_vec, eps)
        if frame is not None:
            vectors = [
                _parse_vector(part.split(","), params, "each frame vector")
                for part in frame.split(";")
            ]
            if len(vectors) != 3:
                raise ValueError("the frame needs 3 semicolon-separated vectors")
            if bind_map or solved:
                merged = {**bind_map, **solved}
                vectors = [v.substitute(merged) for v in vectors]
            tangent = TangentFrame(xi, vectors)
        else:
            tangent = orthogonal_frame(bound, xi)
        phi = None
    nonzero |= _forced_nonzero(bound)

    conn = compute_lambda(bound)
    curv = curvature(bound, conn)
    results: dict[str, CheckResult] = {}

    codazzi = codazzi_residual(bound, conn, xi, tangent, curv)
    nonzero_pairs = [
        key for key in sorted(codazzi) if not codazzi[key].is_zero
    ]
    if not nonzero_pairs:
        results["codazzi"] = CheckResult("codazzi", "pass")
    else:
        tokens = [
            f"R(V{i + 1},V{j + 1})!=0" for i, j in nonzero_pairs
        ]
        factors = set()
        shortest = None
        for key in nonzero_pairs:
            vec = codazzi[key]
            parts = [vec[m] for m in range(vec.dim) if not vec[m].is_zero]
            common = Scalar(reduce(poly_gcd, [p.num for p in parts]))
            if not common.is_constant:
                factors.add(render(_canonical(common)))
            for part in parts:
                text = render(part)
                if shortest is None or (len(text), text) < (
                    len(shortest),
                    shortest,
                ):
                    shortest = text
        tokens.extend(f"factor={_squeeze(t)}" for t in sorted(factors))
        if shortest is not None:
            tokens.append(f"residual={_squeeze(shortest)}")
        results["codazzi"] = CheckResult("codazzi", "fail", tuple(tokens))

    try:
        shape = shape_operator(bound, conn, xi, tangent)
    except (NormalComponentNonzero, FrameGramSingular, ArithmeticError) as exc:
        results["shape"] = CheckResult(
            "shape", "fail", (f"error={type(exc).__name__}",)
        )
        ordered = [results["codazzi"], results["shape"]]
        return Report(
            subject or (fam.key if fam else "space"),
            tuple(ordered),
            tuple(constraints or ()),
            tuple(notes),
            "undetermined",
        )
    results["shape"] = CheckResult("shape", "pass")

    adjoint = self_adjoint_residual(bound, tangent, shape)
    results["self-adjoint"] = _classified(
        "self-adjoint",
        _matrix_entries("", adjoint, 3, 3),
        nonzero,
        advisory=False,
    )

    data = parallel_residual(bound, conn, xi, tangent, shape)
    results["parallel"] = _classified(
        "parallel", _vector_entries("D", data.residuals), nonzero, phi
    )
    results["totally-geodesic"] = _classified(
        "totally-geodesic", _matrix_entries("S", shape.S, 3, 3), nonzero, phi
    )

    ordered = [
        results["codazzi"],
        results["self-adjoint"],
        results["shape"],
        results["parallel"],
        results["totally-geodesic"],
    ]
    try:
        intrinsic = intrinsic_geometry(bound, tangent)
    except NotASubalgebra as exc:
        notes.append(_closure_note(exc))
    except InducedMetricDegenerate:
        notes.append("induced-metric-degenerate")
    else:
        verify = gauss_codazzi_verify(
            bound, conn, xi, tangent, shape, intrinsic, curv
        )
        offender = None
        for section in sorted(verify):
            for key in sorted(verify[section]):
                if not verify[section][key].is_zero:
                    offender = (section, key)
                    break
            if offender:
                break
        if offender is None:
            results["gauss-codazzi"] = CheckResult("gauss-codazzi", "pass")
        else:
            results["gauss-codazzi"] = CheckResult(
                "gauss-codazzi",
                "fail",
                (f"part={offender[0]}", f"at={offender[1]}"),
            )
        ordered.append(results["gauss-codazzi"])

    return Report(
        subject or (fam.key if fam else "space"),
        tuple(ordered),
        tuple(constraints or ()),
        tuple(notes),
        _verdict(results),
    )


# -- table1 command --------------------------------------------------------

# witness instances: (key, case tag, eps, coords, parameter binds,
# expected parallel flag, expected totally geodesic flag); the Codazzi and
# self-adjointness residuals are expected to vanish for every row
_TABLE_WITNESSES = {
    "A2": (
        ("A2", "i", 1, ("2", "0", "0", "1"), {"k": "1"}, False, False),
        ("A2", "i", 1, ("2", "0", "0", "1"), {"k": "-1"}, True, False),
        ("A2", "i", 1, ("1", "0", "0", "1"), {"k": "0"}, True, True),
    ),
    "A3": (
        ("A3+", "ii", 1, ("1", "0", "1", "0"), {"a": "1", "c": "0", "d": "3"}, False, False),
        ("A3-", "ii", -1, ("1", "0", "1", "0"), {"a": "1", "c": "0", "d": "3"}, False, False),
        ("A3+", "ii", 1, ("0", "0", "1", "0"), {"a": "1", "c": "0", "d": "1"}, True, False),
        ("A3-", "ii", -1, ("0", "0", "1", "0"), {"a": "1", "c": "0", "d": "1"}, True, False),
        ("A3+", "i", 1, ("0", "1", "0", "0"), {"b": "1", "c": "0", "d": "2"}, True, True),
        ("A3-", "i", -1, ("0", "1", "0", "0"), {"b": "1", "c": "0", "d": "2"}, True, True),
    ),
    "A4": (
        ("A4", "ii", 1, ("1", "0", "1", "0"), {"b": "2"}, True, False),
        ("A4", "i", 1, ("0", "0", "0", "1"), {"b": "1"}, True, True),
    ),
    "B2": (
        ("B2", "ii", -1, ("1", "0", "1", "0"), {"b": "2"}, True, False),
        ("B2", "i", -1, ("0", "0", "0", "1"), {"b": "1"}, True, True),
    ),
}

_SWEEP_PARAMS = ("a", "b", "c", "d", "k", "alpha", "beta", "gamma", "delta")


def _sweep_scalar(src) -> Scalar:
    return parse_expr(str(src), _SWEEP_PARAMS)


def _sweep_vector(*exprs) -> Vector:
    return Vector([_sweep_scalar(e) for e in exprs])


def _base_pair(key: str) -> HomogeneousPair:
    pair = builtin_pair(key)
    if key == "A2":
        pair = pair.substitute(
            {"a": Scalar.one(), "b": Scalar.one(), "c": Scalar.zero()}
        )
    return pair


def _witness_flags(row):
    key, tag, eps, coords, binds, want_parallel, want_geodesic = row
    pair = _base_pair(key).substitute(
        {name: _sweep_scalar(src) for name, src in binds.items()}
    )
    bound, xi = normal_for_case(
        pair, key, tag, eps, [_sweep_scalar(c) for c in coords]
    )
    tangent = frame_for_case(key, tag, xi)
    conn = compute_lambda(bound)
    curv = curvature(bound, conn)
    codazzi = codazzi_residual(bound, conn, xi, tangent, curv)
    if any(not vec.is_zero for vec in codazzi.values()):
        return "codazzi"
    shape = shape_operator(bound, conn, xi, tangent)
    if not self_adjoint_residual(bound, tangent, shape).is_zero():
        return "self-adjoint"
    data = parallel_residual(bound, conn, xi, tangent, shape)
    if data.parallel is not want_parallel:
        return "parallel"
    if data.totally_geodesic is not want_geodesic:
        return "totally-geodesic"
    return None


def _existence_row(base: str) -> CheckResult:
    proper = geodesic = False
    for row in _TABLE_WITNESSES[base]:
        mismatch = _witness_flags(row)
        if mismatch is not None:
            label = f"{row[0]}.{row[1]}"
            return CheckResult(
                base, "fail", (f"witness={label}", f"stage={mismatch}")
            )
        _, _, _, _, _, want_parallel, want_geodesic = row
        proper = proper or (want_parallel and not want_geodesic)
        geodesic = geodesic or want_geodesic
    tokens = (
        "codazzi=yes",
        f"parallel={'yes' if proper else 'no'}",
        f"geodesic={'yes' if geodesic else 'no'}",
    )
    return CheckResult(base, "pass", tokens)


def _chain_residual(curv, x, y, xi) -> Vector:
    return Vector(curv.of_vectors(x, y).mat_vec(list(xi)))


def _staged_factor(curv, x, y, xi, binds) -> str:
    staged = _chain_residual(curv, x, y, xi).substitute(binds)
    parts = [staged[m].num for m in range(staged.dim) if not staged[m].is_zero]
    common = _canonical(Scalar(reduce(poly_gcd, parts)))
    return f"factor={_squeeze(render(common))}"


def _lemma_tokens(key: str) -> tuple[str, ...]:
    """Common factors of the staged curvature obstructions.

    Every admissible tangent pair for a constant unit normal forces these
    products to vanish; the surviving factors name the structure parameters
    whose vanishing would be required, which the open parameter ranges
    exclude.
    """
    pair = builtin_pair(key)
    curv = curvature(pair, compute_lambda(pair))
    xi = _sweep_vector("alpha", "beta", "gamma", "delta")
    zero = Scalar.zero()
    if key == "A1":
        y = _sweep_vector(0, 0, "2*a*beta", "a*alpha - 2*c*beta - 2*d*gamma")
        z = _sweep_vector(0, "a*beta", 0, "-(a*delta + b*beta)")
        return (_staged_factor(curv, y, z, xi, {"gamma": zero}),)
    x = _sweep_vector("a*alpha + d*gamma", 0, "-a*gamma", 0)
    y = _sweep_vector("a*delta + c*gamma", "-a*gamma", 0, 0)
    z = _sweep_vector(0, 0, 0, 1)
    x2 = _sweep_vector("beta", 0, 0, "-gamma")
    y2 = _sweep_vector(0, "a*beta", 0, "-(a*delta + b*beta + c*gamma)")
    return (
        _staged_factor(curv, x, z, xi, {"beta": zero}),
        _staged_factor(curv, y, z, xi, {"beta": zero, "d": zero}),
        _staged_factor(curv, x2, y2, xi, {"c": zero, "d": zero}),
    )


def _sweep(key: str, rng: random.Random, wanted: int = 100):
    """Draw admissible constant unit normals; count Codazzi counterexamples.

    Returns ``(samples, found)`` where ``found`` collects coordinates whose
    full Codazzi residual vanished, which would contradict the refutation.
    """
    samples = 0
    found = []
    while samples < wanted:
        binds = {
            name: Fraction(rng.randint(-20, 20), rng.randint(1, 20))
            for name in ("a", "b", "c", "d")
        }
        try:
            pair = builtin_pair(key).substitute(
                {n: Scalar.from_fraction(v) for n, v in binds.items()}
            )
        except (DegenerateMetric, ValueError):
            continue
        conn = compute_lambda(pair)
        curv = curvature(pair, conn)
        u4 = Vector.basis(4, 3)
        attempts = 0
        while samples < wanted and attempts < 40:
            attempts += 1
            eps = rng.choice((1, -1))
            head = [
                Scalar.from_fraction(Fraction(rng.randint(-20, 20), rng.randint(1, 20)))
                for _ in range(3)
            ]
            partial = Vector(head + [Scalar.zero()])
            slope = pair.metric.ip(partial, u4) + pair.metric.ip(u4, partial)
            if slope.is_zero:
                continue
            offset = pair.metric.ip(partial, partial)
            delta = (Scalar.from_fraction(eps) - offset) / slope
            xi = Vector(head + [delta])
            normal = NormalField(pair, xi, eps)
            try:
                tangent = orthogonal_frame(pair, normal)
            except DegenerateFrame:
                continue
            residual = codazzi_residual(pair, conn, normal, tangent, curv)
            if all(vec.is_zero for vec in residual.values()):
                found.append(tuple(render(xi[m]) for m in range(4)))
            samples += 1
    return samples, found


def _refutation_row(key: str, seed: int) -> CheckResult:
    rng = random.Random(f"{seed}:{key}")
    samples, found = _sweep(key, rng)
    if found:
        return CheckResult(
            key, "fail", ("codazzi-instance-found", f"normal=({','.join(found[0])})")
        )
    tokens = (
        "codazzi=no",
        "parallel=no",
        "geodesic=no",
        f"samples={samples}",
        *_lemma_tokens(key),
    )
    return CheckResult(key, "pass", tokens)


def table1_report(seed: int = 0) -> Report:
    """Rebuild the survey table: witnesses for existence, sweeps against it."""
    results = []
    for base in ("A1", "A2", "A3", "A4", "B1", "B2"):
        if base in ("A1", "B1"):
            results.append(_refutation_row(base, seed))
        else:
            results.append(_existence_row(base))
    return Report("table1", tuple(results), (), (f"seed={seed}",))


# -- show command ----------------------------------------------------------


def _matrix_lines(title: str, matrix: Matrix, dim: int) -> list[str]:
    lines = [f"{title} ="]
    for i in range(dim):
        row = ", ".join(render(matrix[i, j]) for j in range(dim))
        lines.append(f"  [{row}]")
    return lines


def show_tables(what: str, key: str) -> str:
    """Render the reference connection or curvature tables of a family."""
    fam = lookup(key)
    pair = builtin_pair(fam.key)
    conn = compute_lambda(pair)
    dim = pair.dim_m
    lines = [f"family: {fam.display}"]
    if what == "lambda":
        for i in range(dim):
            lines.extend(_matrix_lines(f"lambda(u{i + 1})", conn.on_complement(i), dim))
    else:
        curv = curvature(pair, conn)
        for i in range(dim):
            for j in range(i + 1, dim):
                lines.extend(
                    _matrix_lines(f"R(u{i + 1},u{j + 1})", curv.matrix(i, j), dim)
                )
    return "\n".join(lines) + "\n"


# -- argument parsing and entry point --------------------------------------


def _resolve_target(target: str):
    """A family key, the literal ``toy``, or a space file path."""
    if target == "toy":
        return toy_reductive_pair(), "toy", ()
    path = Path(target)
    if target.endswith(".space") or path.is_file():
        text = path.read_text(encoding="utf-8")
        space = parse_space(text, source=str(path))
        return space.to_pair(), str(path), space.constraint_texts
    fam = lookup(target)
    pair = builtin_pair(fam.key)
    return pair, fam.key, (f"{fam.nondegeneracy} != 0",)


def _eps_value(text: str) -> int:
    cleaned = text.strip()
    if cleaned in ("+1", "1"):
        return 1
    if cleaned == "-1":
        return -1
    raise argparse.ArgumentTypeError("eps must be +1 or -1")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homkernel",
        description="exact checks for non-reductive homogeneous 4-spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run structural checks")
    check.add_argument("target", help="family key, space file, or 'toy'")
    check.add_argument(
        "--checks",
        nargs="+",
        metavar="NAME",
        help="subset of checks (comma or space separated)",
    )
    check.add_argument("--seed", type=int, default=0, help="reserved; default 0")
    check.add_argument("--format", choices=("human", "machine"), default="human")

    show = sub.add_parser("show", help="print reference tables")
    show.add_argument("what", choices=("lambda", "curvature"))
    show.add_argument("family")

    classify_cmd = sub.add_parser("classify", help="classify one normal field")
    classify_cmd.add_argument("target", help="family key or space file")
    classify_cmd.add_argument(
        "--normal", required=True, help="four comma-separated coefficients"
    )
    classify_cmd.add_argument("--eps", required=True, type=_eps_value)
    classify_cmd.add_argument("--case", help="case tag, e.g. i or ii")
    classify_cmd.add_argument(
        "--frame", help="three tangent vectors, semicolon separated"
    )
    classify_cmd.add_argument(
        "--bind",
        action="append",
        default=[],
        metavar="NAME=EXPR",
        help="fix a parameter before classifying",
    )
    classify_cmd.add_argument("--format", choices=("human", "machine"), default="human")

    table = sub.add_parser("table1", help="rebuild the survey table")
    table.add_argument("--seed", type=int, default=0, help="sweep seed")
    table.add_argument("--format", choices=("human", "machine"), default="human")
    return parser


_CLI_ERRORS = (
    CasError,
    SpaceParseError,
    ValidationError,
    ValueError,
    KeyError,
    OSError,
    CaseConstraintViolated,
    DegenerateFrame,
    FrameGramSingular,
    NormalComponentNonzero,
    NotASubalgebra,
    NotFamilyA2,
    SymmetricLocus,
    InducedMetricDegenerate,
    DegenerateMetric,
    SingularGram,
)


def _dispatch(args) -> tuple[str, int]:
    if args.command == "check":
        pair, subject, constraints = _resolve_target(args.target)
        names = None
        if args.checks:
            names = [
                piece
                for chunk in args.checks
                for piece in chunk.split(",")
                if piece
            ]
        report = run_checks(pair, names, subject=subject, constraints=constraints)
        return render_report(report, args.format), report.exit_code
    if args.command == "show":
        return show_tables(args.what, args.family), 0
    if args.command == "classify":
        pair, subject, constraints = _resolve_target(args.target)
        binds = {}
        for item in args.bind:
            name, sep, src = item.partition("=")
            if not sep or not name or not src:
                raise ValueError(f"bad --bind {item!r}; expected NAME=EXPR")
            binds[name.strip()] = src.strip()
        report = classify(
            pair,
            args.normal,
            args.eps,
            case=args.case,
            frame=args.frame,
            binds=binds,
            subject=subject,
            constraints=constraints,
        )
        return render_report(report, args.format), report.exit_code
    report = table1_report(args.seed)
    return render_report(report, args.format), report.exit_code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        text, code = _dispatch(args)
    except _CLI_ERRORS as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
