"""Catalog of the six homogeneous families: algebras, complements, metrics.

Each entry fixes a transitive Lie algebra with bracket table, an
isotropy subalgebra h, a complement m = span{u_1..u_4}, and the general
invariant metric written as a quadratic expression in the dual symbols
t1..t4 (ti*tj stands for the symmetric product of the dual one-forms, so
the Gram matrix carries half of every mixed coefficient).

The A3 family splits into two entries by the sign eta = +-1 baked into
its bracket table; A4 and B2 share one bracket table and differ in the
isotropy subalgebra and the sign eta inside the metric.  Four-dimensional
bracket tables for the complements (where m closes under the bracket)
are stored alongside, in the u-basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cas import Scalar
from .liealg import LieAlgebra, Vector

Coords = tuple  # sparse coordinate spec: {index: coefficient}


def _vec(dim: int, entries: Mapping[int, object]) -> tuple:
    """Dense coordinate tuple from 1-based sparse entries."""
    out = [0] * dim
    for idx, value in entries.items():
        out[idx - 1] = value
    return tuple(out)


_K = Scalar.param("k")


@dataclass(frozen=True)
class FamilyData:
    """Immutable description of one family of homogeneous spaces."""

    key: str
    display: str
    g_dim: int
    g_brackets: Mapping[tuple[int, int], tuple]  # 0-based pairs, dense coords
    h_vectors: tuple  # tuples of dense coords, basis of the isotropy
    m_vectors: tuple  # u_1..u_4 as dense coords in the e-basis
    metric_theta: str  # quadratic in t1..t4 over the metric parameters
    metric_params: tuple[str, ...]
    structure_params: tuple[str, ...]
    nondegeneracy: str  # parameter expression that must not vanish
    symmetric_locus: tuple[str, ...]  # generators; empty = never symmetric
    constant_curvature_locus: tuple[str, ...] | None  # None = never
    sig_discriminant: str | None  # sign decides Lorentzian vs neutral
    m_table: Mapping[tuple[int, int], tuple] | None  # u-basis table if closed
    model: str

    def algebra(self) -> LieAlgebra:
        names = tuple(f"e{i}" for i in range(1, self.g_dim + 1))
        return LieAlgebra(names, dict(self.g_brackets))

    def m_algebra(self) -> LieAlgebra | None:
        if self.m_table is None:
            return None
        return LieAlgebra(("u1", "u2", "u3", "u4"), dict(self.m_table))

    def h_basis(self) -> list[Vector]:
        return [Vector(v) for v in self.h_vectors]

    def m_basis(self) -> list[Vector]:
        return [Vector(v) for v in self.m_vectors]


def _family_a1() -> FamilyData:
    d = 5
    return FamilyData(
        key="A1",
        display="A1",
        g_dim=d,
        g_brackets={
            (0, 1): _vec(d, {2: 2}),
            (0, 2): _vec(d, {3: -2}),
            (1, 2): _vec(d, {1: 1}),
            (3, 4): _vec(d, {4: 1}),
        },
        h_vectors=(_vec(d, {3: 1, 4: 1}),),
        m_vectors=(
            _vec(d, {1: 1}),
            _vec(d, {2: 1}),
            _vec(d, {5: 1}),
            _vec(d, {3: 2}),
        ),
        metric_theta="a*(t1*t1 - t1*t3 + 2*t2*t4) + b*t2*t2 + 2*c*t2*t3 + d*t3*t3",
        metric_params=("a", "b", "c", "d"),
        structure_params=(),
        nondegeneracy="a*(a - 4*d)",
        symmetric_locus=("b",),
        constant_curvature_locus=None,
        sig_discriminant="a*(a - 4*d)",
        m_table={
            (0, 1): (0, 2, 0, 0),
            (0, 3): (0, 0, 0, -2),
            (1, 3): (2, 0, 0, 0),
        },
        model="R x SL~(2,R)",
    )


def _family_a2() -> FamilyData:
    d = 5
    k = _K
    return FamilyData(
        key="A2",
        display="A2",
        g_dim=d,
        g_brackets={
            (0, 4): _vec(d, {1: k + 1}),
            (1, 3): _vec(d, {1: 1}),
            (1, 4): _vec(d, {2: k}),
            (2, 3): _vec(d, {2: 1}),
            (2, 4): _vec(d, {3: k - 1}),
            (3, 4): _vec(d, {4: 1}),
        },
        h_vectors=(_vec(d, {4: 1}),),
        m_vectors=(
            _vec(d, {1: 1}),
            _vec(d, {2: 1}),
            _vec(d, {3: 1}),
            _vec(d, {5: 1}),
        ),
        metric_theta="a*(-2*t1*t3 + t2*t2) + b*t3*t3 + 2*c*t3*t4 + d*t4*t4",
        metric_params=("a", "b", "c", "d"),
        structure_params=("k",),
        nondegeneracy="a*d",
        symmetric_locus=("b",),
        constant_curvature_locus=("b",),
        sig_discriminant="a*d",
        m_table={
            (0, 3): (k + 1, 0, 0, 0),
            (1, 3): (0, k, 0, 0),
            (2, 3): (0, 0, k - 1, 0),
        },
        model="R |x R^3",
    )


def _family_a3(eta: int) -> FamilyData:
    d = 5
    key = "A3+" if eta == 1 else "A3-"
    return FamilyData(
        key=key,
        display=f"A3 (eta = {eta:+d})",
        g_dim=d,
        g_brackets={
            (0, 3): _vec(d, {1: 2}),
            (1, 2): _vec(d, {1: 1}),
            (1, 3): _vec(d, {2: 1}),
            (1, 4): _vec(d, {3: -eta}),
            (2, 3): _vec(d, {3: 1}),
            (2, 4): _vec(d, {2: 1}),
        },
        h_vectors=(_vec(d, {3: 1}),),
        m_vectors=(
            _vec(d, {1: 1}),
            _vec(d, {2: 1, 3: 1}),
            _vec(d, {4: 1}),
            _vec(d, {5: 1}),
        ),
        metric_theta="a*(2*t1*t4 + t2*t2) + b*t3*t3 + 2*c*t3*t4 + d*t4*t4",
        metric_params=("a", "b", "c", "d"),
        structure_params=(),
        nondegeneracy="a*b",
        symmetric_locus=("d + b" if eta == 1 else "d - b",),
        constant_curvature_locus=("d + b" if eta == 1 else "d - b",),
        sig_discriminant="a*b",
        m_table=None
        if eta == 1
        else {
            (0, 2): (2, 0, 0, 0),
            (1, 2): (0, 1, 0, 0),
            (1, 3): (0, 1, 0, 0),
        },
        model="R |x E(1,1)" if eta == -1 else "(complement not closed)",
    )


_A4_BRACKETS = {
    (0, 1): _vec(6, {2: 2}),
    (0, 2): _vec(6, {3: -2}),
    (1, 2): _vec(6, {1: 1}),
    (0, 3): _vec(6, {4: 1}),
    (0, 4): _vec(6, {5: -1}),
    (1, 4): _vec(6, {4: 1}),
    (2, 3): _vec(6, {5: 1}),
    (3, 4): _vec(6, {6: 1}),
}

_A4_M_VECTORS = (
    _vec(6, {1: 1}),
    _vec(6, {2: 1}),
    _vec(6, {6: -2}),
    _vec(6, {4: 1}),
)

_A4_M_TABLE = {
    (0, 1): (0, 2, 0, 0),
    (0, 3): (0, 0, 0, 1),
}


def _family_a4(eta: int) -> FamilyData:
    key = "A4" if eta == 1 else "B2"
    sign = 1 if eta == 1 else -1
    return FamilyData(
        key=key,
        display=key,
        g_dim=6,
        g_brackets=_A4_BRACKETS,
        h_vectors=(
            _vec(6, {3: 1, 6: sign}),
            _vec(6, {5: 1}),
        ),
        m_vectors=_A4_M_VECTORS,
        metric_theta=(
            f"a*({'' if eta == 1 else '-'}t1*t1 + 2*t2*t3 + t4*t4/2) + b*t2*t2"
        ),
        metric_params=("a", "b"),
        structure_params=(),
        nondegeneracy="a",
        symmetric_locus=("b",),
        constant_curvature_locus=("b",),
        sig_discriminant=None,
        m_table=_A4_M_TABLE,
        model="R |x R^3",
    )


def _family_b1() -> FamilyData:
    d = 5
    return FamilyData(
        key="B1",
        display="B1",
        g_dim=d,
        g_brackets={
            (0, 1): _vec(d, {2: 2}),
            (0, 2): _vec(d, {3: -2}),
            (1, 2): _vec(d, {1: 1}),
            (0, 3): _vec(d, {4: 1}),
            (0, 4): _vec(d, {5: -1}),
            (1, 4): _vec(d, {4: 1}),
            (2, 3): _vec(d, {5: 1}),
        },
        h_vectors=(_vec(d, {3: 1}),),
        m_vectors=(
            _vec(d, {1: 1}),
            _vec(d, {2: 1}),
            _vec(d, {4: 1}),
            _vec(d, {5: 1}),
        ),
        metric_theta="a*(2*t1*t3 + 2*t2*t4) + b*t2*t2 + 2*c*t2*t3 + d*t3*t3",
        metric_params=("a", "b", "c", "d"),
        structure_params=(),
        nondegeneracy="a",
        symmetric_locus=("c^2 - b*d",),
        constant_curvature_locus=("b", "c", "d"),
        sig_discriminant=None,
        m_table={
            (0, 1): (0, 2, 0, 0),
            (0, 2): (0, 0, 1, 0),
            (0, 3): (0, 0, 0, -1),
            (1, 3): (0, 0, 1, 0),
        },
        model="R |x H3",
    )


REGISTRY: dict[str, FamilyData] = {
    f.key: f
    for f in (
        _family_a1(),
        _family_a2(),
        _family_a3(+1),
        _family_a3(-1),
        _family_a4(+1),
        _family_a4(-1),
        _family_b1(),
    )
}

FAMILY_KEYS = tuple(REGISTRY)


def lookup(name: str) -> FamilyData:
    """Registry access tolerant of case and spacing (e.g. 'a3-', 'A3 -')."""
    cleaned = name.strip().upper().replace(" ", "")
    if cleaned in REGISTRY:
        return REGISTRY[cleaned]
    raise KeyError(
        f"unknown family {name!r}; known: {', '.join(FAMILY_KEYS)}"
    )
