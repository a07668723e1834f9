"""Reference connection and curvature tables for the six families.

Entries are expression strings over the metric coefficients a, b, c, d,
the structure parameter k where one exists, and the sign E where a family
carries one.  Instantiating a family key resolves E to its literal value.
"""

from .cas.linalg import Matrix
from .cas.parser import parse_expr
from .cas.scalar import Scalar
from .families import lookup

__all__ = ["golden_lambda", "golden_curvature"]

_A1_PARAMS = ("a", "b", "c", "d")
_A2_PARAMS = ("a", "b", "c", "d", "k")
_SIGNED_PARAMS = ("a", "b", "c", "d", "E")

_LAMBDA = {
    "A1": [
        [
            ["0", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "-b/a", "-c/a", "-1"],
        ],
        [
            ["0", "-8*d*b/(a*(a-4*d))", "c/a", "1"],
            ["-1", "0", "1/2", "0"],
            ["0", "-4*b/(a-4*d)", "0", "0"],
            ["-b/a", "4*c*b/(a*(a-4*d))", "-b/(2*a)", "0"],
        ],
        [
            ["0", "c/a", "0", "0"],
            ["0", "1/2", "0", "0"],
            ["0", "0", "0", "0"],
            ["-c/a", "-b/(2*a)", "0", "-1/2"],
        ],
        [
            ["0", "-1", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["1", "0", "-1/2", "0"],
        ],
    ],
    "A2": [
        [
            ["0", "0", "k*c/d", "k"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "k*a/d", "0"],
        ],
        [
            ["0", "-k*c/d", "0", "0"],
            ["0", "0", "0", "k"],
            ["0", "0", "0", "0"],
            ["0", "-k*a/d", "0", "0"],
        ],
        [
            ["k*c/d", "0", "-(k-1)*b*c/(a*d)", "-(k*c*c-b*d)/(a*d)"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "k"],
            ["k*a/d", "0", "-(k-1)*b/d", "-k*c/d"],
        ],
        [
            ["-1", "0", "-(k*c*c-b*d)/(a*d)", "-(k-1)*c/a"],
            ["0", "0", "0", "0"],
            ["0", "0", "1", "0"],
            ["0", "0", "-k*c/d", "0"],
        ],
    ],
    "A3": [
        [
            ["0", "0", "1", "c/b"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "-a/b"],
            ["0", "0", "0", "0"],
        ],
        [
            ["0", "c/b-1", "0", "0"],
            ["0", "0", "1", "1"],
            ["0", "-a/b", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        [
            ["-1", "0", "0", "(c*c-b*d)/(a*b)"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "-c/b"],
            ["0", "0", "0", "1"],
        ],
        [
            ["c/b", "0", "(c*c-b*d)/(a*b)", "0"],
            ["0", "0", "0", "0"],
            ["-a/b", "0", "-c/b", "0"],
            ["0", "0", "1", "0"],
        ],
    ],
    "A4": [
        [
            ["0", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "-b/a", "-1", "0"],
            ["0", "0", "0", "0"],
        ],
        [
            ["0", "2*b*E/a", "E", "0"],
            ["-1", "0", "0", "0"],
            ["-b/a", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        [
            ["0", "E", "0", "0"],
            ["0", "0", "0", "0"],
            ["-1", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        [
            ["0", "0", "0", "E/2"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["-1", "0", "0", "0"],
        ],
    ],
    "B1": [
        [
            ["-1", "-c/(2*a)", "-d/a", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["0", "-b/a", "-3*c/(2*a)", "-1"],
        ],
        [
            ["-c/(2*a)", "(c*c-2*b*d)/(a*a)", "-c*d/(a*a)", "-d/(2*a)"],
            ["-1", "-c/a", "-d/(2*a)", "0"],
            ["0", "2*b/a", "3*c/(2*a)", "1"],
            ["-b/a", "-b*c/(a*a)", "(b*d-3*c*c)/(2*a*a)", "0"],
        ],
        [
            ["-d/a", "-c*d/(a*a)", "-d*d/(a*a)", "0"],
            ["0", "-d/(2*a)", "0", "0"],
            ["0", "3*c/(2*a)", "d/a", "0"],
            ["-3*c/(2*a)", "(b*d-3*c*c)/(2*a*a)", "-c*d/(a*a)", "d/(2*a)"],
        ],
        [
            ["0", "-d/(2*a)", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "d/(2*a)", "0"],
        ],
    ],
}

_CURV = {
    "A1": {
        (0, 1): [
            ["0", "b*(a+20*d)/(a*(a-4*d))", "-c/a", "-1"],
            ["1", "0", "-1/2", "0"],
            ["0", "12*b/(a-4*d)", "0", "0"],
            ["4*b/a", "-12*b*c/(a*(a-4*d))", "b/a", "0"],
        ],
        (0, 2): [
            ["0", "-c/a", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["c/a", "0", "-c/(2*a)", "0"],
        ],
        (0, 3): [
            ["0", "-1", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["1", "0", "-1/2", "0"],
        ],
        (1, 2): [
            ["0", "-b*(a+4*d)/(2*a*(a-4*d))", "-c/(2*a)", "-1/2"],
            ["1/2", "-c/a", "-1/4", "0"],
            ["0", "-2*b/(a-4*d)", "0", "0"],
            ["-b/a", "b*c*(3*a-4*d)/(a*a*(a-4*d))", "c*c/(a*a)", "c/a"],
        ],
        (1, 3): [
            ["0", "0", "0", "0"],
            ["0", "-1", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "b/a", "c/a", "1"],
        ],
        (2, 3): [
            ["0", "1/2", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["-1/2", "0", "1/4", "0"],
        ],
    },
    "A2": {
        (0, 1): [
            ["0", "-k*k*a/d", "0", "0"],
            ["0", "0", "-k*k*a/d", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        (0, 2): [
            ["k*k*a/d", "0", "-k*k*b/d", "-k*k*c/d"],
            ["0", "0", "0", "0"],
            ["0", "0", "-k*k*a/d", "0"],
            ["0", "0", "0", "0"],
        ],
        (0, 3): [
            ["0", "0", "-k*k*c/d", "-k*k"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "-k*k*a/d", "0"],
        ],
        (1, 2): [
            ["0", "k*b/d", "0", "0"],
            ["k*k*a/d", "0", "-k*(k-1)*b/d", "-k*k*c/d"],
            ["0", "k*k*a/d", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        (1, 3): [
            ["0", "0", "0", "0"],
            ["0", "0", "-k*k*c/d", "-k*k"],
            ["0", "0", "0", "0"],
            ["0", "k*k*a/d", "0", "0"],
        ],
        (2, 3): [
            ["0", "0", "-2*(k-1)*b*c/(a*d)", "-2*(k-1)*b/a"],
            ["0", "0", "0", "0"],
            ["0", "0", "-k*k*c/d", "-k*k"],
            ["-k*k*a/d", "0", "(k*k-2*k+2)*b/d", "k*k*c/d"],
        ],
    },
    "A3": {
        (0, 1): [
            ["0", "-a/b", "0", "0"],
            ["0", "0", "0", "a/b"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        (0, 2): [
            ["0", "0", "-1", "-c/b"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "a/b"],
            ["0", "0", "0", "0"],
        ],
        (0, 3): [
            ["-a/b", "0", "-c/b", "-d/b"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "a/b"],
        ],
        (1, 2): [
            ["0", "0", "0", "0"],
            ["0", "0", "-1", "-c/b"],
            ["0", "a/b", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        (1, 3): [
            ["0", "-E-d/b", "0", "0"],
            ["-a/b", "0", "-c/b", "E"],
            ["0", "0", "0", "0"],
            ["0", "a/b", "0", "0"],
        ],
        (2, 3): [
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["-a/b", "0", "-c/b", "-d/b"],
            ["0", "0", "1", "c/b"],
        ],
    },
    "A4": {
        (0, 1): [
            ["0", "-5*b*E/a", "-E", "0"],
            ["1", "0", "0", "0"],
            ["4*b/a", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        (0, 2): [
            ["0", "-E", "0", "0"],
            ["0", "0", "0", "0"],
            ["1", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        (0, 3): [
            ["0", "0", "0", "-E/2"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["1", "0", "0", "0"],
        ],
        (1, 2): [
            ["0", "0", "0", "0"],
            ["0", "-E", "0", "0"],
            ["0", "b*E/a", "E", "0"],
            ["0", "0", "0", "0"],
        ],
        (1, 3): [
            ["0", "0", "0", "0"],
            ["0", "0", "0", "-E/2"],
            ["0", "0", "0", "-b*E/(2*a)"],
            ["0", "2*b*E/a", "E", "0"],
        ],
        (2, 3): [
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "-E/2"],
            ["0", "E", "0", "0"],
        ],
    },
    "B1": {
        (0, 1): [
            ["3*c/(2*a)", "(22*b*d-15*c*c)/(4*a*a)", "3*c*d/(2*a*a)", "0"],
            ["0", "3*c/(2*a)", "0", "0"],
            ["0", "-3*b/a", "-3*c/(2*a)", "0"],
            ["3*b/a", "3*b*c/(2*a*a)", "5*(3*c*c-2*b*d)/(4*a*a)", "-3*c/(2*a)"],
        ],
        (0, 2): [
            ["d/a", "5*c*d/(4*a*a)", "d*d/(a*a)", "0"],
            ["0", "d/(2*a)", "0", "0"],
            ["0", "-3*c/(2*a)", "-d/a", "0"],
            ["3*c/(2*a)", "(3*c*c-b*d)/(2*a*a)", "3*c*d/(4*a*a)", "-d/(2*a)"],
        ],
        (0, 3): [
            ["0", "d/(2*a)", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "-d/(2*a)", "0"],
        ],
        (1, 2): [
            ["-c*d/(4*a*a)", "3*d*(b*d-c*c)/(4*a*a*a)", "0", "d*d/(4*a*a)"],
            ["d/(2*a)", "c*d/(4*a*a)", "d*d/(4*a*a)", "0"],
            ["0", "(9*c*c-10*b*d)/(4*a*a)", "-c*d/(4*a*a)", "-d/(2*a)"],
            ["(8*b*d-9*c*c)/(4*a*a)", "9*c*(b*d-c*c)/(4*a*a*a)", "3*d*(b*d-c*c)/(2*a*a*a)", "c*d/(4*a*a)"],
        ],
        (1, 3): [
            ["d/(2*a)", "3*c*d/(4*a*a)", "d*d/(2*a*a)", "0"],
            ["0", "d/a", "0", "0"],
            ["0", "-3*c/(2*a)", "-d/(2*a)", "0"],
            ["3*c/(2*a)", "(3*c*c-2*b*d)/(2*a*a)", "c*d/(4*a*a)", "-d/a"],
        ],
        (2, 3): [
            ["0", "d*d/(4*a*a)", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "-d*d/(4*a*a)", "0"],
        ],
    },
}


def _table_key(key: str) -> tuple[str, tuple[str, ...], int | None]:
    fam = lookup(key)
    if fam.key in ("A1", "B1"):
        return fam.key, _A1_PARAMS, None
    if fam.key == "A2":
        return "A2", _A2_PARAMS, None
    base = "A3" if fam.key.startswith("A3") else "A4"
    sign = 1 if fam.key in ("A3+", "A4") else -1
    return base, _SIGNED_PARAMS, sign


def _build(rows, params, sign) -> Matrix:
    mat = Matrix([[parse_expr(src, params) for src in row] for row in rows])
    if sign is None:
        return mat
    return mat.substitute({"E": Scalar.from_fraction(sign)})


def golden_lambda(key: str) -> list[Matrix]:
    """The four reference matrices lambda(u_1) .. lambda(u_4) for a family key."""
    tag, params, sign = _table_key(key)
    return [_build(rows, params, sign) for rows in _LAMBDA[tag]]


def golden_curvature(key: str) -> dict:
    """The six reference pair-matrices R(u_i, u_j), keyed by (i, j) with i < j."""
    tag, params, sign = _table_key(key)
    return {pos: _build(rows, params, sign) for pos, rows in _CURV[tag].items()}
