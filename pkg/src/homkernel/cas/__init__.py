"""Exact computer-algebra core: rational-function field, parser, linear algebra."""

from .poly import Poly, poly_gcd, poly_divexact
from .scalar import (
    CasError,
    DenominatorVanishes,
    DivisionByZero,
    Scalar,
    scalar_arith,
    substitute,
)
from .parser import (
    DivisionByZeroConstant,
    ParseError,
    UnknownParameter,
    parse_ast,
    parse_expr,
    render,
    render_poly,
)
from .linalg import (
    DimensionMismatch,
    Matrix,
    SingularMatrix,
    SolveResult,
    Vec,
    cofactor_det,
    nullspace,
    rank,
    rational_signature,
    solve_linear,
    vec,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
    zero_vec,
)

__all__ = [
    "CasError",
    "DenominatorVanishes",
    "DimensionMismatch",
    "DivisionByZero",
    "DivisionByZeroConstant",
    "Matrix",
    "ParseError",
    "Poly",
    "Scalar",
    "SingularMatrix",
    "SolveResult",
    "UnknownParameter",
    "Vec",
    "cofactor_det",
    "nullspace",
    "parse_ast",
    "parse_expr",
    "poly_divexact",
    "poly_gcd",
    "rank",
    "rational_signature",
    "render",
    "render_poly",
    "scalar_arith",
    "solve_linear",
    "substitute",
    "vec",
    "vec_add",
    "vec_is_zero",
    "vec_scale",
    "vec_sub",
    "zero_vec",
]
