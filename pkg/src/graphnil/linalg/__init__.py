"""Exact rational linear algebra: matrices, solvers, polynomials."""
from fractions import Fraction

from .kernel import BACKEND
from .matrix import (
    Matrix,
    Solution,
    Span,
    block_diag,
    commutator,
    coordinates,
    det,
    dot,
    farkas_certificate,
    in_span,
    is_positive_definite,
    leading_minors,
    lincomb,
    nullspace,
    nullspace_sparse,
    q,
    rank,
    rank_of_vectors,
    rref,
    solve,
    solve_sparse,
    span_basis,
    unit,
    vadd,
    vec,
    vscale,
    vsub,
    zero_vec,
)
from .poly import Polynomial, char_poly, evaluate_at_matrix, is_squarefree, poly_gcd

Rational = Fraction


def format_rational(x) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    x = q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"rationals are serialized as strings, got {s!r}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {s!r}") from exc


__all__ = [
    "BACKEND", "Fraction", "Matrix", "Polynomial", "Rational", "Solution", "Span", "block_diag",
    "char_poly", "commutator", "coordinates", "det", "dot", "evaluate_at_matrix",
    "farkas_certificate", "format_rational", "in_span", "is_positive_definite",
    "is_squarefree", "leading_minors", "lincomb", "nullspace", "nullspace_sparse",
    "parse_rational", "poly_gcd", "q", "rank", "rank_of_vectors", "rref", "solve",
    "solve_sparse", "span_basis", "unit", "vadd", "vec", "vscale", "vsub", "zero_vec",
]
