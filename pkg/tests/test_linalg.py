import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphnil.linalg import (
    BACKEND,
    Matrix,
    Polynomial,
    Span,
    char_poly,
    det,
    evaluate_at_matrix,
    farkas_certificate,
    format_rational,
    is_positive_definite,
    is_squarefree,
    nullspace,
    parse_rational,
    poly_gcd,
    q,
    rank,
    solve,
    solve_sparse,
)
from graphnil.linalg import _pykernel

from oracles import char_poly_values, dense_rank, minor_rank, perm_det

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, square=False, sparse=False):
    r = draw(st.integers(1, max_rows))
    c = r if square else draw(st.integers(1, max_cols))
    elem = st.one_of(st.just(Fraction(0)), rationals) if sparse else rationals
    rows = draw(st.lists(st.lists(elem, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(rows, c)


def as_lists(m):
    return [list(r) for r in m.rows()]


# -- rationals ------------------------------------------------------------------

def test_q_rejects_floats():
    with pytest.raises(TypeError):
        q(0.5)


@pytest.mark.parametrize("x,s", [(Fraction(3), "3"), (Fraction(-2, 6), "-1/3"), (Fraction(0), "0")])
def test_format_rational(x, s):
    assert format_rational(x) == s
    assert parse_rational(s) == x


def test_parse_rational_rejects_junk():
    for bad in ("a/b", "1/0", "", True, 0.5):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_parse_rational_decimal_is_exact():
    assert parse_rational("1.5") == Fraction(3, 2)


# -- solve ------------------------------------------------------------------------

def test_solve_identity():
    sol = solve(Matrix.identity(3), [1, 2, 3])
    assert sol.particular == (1, 2, 3)
    assert sol.kernel == []


def test_solve_zero_matrix():
    sol = solve(Matrix.zeros(2), [0, 0])
    assert sol.particular == (0, 0)
    assert sol.dim == 2


def test_solve_inconsistent():
    a = Matrix([[1, 1], [2, 2]])
    assert solve(a, [1, 3]) is None
    # hand check: rank [A|b] = 2 > rank A = 1
    assert dense_rank([[1, 1, 1], [2, 2, 3]], 3) == 2 and dense_rank([[1, 1], [2, 2]], 2) == 1


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(Matrix.identity(2), [1, 2, 3])


@given(matrices(sparse=True), st.data())
@settings(max_examples=150)
def test_solve_postconditions(a, data):
    x0 = data.draw(st.lists(rationals, min_size=a.ncols, max_size=a.ncols))
    b = a @ tuple(x0)
    sol = solve(a, b)
    assert sol is not None
    assert a @ sol.particular == b
    for k in sol.kernel:
        assert not any(a @ k)
    assert rank(a) + sol.dim == a.ncols


@given(matrices(sparse=True), st.data())
@settings(max_examples=100)
def test_infeasible_systems_get_certificates(a, data):
    b = tuple(data.draw(st.lists(rationals, min_size=a.nrows, max_size=a.nrows)))
    rows = [{j: x for j, x in enumerate(r) if x} for r in a.rows()]
    sol = solve_sparse(rows, b, a.ncols)
    y = farkas_certificate(rows, b, a.ncols)
    if sol is None:
        assert y is not None
        assert not any(a.T @ y)
        assert sum(u * v for u, v in zip(y, b)) == 1
    else:
        assert y is None
        assert a @ sol.particular == b


# -- rank -------------------------------------------------------------------------

def test_rank_trivial():
    assert rank(Matrix.identity(4)) == 4
    assert rank(Matrix.zeros(3, 5)) == 0


def test_rank_k4_rotation_pencil():
    # J0 for z = z1 + 2 z6 on K4 (edges 12 23 13 14 24 34): rotations in planes 12 and 34
    j = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -2], [0, 0, 2, 0]]
    assert rank(Matrix(j)) == 4 == minor_rank(j)


@given(matrices(max_rows=4, max_cols=4, sparse=True))
@settings(max_examples=100)
def test_rank_matches_minor_oracle(a):
    assert rank(a) == minor_rank(as_lists(a))


@given(matrices(max_rows=7, max_cols=7, sparse=True))
@settings(max_examples=100)
def test_rank_nullity(a):
    ker = nullspace(a)
    assert rank(a) + len(ker) == a.ncols
    assert rank(a) == rank(a.T) == dense_rank(as_lists(a), a.ncols)


# -- determinants, definiteness -------------------------------------------------------

@given(matrices(max_rows=5, square=True, sparse=True))
@settings(max_examples=100)
def test_det_matches_permutation_expansion(a):
    assert det(a) == perm_det(as_lists(a))


def test_positive_definite_examples():
    assert is_positive_definite(Matrix.identity(3))
    assert not is_positive_definite(Matrix.diag([1, -1]))
    assert not is_positive_definite(Matrix([[0, 1], [1, 0]]))
    with pytest.raises(ValueError):
        is_positive_definite(Matrix([[1, 2], [0, 1]]))


@given(matrices(max_rows=4, square=True))
@settings(max_examples=100)
def test_gram_matrices_are_positive_definite_iff_invertible(a):
    g = a.T @ a
    assert is_positive_definite(g) == (perm_det(as_lists(a)) != 0)


def test_inverse():
    a = Matrix([[2, 1], [1, 1]])
    assert a @ a.inverse() == Matrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        Matrix([[1, 2], [2, 4]]).inverse()


# -- polynomials -------------------------------------------------------------------------

def test_char_poly_rotation():
    assert char_poly(Matrix([[0, 1], [-1, 0]])) == Polynomial([1, 0, 1])


def test_char_poly_zero():
    assert char_poly(Matrix.zeros(3)) == Polynomial.monomial(3)


def test_char_poly_self_dual_k4_element():
    # J0_{z1} + J0_{z6} on K4: two unit rotations, so (x^2 + 1)^2
    j = Matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    chi = char_poly(j)
    assert chi == Polynomial([1, 0, 2, 0, 1])
    assert chi.coeffs == tuple(Fraction(c) for c in (1, 0, 2, 0, 1))


def test_char_poly_non_square():
    with pytest.raises(ValueError):
        char_poly(Matrix([[1, 2]]))


@given(matrices(max_rows=5, square=True, sparse=True))
@settings(max_examples=80)
def test_char_poly_matches_determinant_oracle(a):
    n = a.nrows
    pts = list(range(-n, n + 2))
    chi = char_poly(a)
    assert chi.degree == n
    assert [chi(t) for t in pts] == char_poly_values(as_lists(a), pts)


@given(matrices(max_rows=6, square=True, sparse=True))
@settings(max_examples=80)
def test_cayley_hamilton(a):
    assert evaluate_at_matrix(char_poly(a), a).is_zero()


def test_squarefree_examples():
    p = Polynomial([1, 0, 1])
    assert is_squarefree(p)
    assert not is_squarefree(p * p)
    with pytest.raises(ValueError):
        is_squarefree(Polynomial())


def _from_roots(roots):
    p = Polynomial([1])
    for r in roots:
        p = p * Polynomial([-r, 1])
    return p


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.integers(0, 2))
@settings(max_examples=200)
def test_squarefree_against_known_factorizations(roots, quad):
    # integer roots plus quad copies of the irreducible factor x^2 + 1
    p = _from_roots(roots) * Polynomial([1, 0, 1]) ** quad
    expect = len(set(roots)) == len(roots) and quad <= 1
    assert is_squarefree(p) == expect


def test_poly_gcd():
    a = _from_roots([1, 2, 3])
    b = _from_roots([2, 3, 4])
    assert poly_gcd(a, b) == _from_roots([2, 3])


def test_polynomial_divmod_roundtrip():
    a = Polynomial([3, -1, 0, 2, 5])
    b = Polynomial([1, 1, 2])
    qt, r = a.divmod(b)
    assert qt * b + r == a
    assert r.degree < b.degree


# -- spans and kernels ------------------------------------------------------------------

def test_span_membership():
    s = Span([(1, 0, 1), (0, 1, 1)], 3)
    assert s.dim == 2
    assert (2, 3, 5) in s
    assert (0, 0, 1) not in s


@given(st.lists(st.dictionaries(st.integers(0, 9), st.integers(-9, 9).filter(bool), max_size=6), max_size=12))
@settings(max_examples=200)
def test_kernels_agree(rows):
    """The compiled kernel (if built) and the fallback produce identical reductions."""
    if BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    from graphnil.linalg import _ckernel

    a = _pykernel.rref_int([dict(r) for r in rows], 10)
    b = _ckernel.rref_int([dict(r) for r in rows], 10)
    assert a == b
    assert len(a[0]) == dense_rank([[r.get(c, 0) for c in range(10)] for r in rows], 10)


def test_pure_python_switch():
    env = dict(os.environ, GRAPHNIL_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from graphnil.linalg import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_fallback_solves_identically():
    rng = random.Random(7)
    rows = [{c: rng.randint(-4, 4) for c in rng.sample(range(8), 4)} for _ in range(9)]
    rows = [{c: v for c, v in r.items() if v} for r in rows]
    piv, red = _pykernel.rref_int([dict(r) for r in rows], 8)
    assert len(piv) == dense_rank([[r.get(c, 0) for c in range(8)] for r in rows], 8)
