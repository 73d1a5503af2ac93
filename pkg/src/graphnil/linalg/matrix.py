"""Exact dense matrices over the rationals and the solvers built on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .kernel import rref_int

Vector = tuple  # tuple of Fraction


def q(x) -> Fraction:
    """Coerce ints, strings ("p/q") and Fractions to Fraction; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def vec(values: Iterable) -> Vector:
    return tuple(q(v) for v in values)


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def zero_vec(n: int) -> Vector:
    return (Fraction(0),) * n


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def lincomb(coeffs: Sequence, vectors: Sequence[Vector]) -> Vector:
    n = len(vectors[0])
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for i, a in enumerate(v):
            if a:
                out[i] += c * a
    return tuple(out)


class Matrix:
    """Immutable rows x cols matrix of Fractions, stored row-major."""

    __slots__ = ("_rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self._rows = tuple(tuple(q(x) for x in r) for r in rows)
        if ncols is None:
            if not self._rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(self._rows[0])
        if any(len(r) != ncols for r in self._rows):
            raise ValueError("ragged rows")
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows, ncols):
        m = object.__new__(cls)
        m._rows = rows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        z = (Fraction(0),) * ncols
        return cls._raw((z,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(unit(n, i) for i in range(n)), n)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(([values[i] if i == j else 0 for j in range(n)] for i in range(n)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not cols:
            if nrows is None:
                raise ValueError("nrows is required without columns")
            return cls(((),) * nrows, 0)
        return cls(zip(*cols), len(cols))

    @classmethod
    def unit(cls, nrows: int, ncols: int, i: int, j: int) -> "Matrix":
        """Matrix unit with a single 1 in row i, column j."""
        rows = [[0] * ncols for _ in range(nrows)]
        rows[i][j] = 1
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self.ncols)

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self._rows for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def rows(self) -> tuple:
        return self._rows

    def columns(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "Matrix":
        if not self._rows:
            return Matrix(((),) * self.ncols, 0)
        return Matrix._raw(tuple(zip(*self._rows)), len(self._rows))

    def _check_same(self, other):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {getattr(other, 'shape', None)}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        c = q(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._rows), self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
            n = other.ncols
            orows = other._rows
            out = []
            for r in self._rows:
                acc = [Fraction(0)] * n
                for k, a in enumerate(r):
                    if a:
                        for j, b in enumerate(orows[k]):
                            if b:
                                acc[j] += a * b
                out.append(tuple(acc))
            return Matrix._raw(tuple(out), n)
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch: {self.shape} @ vector of length {len(v)}")
        return tuple(dot(r, v) for r in self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self._rows, self.ncols))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(not x for r in self._rows for x in r)

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum((self._rows[i][i] for i in range(self.nrows)), Fraction(0))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(([self._rows[i][j] for j in cols] for i in rows), len(cols))

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        rows = [{j: x for j, x in enumerate(r) if x} for r in self._rows]
        for i in range(n):
            rows[i][n + i] = Fraction(1)
        pivots, red = _rref_sparse(rows, 2 * n)
        if pivots[:n] != list(range(n)) or (len(pivots) > n):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(([red[i].get(n + j, 0) for j in range(n)] for i in range(n)), n)

    def vectorize(self) -> Vector:
        return self.entries


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    rows = [[Fraction(0)] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[r0 + i][c0 + j] = b[i, j]
        r0 += b.nrows
        c0 += b.ncols
    return Matrix(rows, m)


# -- elimination -----------------------------------------------------------

def _to_int_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    return {c: int(v * den) for c, v in row.items() if v}


def _rref_sparse(rows: Sequence[dict], ncols: int):
    """Rational rref of sparse rows; returns pivots and rows normalized to pivot 1."""
    pivots, red = rref_int([_to_int_row(r) for r in rows], ncols)
    out = []
    for p, r in zip(pivots, red):
        d = r[p]
        out.append({c: Fraction(v, d) for c, v in r.items()})
    return pivots, out


def _sparse_rows(a: Matrix) -> list:
    return [{j: x for j, x in enumerate(r) if x} for r in a.rows()]


def rref(a: Matrix) -> tuple[list, Matrix]:
    """Reduced row echelon form: (pivot columns, matrix with zero rows dropped)."""
    pivots, red = _rref_sparse(_sparse_rows(a), a.ncols)
    return pivots, Matrix(([r.get(j, 0) for j in range(a.ncols)] for r in red), a.ncols)


def rank(a: Matrix) -> int:
    return len(_rref_sparse(_sparse_rows(a), a.ncols)[0])


def rank_of_vectors(vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    return len(_rref_sparse([{j: x for j, x in enumerate(v) if x} for v in vectors], len(vectors[0]))[0])


def _kernel_from_rref(pivots, red, ncols) -> list:
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for p, r in zip(pivots, red):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(tuple(v))
    return basis


def nullspace_sparse(rows: Sequence[dict], ncols: int) -> list:
    pivots, red = _rref_sparse(rows, ncols)
    return _kernel_from_rref(pivots, red, ncols)


def nullspace(a: Matrix) -> list:
    """Basis of {x : a x = 0}, one vector per free column."""
    return nullspace_sparse(_sparse_rows(a), a.ncols)


@dataclass(frozen=True)
class Solution:
    particular: Vector
    kernel: list

    @property
    def dim(self) -> int:
        return len(self.kernel)


def solve_sparse(rows: Sequence[dict], rhs: Sequence, ncols: int) -> Solution | None:
    """Solve the sparse system sum_c rows[i][c] x_c = rhs[i]; None if infeasible."""
    if len(rows) != len(rhs):
        raise ValueError("row count and right-hand side length differ")
    aug = []
    for r, b in zip(rows, rhs):
        r = dict(r)
        b = q(b)
        if b:
            r[ncols] = b
        aug.append(r)
    pivots, red = _rref_sparse(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for p, r in zip(pivots, red):
        x[p] = r.get(ncols, Fraction(0))
    for r in red:
        r.pop(ncols, None)
    return Solution(tuple(x), _kernel_from_rref(pivots, red, ncols))


def solve(a: Matrix, b: Sequence) -> Solution | None:
    """Exact solve of a x = b: a particular solution plus a kernel basis, or None."""
    if len(b) != a.nrows:
        raise ValueError(f"dimension mismatch: {a.shape} vs right-hand side of length {len(b)}")
    return solve_sparse(_sparse_rows(a), list(b), a.ncols)


def farkas_certificate(rows: Sequence[dict], rhs: Sequence, ncols: int) -> Vector | None:
    """A vector y with y.A = 0 and y.b = 1 when A x = b is infeasible, else None."""
    nr = len(rows)
    cols: list = [dict() for _ in range(ncols + 1)]
    for i, r in enumerate(rows):
        for c, v in r.items():
            if v:
                cols[c][i] = q(v)
        if rhs[i]:
            cols[ncols][i] = q(rhs[i])
    sol = solve_sparse(cols, [0] * ncols + [1], nr)
    return None if sol is None else sol.particular


def span_basis(vectors: Sequence[Vector]) -> list:
    """Row-reduced basis of the span of the given vectors."""
    if not vectors:
        return []
    n = len(vectors[0])
    pivots, red = _rref_sparse([{j: x for j, x in enumerate(v) if x} for v in vectors], n)
    return [tuple(r.get(j, Fraction(0)) for j in range(n)) for r in red]


def coordinates(basis: Sequence[Vector], v: Vector) -> Vector | None:
    """Coefficients c with sum c_k basis[k] = v, or None if v is outside the span."""
    if not basis:
        return () if not any(v) else None
    n = len(v)
    rows = [{k: basis[k][i] for k in range(len(basis)) if basis[k][i]} for i in range(n)]
    sol = solve_sparse(rows, list(v), len(basis))
    return None if sol is None else sol.particular


def in_span(basis: Sequence[Vector], v: Vector) -> bool:
    return coordinates(basis, v) is not None


# -- determinants and definiteness ----------------------------------------

def leading_minors(a: Matrix) -> list:
    """All leading principal minors, via Bareiss fraction-free elimination."""
    n = a.nrows
    m = [list(r) for r in a.rows()]
    minors = []
    prev = Fraction(1)
    for k in range(n):
        piv = m[k][k]
        minors.append(piv)
        if not piv:
            # later minors need the unpivoted matrix; fall back to direct determinants
            for j in range(k + 1, n):
                idx = list(range(j + 1))
                minors.append(det(a.submatrix(idx, idx)))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * piv - m[i][k] * m[k][j]) / prev
        prev = piv
    return minors


def det(a: Matrix) -> Fraction:
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = a.nrows
    m = [list(r) for r in a.rows()]
    sign = 1
    prev = Fraction(1)
    for k in range(n):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * piv - m[i][k] * m[k][j]) / prev
        prev = piv
    return sign * m[n - 1][n - 1] if n else Fraction(1)


def is_positive_definite(g: Matrix) -> bool:
    """Sylvester's criterion on a symmetric matrix."""
    if not g.is_symmetric():
        raise ValueError("positive definiteness is tested on symmetric matrices only")
    return all(m > 0 for m in leading_minors(g))


class Span:
    """Row-reduced basis of a span, with fast membership and residuals."""

    def __init__(self, vectors: Sequence[Vector], length: int):
        self.length = length
        self.pivots, self.rows = _rref_sparse(
            [{j: q(x) for j, x in enumerate(v) if x} for v in vectors], length
        )

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def residual(self, v: Vector) -> dict:
        r = {j: q(x) for j, x in enumerate(v) if x}
        for p, row in zip(self.pivots, self.rows):
            c = r.get(p)
            if c:
                for j, x in row.items():
                    w = r.get(j, 0) - c * x
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
        return r

    def __contains__(self, v) -> bool:
        return not self.residual(v)
