"""Inner products on a graph algebra and the operators they induce.

Notation used below: for a metric with Gram matrix G in the construction
basis, the adapted basis keeps every z_a and replaces e_i by its component
orthogonal to the derived algebra.  In that basis G is block diagonal with
blocks A (on the e-part) and C (on the z-part), so that (X, Y) = <A X, Y> and
(Z, W) = <C Z, W> for the standard inner product <,> of the adapted basis.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import (
    Matrix,
    block_diag,
    format_rational,
    is_positive_definite,
    lincomb,
    parse_rational,
    unit,
)
from .nilpotent import GraphLieAlgebra


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class Metric:
    gram: Matrix

    def __post_init__(self):
        g = self.gram
        if not g.is_symmetric():
            raise MetricError("Gram matrix is not symmetric")
        if not is_positive_definite(g):
            raise MetricError("Gram matrix is not positive definite")

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def inner(self, x, y) -> Fraction:
        return sum((a * b for a, b in zip(x, self.gram @ tuple(y))), Fraction(0))


def standard_metric(alg: GraphLieAlgebra) -> Metric:
    return Metric(Matrix.identity(alg.dim))


def check_metric(alg: GraphLieAlgebra, metric: Metric) -> None:
    if metric.dim != alg.dim:
        raise MetricError(f"metric has dimension {metric.dim}, algebra has {alg.dim}")


def random_spd(dim: int, rng: random.Random, spread: int = 3) -> Matrix:
    """L^T L + D with small random integer L and positive diagonal D."""
    lo = Matrix([[rng.randint(-spread, spread) for _ in range(dim)] for _ in range(dim)], dim)
    d = Matrix.diag([rng.randint(1, spread) for _ in range(dim)])
    return lo.T @ lo + d


def random_metric(alg: GraphLieAlgebra, rng: random.Random) -> Metric:
    return Metric(random_spd(alg.dim, rng))


# -- adapted basis ----------------------------------------------------------

@dataclass(frozen=True)
class AdaptedBasis:
    change: Matrix  # columns: e'_1..e'_n, z_1..z_m in construction coordinates
    A: Matrix
    C: Matrix

    @property
    def n(self) -> int:
        return self.A.nrows

    @property
    def m(self) -> int:
        return self.C.nrows

    @property
    def gram(self) -> Matrix:
        return block_diag(self.A, self.C)


def adapt(alg: GraphLieAlgebra, metric: Metric) -> AdaptedBasis:
    """Shift each e_i by a central vector so the e-part is orthogonal to the z-part."""
    check_metric(alg, metric)
    n, m = alg.n, alg.m
    g = metric.gram
    ee = g.submatrix(range(n), range(n))
    zz = g.submatrix(range(n, n + m), range(n, n + m))
    ze = g.submatrix(range(n, n + m), range(n))
    if m:
        corr = zz.inverse() @ ze  # m x n
    else:
        corr = Matrix.zeros(0, n)
    cols = []
    for i in range(n):
        v = [Fraction(0)] * (n + m)
        v[i] = Fraction(1)
        for a in range(m):
            v[n + a] = -corr[a, i]
        cols.append(tuple(v))
    cols.extend(unit(n + m, n + a) for a in range(m))
    change = Matrix.from_columns(cols, nrows=n + m)
    a_block = ee - ze.T @ corr if m else ee
    return AdaptedBasis(change, a_block, zz)


def adapted_brackets_ok(alg: GraphLieAlgebra, basis: AdaptedBasis) -> bool:
    """The adapted basis reproduces the graph bracket pattern exactly."""
    cols = basis.change.columns()
    for p in range(alg.dim):
        for r in range(alg.dim):
            expect = [Fraction(0)] * alg.dim
            for k, c in alg.basis_bracket(p, r).items():
                expect[k] = Fraction(c)
            # expressed in adapted coordinates: z's are unchanged, so compare directly
            if alg.bracket(cols[p], cols[r]) != tuple(expect):
                return False
    return True


# -- J operators --------------------------------------------------------------

def j0_matrix(alg: GraphLieAlgebra, z) -> Matrix:
    """Standard-metric J operator: sum_a z_a (M_ij - M_ji), M_ij sending e_i to e_j."""
    n = alg.n
    rows = [[Fraction(0)] * n for _ in range(n)]
    for a, (i, j) in enumerate(alg.graph.edges):
        c = z[a]
        if c:
            rows[j - 1][i - 1] += c
            rows[i - 1][j - 1] -= c
    return Matrix(rows, n)


@dataclass(frozen=True)
class JPencil:
    mats: tuple      # J_{z_1}, ..., J_{z_m} in adapted e-coordinates
    standard: bool   # True for the J^0 family of the standard inner product

    def at(self, z) -> Matrix:
        """J_Z for Z given in z-coordinates."""
        if not self.mats:
            raise ValueError("empty pencil")
        n = self.mats[0].nrows
        flat = lincomb(z, [m.entries for m in self.mats])
        return Matrix((flat[i * n:(i + 1) * n] for i in range(n)), n)

    def __len__(self):
        return len(self.mats)


def j0_pencil(alg: GraphLieAlgebra) -> JPencil:
    m = alg.m
    return JPencil(tuple(j0_matrix(alg, unit(m, a)) for a in range(m)), True)


def j_pencil(alg: GraphLieAlgebra, metric: Metric, basis: AdaptedBasis) -> JPencil:
    """Solve A J_Z = W_Z where W_Z[l][k] = (Z, [e'_k, e'_l])."""
    n, m = alg.n, alg.m
    a_inv = basis.A.inverse()
    mats = []
    for a in range(m):
        cz = basis.C.col(a)  # C z_a in z-coordinates
        w = [[Fraction(0)] * n for _ in range(n)]
        for b, (i, j) in enumerate(alg.graph.edges):
            c = cz[b]
            if c:
                # (Z, [e_i, e_j]) = c for i < j, antisymmetric
                w[j - 1][i - 1] += c
                w[i - 1][j - 1] -= c
        mats.append(a_inv @ Matrix(w, n))
    return JPencil(tuple(mats), metric.gram == Matrix.identity(alg.dim))


@dataclass(frozen=True)
class ACSplit:
    A: Matrix
    C: Matrix


def ac_split(alg: GraphLieAlgebra, metric: Metric, basis: AdaptedBasis) -> ACSplit:
    gram = basis.change.T @ metric.gram @ basis.change
    n = alg.n
    cross = gram.submatrix(range(n), range(n, alg.dim))
    if not cross.is_zero():
        raise MetricError("adapted basis does not split the metric")
    return ACSplit(gram.submatrix(range(n), range(n)), gram.submatrix(range(n, alg.dim), range(n, alg.dim)))


def b_form(k1: Matrix, k2: Matrix) -> Fraction:
    """B(K1, K2) = -1/2 tr(K1 K2)."""
    if k1.shape != k2.shape or not k1.is_square():
        raise ValueError(f"b_form needs square matrices of equal size, got {k1.shape}, {k2.shape}")
    return -(k1 @ k2).trace() / 2


def b_gram(pencil: JPencil) -> Matrix:
    m = len(pencil)
    return Matrix([[b_form(pencil.mats[a], pencil.mats[b]) for b in range(m)] for a in range(m)], m)


def is_metric_skew(gram: Matrix, k: Matrix) -> bool:
    return (gram @ k + k.T @ gram).is_zero()


def verify_jj0(
    alg: GraphLieAlgebra,
    metric: Metric,
    basis: AdaptedBasis,
    samples: int = 3,
    rng: random.Random | None = None,
):
    """Check J_Z = A^{-1} J0_{CZ} on every z_a and on random rational Z.

    Returns ``(True, None)`` or ``(False, Z)`` for the first offending Z.
    """
    m = alg.m
    if m == 0:
        return True, None
    rng = rng or random.Random(0)
    pencil = j_pencil(alg, metric, basis)
    a_inv = basis.A.inverse()
    zs = [unit(m, a) for a in range(m)]
    zs += [tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m)) for _ in range(samples)]
    for z in zs:
        cz = basis.C @ z
        if pencil.at(z) != a_inv @ j0_matrix(alg, cz):
            return False, z
    return True, None


# -- metric files ----------------------------------------------------------------

def format_metric(metric: Metric) -> str:
    doc = {
        "dim": metric.dim,
        "gram": [[format_rational(x) for x in r] for r in metric.gram.rows()],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_metric(text: str, alg: GraphLieAlgebra | None = None) -> Metric:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MetricError(f"metric file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dim" not in doc or "gram" not in doc:
        raise MetricError("metric document needs 'dim' and 'gram' fields")
    dim = doc["dim"]
    rows = doc["gram"]
    if not isinstance(dim, int) or not isinstance(rows, list) or len(rows) != dim:
        raise MetricError("'gram' must be a list of 'dim' rows")
    parsed = []
    for r in rows:
        if not isinstance(r, list) or len(r) != dim:
            raise MetricError("every Gram row must have 'dim' entries")
        try:
            parsed.append([parse_rational(x) for x in r])
        except ValueError as exc:
            raise MetricError(str(exc)) from exc
    metric = Metric(Matrix(parsed, dim))
    if alg is not None:
        check_metric(alg, metric)
    return metric


def metric_from_blocks(alg: GraphLieAlgebra, a_block: Sequence, c_block: Matrix) -> Metric:
    """Metric with a given e-block and z-block and no cross terms."""
    return Metric(block_diag(Matrix(a_block, alg.n) if alg.n else Matrix.zeros(0), c_block))
