"""Geodesic-orbit and naturally-reductive tests, and generic central elements.

Gordon's criterion: the metric is geodesic orbit iff for every X in a and Z in z
some metric-skew derivation D has D Z = 0 and D X = J_Z X.  It quantifies over
all pairs, so it is only sampled here; a single infeasible pair is a proof of
failure.  Natural reductivity is decided exactly from the J pencil.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .derivations import SkewDerivationSpace, satisfies_leibniz, skew_derivation_space
from .graph import is_cluster_graph
from .linalg import (
    Matrix,
    Polynomial,
    char_poly,
    commutator,
    farkas_certificate,
    is_squarefree,
    rank,
    rank_of_vectors,
    rref,
    solve_sparse,
    unit,
)
from .metric import AdaptedBasis, JPencil, Metric, j0_matrix, j_pencil
from .nilpotent import GraphLieAlgebra

NO = "No"
PROBABLY_YES = "ProbablyYes"


class GenericSearchExhausted(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


# -- Gordon feasibility ------------------------------------------------------------

@dataclass(frozen=True)
class GordonResult:
    feasible: bool
    derivation: Matrix | None = None
    certificate: tuple | None = None   # y with y.A = 0, y.b = 1 for the affine system


@dataclass
class GordonContext:
    """Precomputed data shared by many feasibility checks on one metric."""

    alg: GraphLieAlgebra
    metric: Metric
    basis: AdaptedBasis
    pencil: JPencil = None
    skew: SkewDerivationSpace = None
    c_inv: Matrix = None

    def __post_init__(self):
        if self.pencil is None:
            self.pencil = j_pencil(self.alg, self.metric, self.basis)
        if self.skew is None:
            self.skew = skew_derivation_space(self.alg, self.metric, self.basis)
        if self.c_inv is None:
            self.c_inv = self.basis.C.inverse() if self.alg.m else Matrix.zeros(0)
        n = self.alg.n
        self._da = [d.submatrix(range(n), range(n)) for d in self.skew.basis]
        self._dz = [d.submatrix(range(n, self.alg.dim), range(n, self.alg.dim)) for d in self.skew.basis]

    def j_at(self, z) -> Matrix:
        if not self.alg.m:
            return Matrix.zeros(self.alg.n)
        return self.pencil.at(z)


def gordon_feasible(ctx: GordonContext, z, x) -> GordonResult:
    """Look for a skew derivation D with D Z = 0 and D X = J_Z X.

    The affine system is solved exactly over the skew-derivation space; on
    infeasibility a Farkas-type certificate is attached.
    """
    n, m = ctx.alg.n, ctx.alg.m
    z = tuple(Fraction(v) for v in z)
    x = tuple(Fraction(v) for v in x)
    target = ctx.j_at(z) @ x
    s = len(ctx._da)
    rows, rhs = [], []
    dz_z = [dz @ z for dz in ctx._dz]
    for k in range(m):
        rows.append({t: dz_z[t][k] for t in range(s) if dz_z[t][k]})
        rhs.append(Fraction(0))
    da_x = [da @ x for da in ctx._da]
    for k in range(n):
        rows.append({t: da_x[t][k] for t in range(s) if da_x[t][k]})
        rhs.append(target[k])
    sol = solve_sparse(rows, rhs, s)
    if sol is None:
        return GordonResult(False, None, farkas_certificate(rows, rhs, s))
    d = Matrix.zeros(ctx.alg.dim)
    for t, c in enumerate(sol.particular):
        if c:
            d = d + ctx.skew.basis[t] * c
    return GordonResult(True, d, None)


def verify_gordon_witness(ctx: GordonContext, z, x, d: Matrix) -> bool:
    """Re-check a returned D: metric-skew, D Z = 0, [D_a, J_Z] = 0, D X = J_Z X."""
    n = ctx.alg.n
    gram = ctx.basis.gram
    if not (gram @ d + d.T @ gram).is_zero():
        return False
    if not satisfies_leibniz(ctx.alg, d):
        return False
    full_z = (Fraction(0),) * n + tuple(Fraction(v) for v in z)
    if any(d @ full_z):
        return False
    da = d.submatrix(range(n), range(n))
    jz = ctx.j_at(z)
    if not commutator(da, jz).is_zero():
        return False
    return da @ tuple(x) == jz @ tuple(x)


@dataclass(frozen=True)
class GordonVerdict:
    tag: str                       # NO or PROBABLY_YES
    witness: tuple | None = None   # (Z, X) in adapted z- and e-coordinates
    witness_label: str | None = None
    certificate: tuple | None = None
    tested: int = 0
    samples: tuple = field(default_factory=tuple)  # descriptions of the tested families

    @property
    def is_no(self) -> bool:
        return self.tag == NO


def _rand_q(rng: random.Random, lo=-5, hi=5) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 3))


def go_test_sampled(
    alg: GraphLieAlgebra,
    metric: Metric,
    basis: AdaptedBasis,
    seed: int = 0,
    extra_samples: int = 4,
    ctx: GordonContext | None = None,
) -> GordonVerdict:
    """Sample Gordon's criterion.

    Tested, in order: every (C^{-1} z_a, e_i); a generic Z against every e_i
    and two random X; then ``extra_samples`` random pairs.
    """
    rng = random.Random(seed)
    ctx = ctx or GordonContext(alg, metric, basis)
    n, m = alg.n, alg.m
    tested = 0
    families = []

    def check(z, x, label):
        nonlocal tested
        tested += 1
        res = gordon_feasible(ctx, z, x)
        if not res.feasible:
            return GordonVerdict(NO, (tuple(z), tuple(x)), label, res.certificate, tested, tuple(families))
        return None

    if m == 0:
        return GordonVerdict(PROBABLY_YES, tested=0, samples=("no central directions: J vanishes",))
    families.append(f"(C^-1 z_a, e_i) for all {m} x {n} pairs")
    for a in range(m):
        z = ctx.c_inv.col(a)
        for i in range(n):
            v = check(z, unit(n, i), f"(C^-1 z{a + 1}, e{i + 1})")
            if v:
                return v
    try:
        gen = generic_element(alg, metric, basis, seed=seed)
    except GenericSearchExhausted as exc:
        families.append(f"generic Z skipped: {exc}")
    else:
        families.append("generic Z against every e_i and 2 random X")
        xs = [unit(n, i) for i in range(n)]
        xs += [tuple(_rand_q(rng) for _ in range(n)) for _ in range(2)]
        for k, x in enumerate(xs):
            v = check(gen.z, x, f"(generic Z, {'e' + str(k + 1) if k < n else 'random X'})")
            if v:
                return v
    families.append(f"{extra_samples} random pairs")
    for _ in range(extra_samples):
        z = tuple(_rand_q(rng) for _ in range(m))
        x = tuple(_rand_q(rng) for _ in range(n))
        v = check(z, x, "(random Z, random X)")
        if v:
            return v
    return GordonVerdict(PROBABLY_YES, tested=tested, samples=tuple(families))


# -- natural reductivity ---------------------------------------------------------------

class PencilCoordinates:
    """Coordinates of matrices in the span of an injective J pencil."""

    def __init__(self, pencil: JPencil):
        self.mats = pencil.mats
        m = len(self.mats)
        self.m = m
        if not m:
            self.positions = []
            return
        vecs = [j.entries for j in self.mats]
        # pivot columns of the m x n^2 matrix pick m independent entry positions
        pivots, _ = rref(Matrix(vecs, len(vecs[0])))
        if len(pivots) != m:
            raise ValueError("J pencil is not injective")
        self.positions = pivots
        sq = Matrix([[vecs[a][p] for a in range(m)] for p in pivots], m)
        self._inv = sq.inverse()

    def coords(self, k: Matrix):
        """z-coordinates W with J_W = k, or None when k is outside the span."""
        if not self.m:
            return () if k.is_zero() else None
        e = k.entries
        w = self._inv @ tuple(e[p] for p in self.positions)
        recon = [Fraction(0)] * len(e)
        for a, c in enumerate(w):
            if c:
                for i, v in enumerate(self.mats[a].entries):
                    if v:
                        recon[i] += c * v
        return w if tuple(recon) == e else None


@dataclass(frozen=True)
class NRResult:
    ok: bool
    failed_condition: int | None = None   # 1: not a subalgebra, 2: ad not skew on z
    indices: tuple | None = None          # 1-based (a, b) or (a,)
    detail: str = ""

    def __bool__(self):
        return self.ok


def nr_test(alg: GraphLieAlgebra, metric: Metric, basis: AdaptedBasis, pencil: JPencil | None = None) -> NRResult:
    """Exact natural-reductivity test on the J pencil of the given metric."""
    m = alg.m
    if m == 0:
        return NRResult(True, detail="abelian: J is empty")
    pencil = pencil or j_pencil(alg, metric, basis)
    pc = PencilCoordinates(pencil)
    consts = {}
    for a in range(m):
        for b in range(a, m):
            w = pc.coords(commutator(pencil.mats[a], pencil.mats[b]))
            if w is None:
                return NRResult(
                    False, 1, (a + 1, b + 1),
                    f"[J_z{a + 1}, J_z{b + 1}] is not in the span of the J operators",
                )
            consts[a, b] = w
            consts[b, a] = tuple(-v for v in w)
    c = basis.C
    for g in range(m):
        s = Matrix.from_columns([consts[g, b] for b in range(m)], nrows=m)
        if not (s.T @ c + c @ s).is_zero():
            return NRResult(
                False, 2, (g + 1,),
                f"J^-1 ad(J_z{g + 1}) J is not skew for the metric on z",
            )
    return NRResult(True, detail="J is a subalgebra and every J^-1 ad(J_Z) J is skew")


# -- ranks and generic elements --------------------------------------------------------------

def max_rank_formula(alg: GraphLieAlgebra) -> int:
    info = is_cluster_graph(alg.graph)
    if not info.is_cluster:
        raise ValueError("closed formula needs a cluster graph")
    return sum(2 * (len(c) // 2) for c in info.cliques)


def max_rank_sampled(alg: GraphLieAlgebra, seed: int = 0, retries: int = 6) -> int:
    rng = random.Random(seed)
    m = alg.m
    if not m:
        return 0
    best = 0
    for _ in range(retries):
        z = tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(m))
        best = max(best, rank(j0_matrix(alg, z)))
    return best


def max_rank(alg: GraphLieAlgebra, seed: int = 0) -> int:
    """Maximal rank of J_Z over Z (metric independent)."""
    if is_cluster_graph(alg.graph).is_cluster:
        return max_rank_formula(alg)
    return max_rank_sampled(alg, seed)


@dataclass(frozen=True)
class GenericElement:
    z: tuple                 # z-coordinates in the adapted basis
    rank: int
    char_poly: Polynomial
    nonzero_factor: Polynomial   # char_poly / x^(n - rank)
    coefficients: tuple = ()     # the rotation coefficients used, cluster case

    @property
    def squarefree(self) -> bool:
        return is_squarefree(self.nonzero_factor)


def certify_generic(jz: Matrix, r: int):
    """Return (char poly, nonzero-root factor) if J_Z has rank r and simple nonzero eigenvalues."""
    n = jz.nrows
    if rank(jz) != r:
        return None
    chi = char_poly(jz)
    if chi.lowest_degree() != n - r:
        return None
    f = chi.shift_down(n - r)
    if f(0) == 0 or not is_squarefree(f):
        return None
    return chi, f


def generic_element(
    alg: GraphLieAlgebra,
    metric: Metric,
    basis: AdaptedBasis,
    seed: int = 0,
    budget: int = 200,
    pencil: JPencil | None = None,
) -> GenericElement:
    """A Z of maximal J-rank whose nonzero eigenvalues are pairwise distinct.

    On cluster graphs Z = C^{-1} W where J0_W is a combination of disjoint
    plane rotations inside the cliques; coefficient tuples 1, 2, 3, ... are
    tried first, then random ones.  Other graphs use a random search.  Every
    candidate is certified by rank and squarefreeness.
    """
    m, n = alg.m, alg.n
    pencil = pencil or j_pencil(alg, metric, basis)
    if m == 0:
        chi = Polynomial.monomial(n)
        return GenericElement((), 0, chi, Polynomial([1]))
    rng = random.Random(seed)
    c_inv = basis.C.inverse()
    info = is_cluster_graph(alg.graph)
    r = max_rank(alg, seed)
    if info.is_cluster:
        eidx = alg.graph.edge_index()
        planes = []
        for clique in info.cliques:
            for j in range(len(clique) // 2):
                planes.append(eidx[clique[2 * j], clique[2 * j + 1]])
        candidates = [tuple(range(1, len(planes) + 1))]
        for _ in range(budget - 1):
            candidates.append(tuple(Fraction(rng.randint(1, 60), rng.randint(1, 7)) for _ in planes))
        for coeffs in candidates:
            w = [Fraction(0)] * m
            for a, x in zip(planes, coeffs):
                w[a] = -Fraction(x)  # rotation e_b -> -e_a equals -J0 of edge (a, b)
            z = c_inv @ tuple(w)
            cert = certify_generic(pencil.at(z), r)
            if cert:
                return GenericElement(z, r, cert[0], cert[1], tuple(Fraction(x) for x in coeffs))
    else:
        for _ in range(budget):
            z = tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(m))
            cert = certify_generic(pencil.at(z), r)
            if cert:
                return GenericElement(z, r, cert[0], cert[1])
    raise GenericSearchExhausted(f"no generic element found within a budget of {budget} candidates")


# -- structure of Gordon witnesses at generic pairs ---------------------------------------------

@dataclass(frozen=True)
class SolutionStructure:
    ok: bool
    derivation: Matrix | None = None
    q_part: Matrix | None = None   # D_a - J_Z


def in_generic_position(jz: Matrix, x, r: int) -> bool:
    """{J_Z^i X : i = 1..r-1} is linearly independent."""
    vecs = []
    v = tuple(x)
    for _ in range(max(r - 1, 0)):
        v = jz @ v
        vecs.append(v)
    return rank_of_vectors(vecs) == len(vecs) if vecs else True


def solution_structure_check(ctx: GordonContext, z, x) -> SolutionStructure:
    """Find a Gordon witness whose e-part is J_Z + Q with J_Z Q = 0 and Q X = 0."""
    n, m = ctx.alg.n, ctx.alg.m
    z = tuple(Fraction(v) for v in z)
    x = tuple(Fraction(v) for v in x)
    jz = ctx.j_at(z)
    r = max_rank(ctx.alg)
    if certify_generic(jz, r) is None:
        raise PreconditionError("Z is not generic")
    if not in_generic_position(jz, x, r):
        raise PreconditionError("X is not in general position for J_Z")
    s = len(ctx._da)
    rows, rhs = [], []
    dz_z = [dz @ z for dz in ctx._dz]
    for k in range(m):
        rows.append({t: dz_z[t][k] for t in range(s) if dz_z[t][k]})
        rhs.append(Fraction(0))
    target = jz @ x
    da_x = [da @ x for da in ctx._da]
    for k in range(n):
        rows.append({t: da_x[t][k] for t in range(s) if da_x[t][k]})
        rhs.append(target[k])
    # J_Z D_a = J_Z^2, i.e. J_Z Q = 0
    jd = [jz @ da for da in ctx._da]
    jj = jz @ jz
    for i in range(n):
        for j in range(n):
            rows.append({t: jd[t][i, j] for t in range(s) if jd[t][i, j]})
            rhs.append(jj[i, j])
    sol = solve_sparse(rows, rhs, s)
    if sol is None:
        return SolutionStructure(False)
    d = Matrix.zeros(ctx.alg.dim)
    for t, c in enumerate(sol.particular):
        if c:
            d = d + ctx.skew.basis[t] * c
    da = d.submatrix(range(n), range(n))
    qpart = da - jz
    assert (jz @ qpart).is_zero() and not any(qpart @ x)
    return SolutionStructure(True, d, qpart)
