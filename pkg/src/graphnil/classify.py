"""Cluster-graph structure of the J algebra and the three-way classification.

For a cluster graph with the standard metric, J0 is the direct sum of so(a_mu)
over the cliques.  Its B-orthogonal ideals are: one so(k) per clique of size
3 or >= 5, two so(3) ideals (self-dual / anti-self-dual) per K4, and a single
abelian block collecting the so(2) of every K2.  A semi-standard metric keeps
the e-part standard and puts Phi on the z-part, where Phi is a positive
combination of the ideal projections plus an SPD operator on the abelian block.
"""
from __future__ import annotations

import random
from math import isqrt
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import ClusterInfo, Graph, edges_within, is_cluster_graph
from .gonr import GordonContext, GordonVerdict, NRResult, PencilCoordinates, go_test_sampled, nr_test
from .linalg import (
    Matrix,
    block_diag,
    coordinates,
    is_positive_definite,
    nullspace_sparse,
    rank_of_vectors,
    unit,
    vadd,
    vsub,
)
from .metric import AdaptedBasis, Metric, adapt, b_gram, j0_pencil, j_pencil, standard_metric
from .nilpotent import GraphLieAlgebra, build_algebra

SIMPLE = "simple"
ABELIAN = "abelian"


class NotClusterGraph(ValueError):
    pass


def _require_cluster(alg: GraphLieAlgebra) -> ClusterInfo:
    info = is_cluster_graph(alg.graph)
    if not info.is_cluster:
        i, j = info.witness
        raise NotClusterGraph(f"not a cluster graph: edge {i}-{j} joins non-equivalent vertices")
    return info


# -- ideals ----------------------------------------------------------------------

@dataclass(frozen=True)
class Ideal:
    kind: str           # SIMPLE or ABELIAN
    label: str
    clique: tuple       # vertices; for the abelian block, all K2 vertices
    z_basis: tuple      # z-coordinate vectors W; the ideal is span(J0_W)
    matrices: tuple     # the J0_W themselves

    @property
    def dim(self) -> int:
        return len(self.z_basis)


@dataclass(frozen=True)
class IdealDecomposition:
    ideals: tuple

    @property
    def simple(self) -> list:
        return [i for i in self.ideals if i.kind == SIMPLE]

    @property
    def center(self) -> Ideal | None:
        for i in self.ideals:
            if i.kind == ABELIAN:
                return i
        return None

    @property
    def center_dim(self) -> int:
        c = self.center
        return c.dim if c else 0


def _k4_bases(alg: GraphLieAlgebra, clique):
    a, b, c, d = clique
    idx = alg.graph.edge_index()
    m = alg.m

    def e(p, q):
        return unit(m, idx[p, q])

    sd = (vadd(e(a, b), e(c, d)), vadd(e(b, c), e(a, d)), vsub(e(b, d), e(a, c)))
    asd = (vsub(e(a, b), e(c, d)), vsub(e(b, c), e(a, d)), vadd(e(b, d), e(a, c)))
    return sd, asd


def ideal_decomposition(alg: GraphLieAlgebra) -> IdealDecomposition:
    info = _require_cluster(alg)
    pencil = j0_pencil(alg)
    m = alg.m
    ideals = []
    center_vecs, center_verts = [], []

    def make(kind, label, clique, vecs):
        return Ideal(kind, label, tuple(clique), tuple(vecs), tuple(pencil.at(v) for v in vecs))

    for clique in info.cliques:
        k = len(clique)
        name = "K" + str(k) + "{" + ",".join(map(str, clique)) + "}"
        if k == 2:
            center_vecs.extend(unit(m, a) for a in edges_within(alg.graph, clique))
            center_verts.extend(clique)
        elif k == 4:
            sd, asd = _k4_bases(alg, clique)
            ideals.append(make(SIMPLE, f"so(3)+ in {name}", clique, sd))
            ideals.append(make(SIMPLE, f"so(3)- in {name}", clique, asd))
        else:
            ideals.append(make(SIMPLE, f"so({k}) on {name}", clique,
                               [unit(m, a) for a in edges_within(alg.graph, clique)]))
    if center_vecs:
        ideals.append(make(ABELIAN, f"abelian center (dim {len(center_vecs)})", center_verts, center_vecs))
    return IdealDecomposition(tuple(ideals))


def structure_constants(pencil) -> dict:
    """(a, b) -> z-coordinates of [J_a, J_b]; raises if the span is not a subalgebra."""
    pc = PencilCoordinates(pencil)
    out = {}
    m = len(pencil.mats)
    for a in range(m):
        for b in range(a, m):
            mats = pencil.mats
            w = pc.coords(mats[a] @ mats[b] - mats[b] @ mats[a])
            if w is None:
                raise ValueError(f"span of J is not closed: [J_{a + 1}, J_{b + 1}]")
            out[a, b] = w
            out[b, a] = tuple(-x for x in w)
    return out


# -- Phi space ------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiSpace:
    basis: tuple   # symmetric m x m matrices in z-coordinates

    @property
    def dim(self) -> int:
        return len(self.basis)


def _sym_index(m):
    pairs = [(a, b) for a in range(m) for b in range(a, m)]
    return pairs, {p: k for k, p in enumerate(pairs)}


def _phi_equations(consts: dict, m: int):
    """Rows expressing [J_a, Phi J_b] + [J_b, Phi J_a] = 0 for symmetric Phi."""
    pairs, index = _sym_index(m)

    def var(g, b):
        return index[(min(g, b), max(g, b))]

    rows = []
    for a in range(m):
        for b in range(a, m):
            eqs: dict = {}
            for g in range(m):
                for src, tgt in ((a, b), (b, a)):
                    # Phi_{g, tgt} [J_src, J_g]
                    for k, c in enumerate(consts[src, g]):
                        if c:
                            row = eqs.setdefault(k, {})
                            v = var(g, tgt)
                            row[v] = row.get(v, 0) + c
            for row in eqs.values():
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return rows, pairs


def _sym_from_vector(v, pairs, m) -> Matrix:
    rows = [[Fraction(0)] * m for _ in range(m)]
    for (a, b), x in zip(pairs, v):
        rows[a][b] = x
        rows[b][a] = x
    return Matrix(rows, m)


def phi_space(alg: GraphLieAlgebra) -> PhiSpace:
    """B-symmetric Phi on J0 with [K, Phi K] = 0 for all K, as m x m matrices."""
    _require_cluster(alg)
    m = alg.m
    if m == 0:
        return PhiSpace(())
    consts = structure_constants(j0_pencil(alg))
    rows, pairs = _phi_equations(consts, m)
    kernel = nullspace_sparse(rows, len(pairs))
    return PhiSpace(tuple(_sym_from_vector(v, pairs, m) for v in kernel))


def phi_residual(consts: dict, phi: Matrix) -> tuple | None:
    """First (a, b) with [J_a, Phi J_b] + [J_b, Phi J_a] != 0, else None."""
    m = phi.nrows
    for a in range(m):
        for b in range(a, m):
            acc = [Fraction(0)] * m
            for g in range(m):
                for src, tgt in ((a, b), (b, a)):
                    c = phi[g, tgt]
                    if c:
                        for k, x in enumerate(consts[src, g]):
                            if x:
                                acc[k] += c * x
            if any(acc):
                return (a + 1, b + 1)
    return None


# -- semi-standard metrics ----------------------------------------------------------------

def projection(vectors: Sequence) -> Matrix:
    """Orthogonal projection onto span(vectors) in z-coordinates."""
    v = Matrix.from_columns(list(vectors))
    return v @ (v.T @ v).inverse() @ v.T


def semi_standard_phi(dec: IdealDecomposition, m: int, coefficients: Sequence, center=None) -> Matrix:
    simple = dec.simple
    if len(coefficients) != len(simple):
        raise ValueError(f"expected {len(simple)} ideal coefficients, got {len(coefficients)}")
    coeffs = [Fraction(c) for c in coefficients]
    if any(c <= 0 for c in coeffs):
        raise ValueError("ideal coefficients must be positive")
    phi = Matrix.zeros(m)
    for ideal, c in zip(simple, coeffs):
        phi = phi + projection(ideal.z_basis) * c
    cen = dec.center
    d0 = cen.dim if cen else 0
    if d0:
        if center is None:
            center = Matrix.identity(d0)
        elif not isinstance(center, Matrix):
            center = Matrix.identity(d0) * Fraction(center)
        if center.shape != (d0, d0):
            raise ValueError(f"center block must be {d0}x{d0}")
        if not center.is_symmetric() or not is_positive_definite(center):
            raise ValueError("center block must be symmetric positive definite")
        idx = [next(k for k, x in enumerate(v) if x) for v in cen.z_basis]
        rows = phi.tolist()
        for i, a in enumerate(idx):
            for j, b in enumerate(idx):
                rows[a][b] += center[i, j]
        phi = Matrix(rows, m)
    elif center is not None and isinstance(center, Matrix) and center.nrows:
        raise ValueError("graph has no K2 components, center block must be empty")
    return phi


def construct_semi_standard(alg: GraphLieAlgebra, coefficients: Sequence, center=None) -> Metric:
    """Identity on the e-part, Phi on the z-part.

    ``center`` is an SPD matrix on the abelian block (in the order of its K2
    edges), a positive scalar, or None for the identity.
    """
    dec = ideal_decomposition(alg)
    phi = semi_standard_phi(dec, alg.m, coefficients, center)
    return Metric(block_diag(Matrix.identity(alg.n), phi))


@dataclass(frozen=True)
class SemiStandardResult:
    ok: bool
    failed_condition: int | None = None   # 1 cluster, 2 clique orthogonality, 3 Phi condition
    detail: str = ""
    coefficients: tuple = ()              # per simple ideal: Fraction, or None if irrational
    center: Matrix | None = None          # recovered SPD operator on the abelian block

    def __bool__(self):
        return self.ok


def _pfaffian4(w: Matrix) -> Fraction:
    return w[0, 1] * w[2, 3] - w[0, 2] * w[1, 3] + w[0, 3] * w[1, 2]


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _restricted(op: Matrix, vecs: list) -> Matrix | None:
    """Matrix of op on span(vecs) in that basis, or None if the span is not invariant."""
    cols = []
    for v in vecs:
        c = coordinates(vecs, op @ v)
        if c is None:
            return None
        cols.append(c)
    return Matrix.from_columns(cols)


def is_semi_standard(alg: GraphLieAlgebra, metric: Metric, basis: AdaptedBasis) -> SemiStandardResult:
    """Decide semi-standardness without square roots.

    (1) cluster graph; (2) after absorbing the isolated directions, distinct
    cliques are orthogonal (Schur complement test on A); (3) the operator
    Psi = G_B^{-1} C, where G_B is the B-Gram of the metric's J operators,
    satisfies [K, Psi K] = 0 on span(J).  Psi represents the inverse of Phi in
    any standard basis that makes A the identity, so (3) is Phi-cone membership.
    """
    info = is_cluster_graph(alg.graph)
    if not info.is_cluster:
        i, j = info.witness
        return SemiStandardResult(False, 1, f"not a cluster graph: edge {i}-{j}")
    if alg.m == 0:
        return SemiStandardResult(True, detail="abelian: every metric is standard")
    a = basis.A
    iso = [v - 1 for v in info.isolated]
    rest = [v - 1 for v in range(1, alg.n + 1) if v - 1 not in iso]
    a_rr = a.submatrix(rest, rest)
    if iso:
        a_00 = a.submatrix(iso, iso)
        a_r0 = a.submatrix(rest, iso)
        a_rr = a_rr - a_r0 @ a_00.inverse() @ a_r0.T
    pos = {v: k for k, v in enumerate(rest)}
    for mu, c1 in enumerate(info.cliques):
        for c2 in info.cliques[mu + 1:]:
            for i in c1:
                for j in c2:
                    if a_rr[pos[i - 1], pos[j - 1]]:
                        return SemiStandardResult(
                            False, 2,
                            f"cliques {c1} and {c2} are not orthogonal modulo isolated directions",
                        )
    pencil = j_pencil(alg, metric, basis)
    try:
        consts = structure_constants(pencil)
    except ValueError as exc:
        return SemiStandardResult(False, 3, str(exc))
    c = basis.C
    psi = b_gram(pencil).inverse() @ c
    bad = phi_residual(consts, psi)
    if bad:
        return SemiStandardResult(False, 3, f"[K, Phi K] != 0 for K = J_z{bad[0]}, J_z{bad[1]}")
    coeffs, center = _recover_coefficients(alg, basis, pencil, psi)
    return SemiStandardResult(True, detail="cluster graph, orthogonal cliques, Phi condition holds",
                              coefficients=coeffs, center=center)


def _recover_coefficients(alg, basis, pencil, psi):
    """Ideal coefficients: Psi acts on each simple ideal by 1/lambda."""
    dec = ideal_decomposition(alg)
    m = alg.m
    c_inv = basis.C.inverse()
    coeffs = []
    seen_k4 = {}
    for ideal in dec.simple:
        clique = ideal.clique
        edges = edges_within(alg.graph, clique)
        vecs = [c_inv.col(e) for e in edges]
        r = _restricted(psi, vecs)
        if len(clique) != 4:
            coeffs.append(1 / r[0, 0])
            continue
        if clique in seen_k4:
            coeffs.append(seen_k4.pop(clique))
            continue
        t1 = r.trace() / 3
        t2 = (r @ r).trace() / 3
        prod = (t1 * t1 - t2) / 2
        disc = t1 * t1 - 4 * prod
        if disc == 0:
            lam = 2 / t1
            coeffs.append(lam)
            seen_k4[clique] = lam
            continue
        root = _rational_sqrt(disc)
        if root is None:
            coeffs.append(None)
            seen_k4[clique] = None
            continue
        lam_sd = lam_asd = None
        pos = [v - 1 for v in clique]
        for s in ((t1 + root) / 2, (t1 - root) / 2):
            shifted = r - Matrix.identity(6) * s
            ker = nullspace_sparse([{j: x for j, x in enumerate(row) if x} for row in shifted.rows()], 6)
            if not ker:
                continue
            w = tuple(sum((ker[0][i] * vecs[i][a] for i in range(6)), Fraction(0)) for a in range(m))
            omega = (basis.A @ pencil.at(w)).submatrix(pos, pos)
            # a self-dual 2-form has positive Pfaffian for the vertex orientation
            if _pfaffian4(omega) > 0:
                lam_sd = 1 / s
            else:
                lam_asd = 1 / s
        coeffs.append(lam_sd)
        seen_k4[clique] = lam_asd
    center = None
    cen = dec.center
    if cen:
        edges = [next(k for k, x in enumerate(v) if x) for v in cen.z_basis]
        r = _restricted(psi, [c_inv.col(e) for e in edges])
        center = r.inverse() if r is not None else None
    return tuple(coeffs), center


# -- the three-way verdict -------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationReport:
    graph: Graph
    cluster: ClusterInfo
    nr: NRResult
    go: GordonVerdict
    semi: SemiStandardResult
    agree: bool
    notes: tuple = field(default_factory=tuple)

    @property
    def is_go(self) -> bool:
        """Ground truth for geodesic orbit: natural reductivity, by the equivalence."""
        return self.nr.ok


def theorem_consistent(cluster: bool, nr: bool, go_no: bool, semi: bool) -> tuple[bool, list]:
    notes = []
    if nr != (cluster and semi):
        notes.append("NR verdict differs from (cluster and semi-standard)")
    if go_no and nr:
        notes.append("Gordon found an infeasible pair on a naturally reductive metric")
    if not cluster and not go_no:
        notes.append("non-cluster graph without a Gordon witness")
    return not notes, notes


def classify(g: Graph, metric: Metric | None = None, seed: int = 0, extra_samples: int = 4) -> ClassificationReport:
    alg = build_algebra(g)
    metric = metric or standard_metric(alg)
    basis = adapt(alg, metric)
    cluster = is_cluster_graph(g)
    ctx = GordonContext(alg, metric, basis)
    nr = nr_test(alg, metric, basis, ctx.pencil)
    go = go_test_sampled(alg, metric, basis, seed=seed, extra_samples=extra_samples, ctx=ctx)
    semi = is_semi_standard(alg, metric, basis)
    agree, notes = theorem_consistent(cluster.is_cluster, nr.ok, go.is_no, semi.ok)
    if nr.ok is False and not go.is_no and cluster.is_cluster:
        notes.append("Gordon sampling found no witness; NR verdict is authoritative")
    return ClassificationReport(g, cluster, nr, go, semi, agree, tuple(notes))


def random_semi_standard(alg: GraphLieAlgebra, rng: random.Random) -> Metric:
    dec = ideal_decomposition(alg)
    coeffs = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in dec.simple]
    d0 = dec.center_dim
    center = None
    if d0:
        lo = Matrix([[rng.randint(-2, 2) for _ in range(d0)] for _ in range(d0)], d0)
        center = lo.T @ lo + Matrix.diag([rng.randint(1, 3) for _ in range(d0)])
    return construct_semi_standard(alg, coeffs, center)
