"""Derivations of a graph algebra, computed exactly.

All matrices act on adapted-basis coordinates (e'_1..e'_n, z_1..z_m).  The
adapted basis is itself a standard basis, so the full derivation algebra
looks the same in it as in the construction basis; only the skew-symmetric
part depends on the metric.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, is_cluster_graph, neighborhoods, preceq
from .linalg import Matrix, Span, block_diag, commutator, nullspace_sparse, rank_of_vectors
from .metric import AdaptedBasis, Metric, j0_pencil, j_pencil
from .nilpotent import GraphLieAlgebra


@dataclass(frozen=True)
class DerivationSpace:
    basis: tuple       # dim x dim matrices spanning Der(n)
    a_parts: tuple     # n x n admissible e-parts T, one per non-Hom(a, z) basis element
    z_parts: tuple     # the induced m x m z-parts, aligned with a_parts

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class SkewDerivationSpace:
    basis: tuple       # dim x dim matrices, skew for the metric, preserving a and z

    @property
    def dim(self) -> int:
        return len(self.basis)


def _skew_entries(n):
    return [(k, l) for k in range(n) for l in range(k + 1, n)]


def derivation_space(alg: GraphLieAlgebra, metric: Metric, basis: AdaptedBasis) -> DerivationSpace:
    """Solve J0_a T + T^t J0_a = sum_b c_ab J0_b for (T, c), then add Hom(a, z).

    The z-part of the derivation with e-part T is D z_b = sum_a c_ab z_a.
    """
    n, m = alg.n, alg.m
    j0 = j0_pencil(alg).mats
    nt = n * n

    def tvar(p, q):
        return p * n + q

    def cvar(a, b):
        return nt + a * m + b

    rows = []
    for a in range(m):
        ja = j0[a]
        nz = [(p, q, ja[p, q]) for p in range(n) for q in range(n) if ja[p, q]]
        for k, l in _skew_entries(n):
            row = {}
            # (J T)[k][l] = sum_p J[k][p] T[p][l]
            for p, q, v in nz:
                if p == k:
                    row[tvar(q, l)] = row.get(tvar(q, l), 0) + v
                # (T^t J)[k][l] = sum_p T[p][k] J[p][l]
                if q == l:
                    row[tvar(p, k)] = row.get(tvar(p, k), 0) + v
            for b in range(m):
                v = j0[b][k, l]
                if v:
                    row[cvar(a, b)] = row.get(cvar(a, b), 0) - v
            row = {c: Fraction(v) for c, v in row.items() if v}
            if row:
                rows.append(row)
    kernel = nullspace_sparse(rows, nt + m * m)
    full, a_parts, z_parts = [], [], []
    for v in kernel:
        t = Matrix((v[i * n:(i + 1) * n] for i in range(n)), n)
        c = Matrix((v[nt + a * m: nt + (a + 1) * m] for a in range(m)), m) if m else Matrix.zeros(0)
        a_parts.append(t)
        z_parts.append(c)
        full.append(block_diag(t, c))
    d = n + m
    for i in range(n):
        for a in range(m):
            full.append(Matrix.unit(d, d, n + a, i))
    return DerivationSpace(tuple(full), tuple(a_parts), tuple(z_parts))


def skew_derivation_space(alg: GraphLieAlgebra, metric: Metric, basis: AdaptedBasis) -> SkewDerivationSpace:
    """Metric-skew derivations: D_a in so(a, A), D_z in so(z, C), J_{D z} = [D_a, J_z]."""
    n, m = alg.n, alg.m
    pencil = j_pencil(alg, metric, basis)
    a_mat, c_mat = basis.A, basis.C
    a_inv = a_mat.inverse()
    gens = []
    for k, l in _skew_entries(n):
        e = Matrix.unit(n, n, k, l) - Matrix.unit(n, n, l, k)
        gens.append(a_inv @ e)
    s = len(gens)

    def zvar(b, a):  # (D_z)[b][a]
        return s + b * m + a

    rows = []
    # A [D_a, J_a] - sum_b (D_z)[b][a] A J_b = 0, antisymmetric: keep k < l
    a_j = [a_mat @ jm for jm in pencil.mats]
    for a in range(m):
        brs = [a_mat @ commutator(g, pencil.mats[a]) for g in gens]
        for k, l in _skew_entries(n):
            row = {}
            for t in range(s):
                v = brs[t][k, l]
                if v:
                    row[t] = v
            for b in range(m):
                v = a_j[b][k, l]
                if v:
                    row[zvar(b, a)] = -v
            if row:
                rows.append(row)
    # C D_z + D_z^t C = 0
    for a in range(m):
        for b in range(a, m):
            row = {}
            for p in range(m):
                v = c_mat[a, p]
                if v:
                    row[zvar(p, b)] = row.get(zvar(p, b), 0) + v
                v = c_mat[p, b]
                if v:
                    row[zvar(p, a)] = row.get(zvar(p, a), 0) + v
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    kernel = nullspace_sparse(rows, s + m * m)
    out = []
    for v in kernel:
        da = Matrix.zeros(n)
        for t in range(s):
            if v[t]:
                da = da + gens[t] * v[t]
        dz = Matrix((v[s + b * m: s + (b + 1) * m] for b in range(m)), m) if m else Matrix.zeros(0)
        out.append(block_diag(da, dz))
    return SkewDerivationSpace(tuple(out))


# -- independent checks ----------------------------------------------------------

def satisfies_leibniz(alg: GraphLieAlgebra, d: Matrix) -> bool:
    """D[x, y] = [Dx, y] + [x, Dy] on all pairs of basis vectors."""
    dim = alg.dim
    cols = d.columns()
    for p in range(dim):
        for r in range(p + 1, dim):
            lhs = [Fraction(0)] * dim
            for k, c in alg.basis_bracket(p, r).items():
                for i in range(dim):
                    lhs[i] += c * d[i, k]
            ep = [Fraction(0)] * dim
            ep[p] = Fraction(1)
            er = [Fraction(0)] * dim
            er[r] = Fraction(1)
            rhs = [x + y for x, y in zip(alg.bracket(cols[p], er), alg.bracket(ep, cols[r]))]
            if lhs != rhs:
                return False
    return True


def leibniz_rows(alg: GraphLieAlgebra) -> tuple:
    """Integer rows of the Leibniz rule over End(n); unknown D[p][q] is p*dim + q."""
    dim = alg.dim
    rows = []
    for p in range(dim):
        for r in range(p + 1, dim):
            eqs: dict = {}

            def add(k, var, c):
                e = eqs.setdefault(k, {})
                e[var] = e.get(var, 0) + c

            for k, c in alg.basis_bracket(p, r).items():
                for i in range(dim):
                    add(i, i * dim + k, c)  # (D [b_p, b_r])_i
            for qq in range(dim):
                for k, c in alg.basis_bracket(qq, r).items():
                    add(k, qq * dim + p, -c)  # -[D b_p, b_r]
                for k, c in alg.basis_bracket(p, qq).items():
                    add(k, qq * dim + r, -c)  # -[b_p, D b_r]
            for e in eqs.values():
                e = {v: c for v, c in e.items() if c}
                if e:
                    rows.append(e)
    return rows, dim * dim


def leibniz_derivation_basis(alg: GraphLieAlgebra) -> list:
    """Nullspace of the Leibniz rule over all of End(n)."""
    dim = alg.dim
    rows, ncols = leibniz_rows(alg)
    kernel = nullspace_sparse([{v: Fraction(c) for v, c in r.items()} for r in rows], ncols)
    return [Matrix((v[i * dim:(i + 1) * dim] for i in range(dim)), dim) for v in kernel]


def skew_intersection(space: DerivationSpace, gram: Matrix) -> list:
    """Elements of a derivation space that are skew for the given Gram matrix."""
    mats = space.basis
    if not mats:
        return []
    dim = gram.nrows
    prods = [gram @ d + d.T @ gram for d in mats]
    rows = []
    for i in range(dim):
        for j in range(i, dim):
            row = {t: p[i, j] for t, p in enumerate(prods) if p[i, j]}
            if row:
                rows.append(row)
    kernel = nullspace_sparse(rows, len(mats))
    out = []
    for v in kernel:
        acc = Matrix.zeros(dim)
        for t, c in enumerate(v):
            if c:
                acc = acc + mats[t] * c
        out.append(acc)
    return out


def same_span(mats1, mats2) -> bool:
    v1 = [m.entries for m in mats1]
    v2 = [m.entries for m in mats2]
    r1 = rank_of_vectors(v1)
    return r1 == rank_of_vectors(v2) == rank_of_vectors(v1 + v2) if (v1 or v2) else True


def span_dim(mats) -> int:
    return rank_of_vectors([m.entries for m in mats])


# -- combinatorial description of the e-parts -----------------------------------------

SENDS_J_TO_I = "E_ij: e_j -> e_i"
SENDS_I_TO_J = "M_ij: e_i -> e_j"


@dataclass(frozen=True)
class DMSpan:
    pairs: tuple           # 1-based (i, j) with i preceding j
    sends_j_to_i: tuple    # matrix unit with a 1 in row i, column j
    sends_i_to_j: tuple    # matrix unit with a 1 in row j, column i

    @property
    def dim(self) -> int:
        return len(self.pairs)


def dm_span(g: Graph) -> DMSpan:
    n = g.n
    nb = neighborhoods(g)
    pairs = tuple((i, j) for i in g.vertices for j in g.vertices if preceq(g, i, j, nb))
    row = tuple(Matrix.unit(n, n, i - 1, j - 1) for i, j in pairs)
    col = tuple(Matrix.unit(n, n, j - 1, i - 1) for i, j in pairs)
    return DMSpan(pairs, row, col)


def matching_orientations(space: DerivationSpace, dm: DMSpan) -> list:
    """Which orientation(s) of the combinatorial span equal the space of e-parts."""
    out = []
    if same_span(space.a_parts, dm.sends_j_to_i):
        out.append(SENDS_J_TO_I)
    if same_span(space.a_parts, dm.sends_i_to_j):
        out.append(SENDS_I_TO_J)
    return out


@dataclass(frozen=True)
class BlockClaimReport:
    holds: bool
    block_dim: int        # dim of the direct sum of End(a_mu), mu = 0..p
    actual_dim: int       # dim of the e-parts of Der(n)
    extra_pairs: tuple    # 1-based (i, j): allowed e_j -> e_i maps outside the blocks


def block_claim(alg: GraphLieAlgebra, space: DerivationSpace) -> BlockClaimReport:
    """Compare the e-parts of Der(n) with the block-diagonal sum over cliques and isolated vertices."""
    info = is_cluster_graph(alg.graph)
    if not info.is_cluster:
        raise ValueError("block decomposition is defined for cluster graphs only")
    n = alg.n
    groups = [tuple(info.isolated)] + [tuple(c) for c in info.cliques]
    block_units = [Matrix.unit(n, n, i - 1, j - 1) for grp in groups for i in grp for j in grp]
    actual = span_dim(space.a_parts)
    extra = []
    blocks = set((i, j) for grp in groups for i in grp for j in grp)
    span = Span([t.entries for t in space.a_parts], n * n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if (i, j) not in blocks and Matrix.unit(n, n, i - 1, j - 1).entries in span:
                extra.append((i, j))
    holds = same_span(space.a_parts, block_units)
    return BlockClaimReport(holds, len(block_units), actual, tuple(extra))


def is_lie_closed(mats) -> bool:
    """Pairwise commutators stay in the span."""
    if not mats:
        return True
    span = Span([m.entries for m in mats], len(mats[0].entries))
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if commutator(mats[i], mats[j]).entries not in span:
                return False
    return True


__all__ = [
    "DMSpan", "DerivationSpace", "SkewDerivationSpace", "BlockClaimReport", "SENDS_I_TO_J",
    "SENDS_J_TO_I", "block_claim", "derivation_space", "dm_span", "is_lie_closed",
    "leibniz_derivation_basis", "matching_orientations", "same_span", "satisfies_leibniz",
    "skew_derivation_space", "skew_intersection", "span_dim",
]
