"""The two-step nilpotent Lie algebra attached to a graph.

Coordinates are always taken in the construction basis e_1..e_n, z_1..z_m
(indices 0..n-1 and n..n+m-1).  For i < j, [e_i, e_j] = z_a when the a-th
edge is {i, j}, and all z_a are central.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph
from .linalg import Matrix, nullspace_sparse, rank, span_basis, unit


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: Matrix  # columns are basis vectors

    def __post_init__(self):
        if self.basis.nrows != self.ambient:
            raise ValueError("basis rows must match the ambient dimension")
        if rank(self.basis) != self.basis.ncols:
            raise ValueError("basis vectors are linearly dependent")

    @classmethod
    def span(cls, ambient: int, vectors) -> "Subspace":
        return cls(ambient, Matrix.from_columns(list(vectors), nrows=ambient))

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def vectors(self) -> list:
        return self.basis.columns()

    def contains(self, v) -> bool:
        cols = self.vectors() + [tuple(v)]
        return rank(Matrix.from_columns(cols, nrows=self.ambient)) == self.dim

    def same_as(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        both = Matrix.from_columns(self.vectors() + other.vectors(), nrows=self.ambient)
        return rank(both) == self.dim


@dataclass(frozen=True)
class GraphLieAlgebra:
    graph: Graph

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def dim(self) -> int:
        return self.graph.n + self.graph.m

    @property
    def labels(self) -> list:
        return [f"e{i}" for i in range(1, self.n + 1)] + [f"z{a}" for a in range(1, self.m + 1)]

    @property
    def structure(self) -> dict:
        """(i, j) -> a with 0-based i < j < n, meaning [e_i, e_j] = z_a."""
        return {(i - 1, j - 1): a for a, (i, j) in enumerate(self.graph.edges)}

    def bracket(self, x, y) -> tuple:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError(f"vectors must have length {self.dim}")
        out = [Fraction(0)] * self.dim
        for a, (i, j) in enumerate(self.graph.edges):
            i -= 1
            j -= 1
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                out[self.n + a] = c
        return tuple(out)

    def basis_bracket(self, p: int, r: int) -> dict:
        """Sparse bracket of basis vectors p and r: {index: coefficient}."""
        if p < self.n and r < self.n and p != r:
            key = (min(p, r), max(p, r))
            a = self.structure.get(key)
            if a is not None:
                return {self.n + a: 1 if p < r else -1}
        return {}

    def bracket_table(self) -> list:
        """Rows (i, j, a) with 1-based labels, in edge order."""
        return [(i, j, a + 1) for a, (i, j) in enumerate(self.graph.edges)]


def build_algebra(g: Graph) -> GraphLieAlgebra:
    return GraphLieAlgebra(g)


def derived_subalgebra(alg: GraphLieAlgebra) -> Subspace:
    """Span of all brackets, read off from the image of the bracket map."""
    d = alg.dim
    vecs = []
    for p in range(d):
        for r in range(p + 1, d):
            br = alg.basis_bracket(p, r)
            if br:
                v = [Fraction(0)] * d
                for k, c in br.items():
                    v[k] = Fraction(c)
                vecs.append(tuple(v))
    if not vecs:
        return Subspace(d, Matrix.from_columns([], nrows=d))
    return Subspace.span(d, span_basis(vecs))


def center(alg: GraphLieAlgebra) -> Subspace:
    """Kernel of x -> ([x, b_0], ..., [x, b_{d-1}]), computed by elimination."""
    d = alg.dim
    rows = []
    for r in range(d):
        eqs = {}
        for p in range(d):
            for k, c in alg.basis_bracket(p, r).items():
                eqs.setdefault(k, {})[p] = Fraction(c)
        rows.extend(eqs.values())
    kernel = nullspace_sparse(rows, d)
    return Subspace.span(d, kernel)


def z_coords(alg: GraphLieAlgebra, v) -> tuple:
    return tuple(v[alg.n:])


def a_coords(alg: GraphLieAlgebra, v) -> tuple:
    return tuple(v[: alg.n])


def basis_vector(alg: GraphLieAlgebra, label: str) -> tuple:
    kind, idx = label[0], int(label[1:])
    if kind == "e":
        return unit(alg.dim, idx - 1)
    if kind == "z":
        return unit(alg.dim, alg.n + idx - 1)
    raise ValueError(f"unknown basis label {label!r}")
