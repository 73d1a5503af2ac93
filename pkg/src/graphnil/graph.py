"""Simple graphs and the neighbourhood preorder on their vertices.

Vertices are 1..n.  Edge order is significant: the k-th edge (1-based) is the
one whose bracket defines the central basis vector z_k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

COMPLETE = "complete"
EMPTY = "empty"


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DichotomyViolation(RuntimeError):
    """An equivalence class that is neither a clique nor edgeless."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError(f"vertex count must be at least 1, got {self.n}")
        norm = []
        seen = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise GraphFormatError(f"loop at vertex {i}")
            for v in (i, j):
                if not 1 <= v <= self.n:
                    raise GraphFormatError(f"vertex {v} out of range 1..{self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key[0]} {key[1]}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edge_index(self) -> dict:
        """Map (i, j) with i < j to the 0-based edge position."""
        return {e: a for a, e in enumerate(self.edges)}

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edge_set

    @property
    def _edge_set(self) -> frozenset:
        s = self.__dict__.get("_es")
        if s is None:
            s = frozenset(self.edges)
            object.__setattr__(self, "_es", s)
        return s

    def isolated(self) -> list:
        touched = {v for e in self.edges for v in e}
        return [v for v in self.vertices if v not in touched]


def parse_graph(text: str) -> Graph:
    """Parse "n" on the first content line, then one "i j" edge per line."""
    n = None
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"malformed line {raw.strip()!r}", lineno) from None
        if n is None:
            if len(nums) != 1:
                raise GraphFormatError("first line must hold the vertex count", lineno)
            n = nums[0]
            if n < 1:
                raise GraphFormatError(f"vertex count must be at least 1, got {n}", lineno)
            continue
        if len(nums) != 2:
            raise GraphFormatError(f"expected 'i j', got {raw.strip()!r}", lineno)
        i, j = nums
        if i == j:
            raise GraphFormatError(f"loop at vertex {i}", lineno)
        for v in (i, j):
            if not 1 <= v <= n:
                raise GraphFormatError(f"vertex {v} out of range 1..{n}", lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {i} {j} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append(key)
    if n is None:
        raise GraphFormatError("empty graph file")
    return Graph(n, tuple(edges))


def format_graph(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{i} {j}" for i, j in g.edges]) + "\n"


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(1, n + 1), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for g in graphs:
        edges.extend((i + off, j + off) for i, j in g.edges)
        off += g.n
    return Graph(off, tuple(edges))


def neighborhoods(g: Graph) -> tuple[dict, dict]:
    """Open and closed neighbourhoods, keyed by vertex."""
    open_ = {v: set() for v in g.vertices}
    for i, j in g.edges:
        open_[i].add(j)
        open_[j].add(i)
    closed = {v: frozenset(open_[v] | {v}) for v in g.vertices}
    return {v: frozenset(s) for v, s in open_.items()}, closed


def preceq(g: Graph, i: int, j: int, _nb=None) -> bool:
    """i precedes j iff the open neighbourhood of i lies in the closed one of j."""
    open_, closed = _nb or neighborhoods(g)
    return open_[i] <= closed[j]


def preceq_table(g: Graph) -> dict:
    nb = neighborhoods(g)
    return {(i, j): preceq(g, i, j, nb) for i in g.vertices for j in g.vertices}


@dataclass(frozen=True)
class ClassPartition:
    classes: tuple            # tuple of sorted vertex tuples, ordered by least vertex
    kinds: tuple              # COMPLETE or EMPTY per class
    order: frozenset = field(default_factory=frozenset)  # (a, b): class a strictly below class b

    def class_of(self, v: int) -> int:
        for k, c in enumerate(self.classes):
            if v in c:
                return k
        raise KeyError(v)


def equivalence_classes(g: Graph) -> ClassPartition:
    """Classes of mutual precedence, each tagged complete or edgeless.

    A singleton class counts as edgeless.  A class with both an edge and a
    non-edge raises DichotomyViolation; that is never expected to happen.
    """
    table = preceq_table(g)
    classes = []
    assigned = set()
    for v in g.vertices:
        if v in assigned:
            continue
        cls = tuple(w for w in g.vertices if table[v, w] and table[w, v])
        assigned.update(cls)
        classes.append(cls)
    kinds = []
    for cls in classes:
        pairs = list(combinations(cls, 2))
        adj = [g.adjacent(a, b) for a, b in pairs]
        if pairs and all(adj):
            kinds.append(COMPLETE)
        elif not any(adj):
            kinds.append(EMPTY)
        else:
            raise DichotomyViolation(f"class {cls} is neither complete nor edgeless")
    order = frozenset(
        (a, b)
        for a in range(len(classes))
        for b in range(len(classes))
        if a != b and table[classes[a][0], classes[b][0]]
    )
    return ClassPartition(tuple(classes), tuple(kinds), order)


@dataclass(frozen=True)
class ClusterInfo:
    is_cluster: bool
    isolated: tuple           # the class of isolated vertices, possibly empty
    cliques: tuple            # cliques on at least two vertices, ordered by least vertex
    witness: tuple | None     # an edge joining non-equivalent vertices

    @property
    def p(self) -> int:
        return len(self.cliques)


def is_cluster_graph(g: Graph) -> ClusterInfo:
    """Decide whether g is a disjoint union of complete graphs.

    Equivalently every edge joins equivalent vertices; the first edge that
    does not is returned as the witness.
    """
    nb = neighborhoods(g)
    for i, j in g.edges:
        if not (preceq(g, i, j, nb) and preceq(g, j, i, nb)):
            return ClusterInfo(False, (), (), (i, j))
    part = equivalence_classes(g)
    isolated = tuple(g.isolated())
    cliques = tuple(c for c, k in zip(part.classes, part.kinds) if k == COMPLETE)
    return ClusterInfo(True, isolated, cliques, None)


def clique_sizes(g: Graph) -> list:
    info = is_cluster_graph(g)
    if not info.is_cluster:
        raise ValueError("not a cluster graph")
    return [len(c) for c in info.cliques]


def edges_within(g: Graph, vertices: Iterable[int]) -> list:
    """0-based indices of edges with both ends in the given vertex set."""
    vs = set(vertices)
    return [a for a, (i, j) in enumerate(g.edges) if i in vs and j in vs]
