"""Multigraph storage, component decomposition, and ordered-vector metrics.

Vertices are labelled 1..n. Edges are stored as parallel endpoint arrays,
so a repeated pair means a multi-edge and u == v is a self-loop. The degree
convention counts edge-ends: a self-loop contributes 2 to its vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _sparse_cc


class MultiGraph:
    """Immutable multigraph on vertex set {1, ..., n}."""

    __slots__ = ("n", "u", "v")

    def __init__(self, n: int, u, v):
        if n < 1:
            raise ValueError("vertex count must be positive")
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape or u.ndim != 1:
            raise ValueError("endpoint arrays must be 1-d and of equal length")
        if len(u) and (u.min() < 1 or v.min() < 1 or u.max() > n or v.max() > n):
            raise ValueError("edge endpoint out of range [1, n]")
        self.n = int(n)
        self.u = u
        self.v = v
        self.u.setflags(write=False)
        self.v.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return len(self.u)

    def degrees(self) -> np.ndarray:
        """Degree of each vertex; entry k is the degree of vertex k+1."""
        ends = np.concatenate([self.u, self.v])
        return np.bincount(ends, minlength=self.n + 1)[1:]

    def edge_pairs(self):
        """Iterate edges as (u, v) tuples, one per multiplicity."""
        return zip(self.u.tolist(), self.v.tolist())

    def __repr__(self):
        return f"MultiGraph(n={self.n}, edges={self.edge_count})"


def build_graph(n: int, edges) -> MultiGraph:
    """Construct a MultiGraph from an iterable of (u, v) pairs.

    Multiplicities are preserved exactly; self-loops are allowed.
    Raises ValueError for endpoints outside [1, n].
    """
    arr = np.asarray(list(edges), dtype=np.int64)
    if arr.size == 0:
        return MultiGraph(n, np.empty(0, np.int64), np.empty(0, np.int64))
    return MultiGraph(n, arr[:, 0], arr[:, 1])


class UnionFind:
    """Array-based disjoint sets with path halving and union by size.

    Used where components must be maintained incrementally (growing
    graphs); one-shot decompositions go through ``components`` instead.
    """

    def __init__(self, n: int):
        self.parent = list(range(n + 1))
        self.size = [1] * (n + 1)
        self.max_size = 1

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; returns False when already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        if self.size[ra] > self.max_size:
            self.max_size = self.size[ra]
        return True


@dataclass(frozen=True)
class ComponentDecomposition:
    """Ordered component statistics of a multigraph.

    Components are sorted by size descending, ties broken by the smallest
    vertex label they contain. ``surpluses[k]`` is edges - size + 1 of the
    k-th component, and ``reps[k]`` its smallest vertex label. ``n`` is the
    vertex count of the underlying graph (used to normalise
    susceptibilities even when isolated vertices were excluded).
    """

    sizes: np.ndarray
    surpluses: np.ndarray
    reps: np.ndarray
    n: int

    def __len__(self):
        return len(self.sizes)

    @property
    def entries(self):
        return list(zip(self.sizes.tolist(), self.surpluses.tolist()))

    @property
    def max_size(self) -> int:
        return int(self.sizes[0]) if len(self.sizes) else 0

    @property
    def second_size(self) -> int:
        return int(self.sizes[1]) if len(self.sizes) > 1 else 0

    @property
    def max_surplus(self) -> int:
        """Surplus of the largest component (0 for an empty decomposition)."""
        return int(self.surpluses[0]) if len(self.surpluses) else 0


def components(g: MultiGraph, include_isolated: bool = True) -> ComponentDecomposition:
    """Decompose a multigraph into connected components.

    A vertex whose degree is zero forms a size-1 surplus-0 component; set
    ``include_isolated=False`` to drop those. A vertex carrying only
    self-loops is not isolated: each self-loop adds 1 to the surplus.
    """
    n = g.n
    if g.edge_count:
        data = np.ones(g.edge_count, dtype=np.int8)
        adj = coo_matrix((data, (g.u - 1, g.v - 1)), shape=(n, n))
        ncomp, labels = _sparse_cc(adj, directed=False)
    else:
        ncomp, labels = n, np.arange(n)
    sizes = np.bincount(labels, minlength=ncomp)
    edge_counts = np.bincount(labels[g.u - 1], minlength=ncomp) if g.edge_count \
        else np.zeros(ncomp, dtype=np.int64)
    reps = np.full(ncomp, n + 1, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(1, n + 1))
    surpluses = edge_counts - sizes + 1
    if not include_isolated:
        keep = ~((sizes == 1) & (edge_counts == 0))
        sizes, surpluses, reps = sizes[keep], surpluses[keep], reps[keep]
    order = np.lexsort((reps, -sizes))
    return ComponentDecomposition(
        sizes=sizes[order].astype(np.int64),
        surpluses=surpluses[order].astype(np.int64),
        reps=reps[order],
        n=n,
    )


# ---------------------------------------------------------------------------
# Ordered-sequence metrics for component scaling limits.
# ---------------------------------------------------------------------------

def _pad_pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = max(len(x), len(y))
    if len(x) < m:
        x = np.concatenate([x, np.zeros(m - len(x))])
    if len(y) < m:
        y = np.concatenate([y, np.zeros(m - len(y))])
    return x, y


def l2_distance(x, y) -> float:
    """Euclidean distance between two nonincreasing sequences.

    Finite representations are implicitly padded with zeros.
    """
    a, b = _pad_pair(x, y)
    return float(np.sqrt(np.sum((a - b) ** 2)))


@dataclass(frozen=True)
class OrderedPairVector:
    """Size/mark pair sequence: x nonincreasing, equal-x ties sorted by y descending.

    Zero-size entries must carry zero marks. Trailing zeros are implicit.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=np.int64))
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have equal length")
        if np.any(np.diff(self.x) > 1e-15):
            raise ValueError("x must be nonincreasing")
        if np.any((self.x == 0) & (self.y != 0)):
            raise ValueError("zero sizes must carry zero marks")

    def __len__(self):
        return len(self.x)

    def pairs(self):
        return list(zip(self.x.tolist(), self.y.tolist()))


def ord_pairs(x, y) -> OrderedPairVector:
    """Order (x, y) pairs by x descending, ties by y descending."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    order = np.lexsort((-y, -x))
    return OrderedPairVector(x[order], y[order])


def u0_distance(a: OrderedPairVector, b: OrderedPairVector) -> float:
    """Distance combining the l2 gap of sizes with the l1 gap of size*mark products."""
    x1, x2 = _pad_pair(a.x, b.x)
    y1, y2 = _pad_pair(a.y, b.y)
    return float(np.sqrt(np.sum((x1 - x2) ** 2)) + np.sum(np.abs(x1 * y1 - x2 * y2)))


def component_vector(dec: ComponentDecomposition, size_scale: float = 1.0) -> OrderedPairVector:
    """Rescaled (size, surplus) vector of a decomposition, properly ordered."""
    return ord_pairs(dec.sizes * size_scale, dec.surpluses)


# ---------------------------------------------------------------------------
# Edge-list text format: header "<n> <edge count>", then one "u v" line per
# edge copy (1-indexed; repeated lines encode multiplicity).
# ---------------------------------------------------------------------------

def write_edge_list(g: MultiGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for a, b in zip(g.u.tolist(), g.v.tolist()):
            fh.write(f"{a} {b}\n")


def read_edge_list(path) -> MultiGraph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("edge list header must be '<n> <edge count>'")
        n, m = int(header[0]), int(header[1])
        u = np.empty(m, dtype=np.int64)
        v = np.empty(m, dtype=np.int64)
        for i in range(m):
            parts = fh.readline().split()
            u[i], v[i] = int(parts[0]), int(parts[1])
    return MultiGraph(n, u, v)
