"""Symmetrization of the neighbor graph and connected-component labeling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InternalError, UsageError
from .geometry import PointSet
from .neighbors import NeighborGraph

__all__ = ["UndirectedGraph", "ComponentLabeling", "symmetrize", "find_components"]


@dataclass(frozen=True)
class UndirectedGraph:
    """Undirected weighted graph in CSR form.

    Every edge {i, j} is stored twice (i->j and j->i) so adjacency(i) is a
    contiguous, id-sorted slice. No self-loops.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.indptr, self.indices, self.weights):
            arr.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return self.indices.size // 2

    def adjacency(self, v: int) -> np.ndarray:
        """Neighbor ids of v, ascending."""
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def adjacency_weights(self, v: int) -> np.ndarray:
        return self.weights[self.indptr[v] : self.indptr[v + 1]]

    def edge_arrays(self):
        """Each undirected edge once as (u, v, w) arrays with u < v."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        keep = src < self.indices
        return src[keep], self.indices[keep], self.weights[keep]

    @classmethod
    def from_edges(cls, n: int, u, v, w) -> "UndirectedGraph":
        """Build from parallel edge arrays; duplicates keep the min weight."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        w = np.asarray(w, dtype=np.float64)
        if not (u.shape == v.shape == w.shape) or u.ndim != 1:
            raise UsageError("edge arrays must be 1-D and equal length")
        if n < 1:
            raise UsageError(f"n must be >= 1, got {n}")
        if u.size:
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise UsageError("edge endpoint out of range")
            if np.any(u == v):
                raise UsageError("self-loops are not allowed")
        return _build_csr(n, u, v, w)

    def verify_weights(self, x: PointSet, rtol: float = 1e-9) -> None:
        """Debug check: every stored weight matches the point distance."""
        eu, ev, ew = self.edge_arrays()
        for a, b, w in zip(eu, ev, ew):
            true = x.distance(int(a), int(b))
            if abs(w - true) > rtol * max(1.0, true):
                raise InternalError(
                    f"edge ({a}, {b}) stored weight {w} but distance is {true}"
                )


def _build_csr(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> UndirectedGraph:
    """Canonicalize an edge list (dedupe, min weight) and lay out CSR."""
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    if lo.size:
        order = np.lexsort((w, hi, lo))
        lo, hi, w = lo[order], hi[order], w[order]
        first = np.empty(lo.size, dtype=bool)
        first[0] = True
        first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
        lo, hi, w = lo[first], hi[first], w[first]
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    dw = np.concatenate([w, w])
    order = np.lexsort((dst, src))
    src, dst, dw = src[order], dst[order], dw[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return UndirectedGraph(n=n, indptr=indptr, indices=dst, weights=dw)


def symmetrize(g_in: NeighborGraph) -> UndirectedGraph:
    """Drop edge direction: {i, j} exists when either endpoint listed the other.

    Weights are carried over from the neighbor distances rather than
    recomputed; UndirectedGraph.verify_weights re-derives them on demand.
    """
    n, k = g_in.neighbors.shape
    src = np.repeat(np.arange(n, dtype=np.int64), k)
    dst = g_in.neighbors.ravel().astype(np.int64)
    w = g_in.distances.ravel().astype(np.float64)
    return _build_csr(n, src, dst, w)


@njit(cache=True)
def _dfs_labels(indptr, indices, n):
    label = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    t = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = t
        stack[0] = s
        top = 1
        while top > 0:
            top -= 1
            v = stack[top]
            for e in range(indptr[v], indptr[v + 1]):
                u = indices[e]
                if label[u] < 0:
                    label[u] = t  # mark on push so nothing enters twice
                    stack[top] = u
                    top += 1
        t += 1
    return label, t


@dataclass(frozen=True)
class ComponentLabeling:
    """Partition of the vertex set into connected components.

    Component i is the one containing the smallest vertex id not covered
    by components 0..i-1; vertex lists are ascending. label[v] gives the
    component index of v.
    """

    label: np.ndarray
    components: list
    t: int

    def __post_init__(self) -> None:
        self.label.setflags(write=False)
        for c in self.components:
            c.setflags(write=False)

    @property
    def n(self) -> int:
        return self.label.size

    def sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.components], dtype=np.int64)


def find_components(g: UndirectedGraph) -> ComponentLabeling:
    """Label connected components by iterative depth-first search.

    The stack is an explicit array, so million-vertex paths are fine.
    Labels come out ordered by each component's smallest vertex id.
    """
    label, t = _dfs_labels(g.indptr, g.indices, g.n)
    counts = np.bincount(label, minlength=t)
    order = np.argsort(label, kind="stable")
    components = np.split(order, np.cumsum(counts)[:-1])
    return ComponentLabeling(label=label, components=components, t=t)
