"""Spanning-tree extraction and the exact baseline.

Kruskal over the combined neighbor + bridge edges produces the
approximate tree; a dense O(n^2) Prim gives the exact weight for
instances small enough to afford it. Tree weights are always full-
precision sums (math.fsum), so equal edge multisets report equal
weights bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .bridges import BridgeEdgeSet
from .errors import InternalError, UsageError
from .geometry import PointSet, _sqdist
from .neighbors import NeighborGraph

__all__ = [
    "WeightedEdge",
    "EdgeList",
    "SpanningTree",
    "UnionFind",
    "assemble_candidate_edges",
    "kruskal",
    "exact_mst_prim",
    "relative_error",
]


class WeightedEdge(NamedTuple):
    u: int
    v: int
    w: float


@dataclass(frozen=True)
class EdgeList:
    """Column-oriented edge sequence; iterating yields WeightedEdge."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.u, self.v, self.w):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.u.size

    def __iter__(self):
        for a, b, ww in zip(self.u, self.v, self.w):
            yield WeightedEdge(int(a), int(b), float(ww))

    @classmethod
    def coerce(cls, edges) -> "EdgeList":
        if isinstance(edges, cls):
            return edges
        rows = [(int(u), int(v), float(w)) for u, v, w in edges]
        if rows:
            u, v, w = (np.array(col) for col in zip(*rows))
        else:
            u = np.empty(0, dtype=np.int64)
            v = np.empty(0, dtype=np.int64)
            w = np.empty(0, dtype=np.float64)
        return cls(u=u.astype(np.int64), v=v.astype(np.int64), w=w.astype(np.float64))


@dataclass(frozen=True)
class SpanningTree:
    """n-1 weighted edges covering all n vertices, stored sorted by (u, v)."""

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    total_weight: float

    def __post_init__(self) -> None:
        if not (self.u.size == self.v.size == self.w.size == self.n - 1):
            raise InternalError(
                f"tree over {self.n} vertices has {self.u.size} edges"
            )
        check = math.fsum(self.w)
        if abs(check - self.total_weight) > 1e-9 * max(1.0, abs(check)):
            raise InternalError(
                f"stored weight {self.total_weight} != edge sum {check}"
            )
        for arr in (self.u, self.v, self.w):
            arr.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return self.u.size

    def iter_edges(self):
        for a, b, ww in zip(self.u, self.v, self.w):
            yield WeightedEdge(int(a), int(b), float(ww))


def _make_tree(n: int, us: np.ndarray, vs: np.ndarray, ws: np.ndarray) -> SpanningTree:
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    order = np.lexsort((hi, lo))
    lo, hi, ws = lo[order], hi[order], ws[order]
    return SpanningTree(n=n, u=lo, v=hi, w=ws, total_weight=math.fsum(ws))


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; False if already together."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def assemble_candidate_edges(g: NeighborGraph, bridges: BridgeEdgeSet) -> EdgeList:
    """Union of neighbor edges (made undirected) and bridges, deduplicated.

    Edges come out canonical (u < v); a pair present several times keeps
    its minimum weight.
    """
    n, k = g.neighbors.shape
    src = np.repeat(np.arange(n, dtype=np.int64), k)
    dst = g.neighbors.ravel().astype(np.int64)
    w = g.distances.ravel().astype(np.float64)
    if len(bridges) > 0:
        bu = np.fromiter((e.u for e in bridges), dtype=np.int64, count=len(bridges))
        bv = np.fromiter((e.v for e in bridges), dtype=np.int64, count=len(bridges))
        bw = np.fromiter((e.d for e in bridges), dtype=np.float64, count=len(bridges))
        src = np.concatenate([src, bu])
        dst = np.concatenate([dst, bv])
        w = np.concatenate([w, bw])
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    order = np.lexsort((w, hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    keep = np.empty(lo.size, dtype=bool)
    keep[0] = True
    keep[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    return EdgeList(u=lo[keep], v=hi[keep], w=w[keep])


def kruskal(n: int, edges) -> SpanningTree:
    """Minimum spanning tree by ascending-weight insertion.

    The scan order is the total order (w, u, v), so the edge selection is
    unique even under weight ties. Raises if the edges do not connect all
    n vertices.
    """
    el = EdgeList.coerce(edges)
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    if el.u.size:
        if el.u.min() < 0 or el.v.min() < 0 or el.u.max() >= n or el.v.max() >= n:
            raise UsageError("edge endpoint out of range")
        if np.any(el.u == el.v):
            raise UsageError("self-loops are not allowed")
    order = np.lexsort((el.v, el.u, el.w))
    uf = UnionFind(n)
    tu = np.empty(n - 1, dtype=np.int64)
    tv = np.empty(n - 1, dtype=np.int64)
    tw = np.empty(n - 1, dtype=np.float64)
    count = 0
    eu, ev, ew = el.u, el.v, el.w
    for idx in order:
        a = int(eu[idx])
        b = int(ev[idx])
        if uf.union(a, b):
            tu[count] = a
            tv[count] = b
            tw[count] = ew[idx]
            count += 1
            if count == n - 1:
                break
    if count < n - 1:
        raise InternalError(
            f"edge set leaves the graph in {n - count} components; "
            "expected a connected graph"
        )
    return _make_tree(n, tu, tv, tw)


@njit(cache=True)
def _prim_dense(data):
    n = data.shape[0]
    in_tree = np.zeros(n, dtype=np.uint8)
    best_d = np.full(n, np.inf)
    best_src = np.full(n, -1, dtype=np.int64)
    us = np.empty(n - 1, dtype=np.int64)
    vs = np.empty(n - 1, dtype=np.int64)
    ws = np.empty(n - 1, dtype=np.float64)
    in_tree[0] = 1
    cur = 0
    for step in range(n - 1):
        for j in range(n):
            if in_tree[j] == 0:
                d = _sqdist(data, cur, j)
                if d < best_d[j]:
                    best_d[j] = d
                    best_src[j] = cur
        pick = -1
        pd = np.inf
        for j in range(n):
            if in_tree[j] == 0 and best_d[j] < pd:
                pd = best_d[j]
                pick = j
        us[step] = best_src[pick]
        vs[step] = pick
        ws[step] = math.sqrt(pd)
        in_tree[pick] = 1
        cur = pick
    return us, vs, ws


def exact_mst_prim(x: PointSet) -> SpanningTree:
    """Exact Euclidean MST by dense Prim; O(n^2 d) time, O(n) memory.

    Practical up to a few tens of thousands of points; the caller gates n.
    """
    if x.n < 2:
        raise UsageError("exact MST needs at least 2 points")
    us, vs, ws = _prim_dense(x.data)
    return _make_tree(x.n, us, vs, ws)


def relative_error(w_approx: float, w_exact: float) -> float:
    """Excess weight of an approximation, as a fraction of the exact weight."""
    if w_exact <= 0:
        raise UsageError(f"exact weight must be positive, got {w_exact}")
    return (w_approx - w_exact) / w_exact
