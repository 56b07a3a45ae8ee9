"""Shared test utilities: independent oracles and instance builders.

Everything here that checks a library result recomputes it from scratch
with a different method (naive loops, textbook formulas), so a bug in the
package cannot hide behind its own code paths.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from famst import PointSet


# --- independent distance / kNN oracles ------------------------------------


def naive_distance(a, b) -> float:
    """Plain sum-of-squares loop, no numpy reductions."""
    acc = 0.0
    for x, y in zip(a, b):
        acc += (float(x) - float(y)) ** 2
    return math.sqrt(acc)


def naive_knn_ids(data, k: int) -> np.ndarray:
    """Exact kNN rows via a full broadcast distance matrix per point."""
    x = np.asarray(data, dtype=np.float64)
    n = x.shape[0]
    out = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        d = np.sqrt(((x - x[i]) ** 2).sum(axis=1))
        d[i] = np.inf
        out[i] = np.argsort(d, kind="stable")[:k]
    return out


# --- independent union-find ------------------------------------------------


def uf_labels(n: int, edges) -> list:
    """Root id per vertex after uniting every edge; plain dict-free DSU."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        ra, rb = find(int(u)), find(int(v))
        if ra != rb:
            parent[ra] = rb
    return [find(i) for i in range(n)]


def same_partition(a, b) -> bool:
    """True when two labelings induce the same partition (any label names)."""
    fwd: dict = {}
    rev: dict = {}
    for x, y in zip(a, b):
        if fwd.setdefault(x, y) != y:
            return False
        if rev.setdefault(y, x) != x:
            return False
    return True


# --- tree validity ----------------------------------------------------------


def assert_valid_tree(tree, n: int | None = None) -> None:
    """n-1 edges, no cycle, one component, weight matches the edge sum."""
    if n is None:
        n = tree.n
    assert tree.u.size == n - 1, f"expected {n - 1} edges, got {tree.u.size}"
    assert tree.v.size == n - 1 and tree.w.size == n - 1
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b, w in zip(tree.u, tree.v, tree.w):
        a, b = int(a), int(b)
        assert 0 <= a < n and 0 <= b < n and a < b, f"bad edge ({a}, {b})"
        assert float(w) >= 0.0
        ra, rb = find(a), find(b)
        assert ra != rb, f"edge ({a}, {b}) closes a cycle"
        parent[ra] = rb
    assert len({find(i) for i in range(n)}) == 1, "tree is not connected"
    total = math.fsum(float(w) for w in tree.w)
    assert abs(total - tree.total_weight) <= 1e-9 * max(1.0, abs(total))


# --- clustered multi-component instances -------------------------------------


def clustered_points(sizes, d: int, seed: int, spread: float = 1.0,
                     separation: float = 500.0) -> PointSet:
    """Well-separated Gaussian clusters with the given sizes, ids shuffled.

    With k < min(sizes) the exact kNN graph cannot cross clusters, so the
    component count equals len(sizes).
    """
    rng = np.random.default_rng(seed)
    blocks = []
    for i, size in enumerate(sizes):
        center = np.zeros(d)
        center[0] = i * separation * math.sqrt(d)
        blocks.append(center + rng.normal(0.0, spread, (size, d)))
    arr = np.vstack(blocks)
    return PointSet(arr[rng.permutation(arr.shape[0])])


# --- exhaustive spanning-tree minimum ----------------------------------------
#
# Every labeled tree on n vertices corresponds to exactly one length-(n-2)
# sequence over the vertex ids, so iterating all sequences visits all
# n^(n-2) trees. The fast path decodes a sequence to its tree weight in
# linear time; py_decode_tree is the slow textbook decode used to
# cross-check the fast one.


def py_decode_tree(seq, n: int) -> list:
    """Textbook sequence-to-tree decode, O(n^2); returns the edge list."""
    seq = [int(v) for v in seq]
    assert len(seq) == n - 2
    alive = set(range(n))
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in alive if degree[u] == 1)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[leaf] -= 1
        degree[v] -= 1
        alive.discard(leaf)
    last = sorted(u for u in alive if degree[u] == 1)
    assert len(last) == 2
    edges.append((last[0], last[1]))
    return edges


@njit(cache=True)
def _decode_weight(wmat, seq, degree):
    n = wmat.shape[0]
    m = seq.size
    for i in range(n):
        degree[i] = 1
    for i in range(m):
        degree[seq[i]] += 1
    w = 0.0
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for i in range(m):
        v = seq[i]
        w += wmat[leaf, v]
        degree[v] -= 1
        if v < ptr and degree[v] == 1:
            leaf = v
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    return w + wmat[leaf, n - 1]


@njit(cache=True)
def enum_min_tree_weight(wmat):
    """(min weight, tree count) over every labeled spanning tree."""
    n = wmat.shape[0]
    if n == 2:
        return wmat[0, 1], 1
    m = n - 2
    seq = np.zeros(m, dtype=np.int64)
    degree = np.empty(n, dtype=np.int64)
    best = np.inf
    count = 0
    while True:
        w = _decode_weight(wmat, seq, degree)
        if w < best:
            best = w
        count += 1
        pos = m - 1
        while pos >= 0:
            seq[pos] += 1
            if seq[pos] < n:
                break
            seq[pos] = 0
            pos -= 1
        if pos < 0:
            break
    return best, count


def weight_matrix(points: PointSet) -> np.ndarray:
    """Dense pairwise distances via the naive per-pair loop."""
    n = points.n
    data = points.data
    wmat = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            wmat[i, j] = wmat[j, i] = naive_distance(data[i], data[j])
    return wmat


def assert_mst_certificate(tree, wmat, rtol: float = 1e-12) -> None:
    """Minimality proof: no non-tree edge beats the heaviest edge on the
    tree path joining its endpoints."""
    n = wmat.shape[0]
    adj: list = [[] for _ in range(n)]
    for a, b, w in zip(tree.u, tree.v, tree.w):
        adj[int(a)].append((int(b), float(w)))
        adj[int(b)].append((int(a), float(w)))
    for s in range(n):
        path_max = [-1.0] * n
        path_max[s] = 0.0
        stack = [s]
        while stack:
            v = stack.pop()
            for u, w in adj[v]:
                if path_max[u] < 0.0:
                    path_max[u] = max(path_max[v], w)
                    stack.append(u)
        for t in range(s + 1, n):
            assert wmat[s, t] >= path_max[t] * (1.0 - rtol) - 1e-15, (
                f"non-tree edge ({s}, {t}) weighs {wmat[s, t]}, below the "
                f"tree path maximum {path_max[t]}"
            )
