"""k-nearest-neighbor graph construction.

Two interchangeable builders produce the same ``NeighborGraph`` shape: a
blocked brute-force scan that is exact and serves as the quality oracle,
and an NN-Descent builder for large inputs. Both emit rows sorted by
(distance, id) so equal inputs give byte-equal outputs.

The NN-Descent here is the classic formulation: seed every point with
random neighbors, then repeatedly let each point introduce its neighbors
to each other, keeping the k best acquaintances found so far. Sampling
is driven by a counter-based generator owned by this module, so results
depend only on the seed, never on global RNG state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.spatial.distance import cdist

from .errors import UsageError
from .geometry import PointSet, _sqdist

__all__ = ["NeighborGraph", "AnnParams", "build_knn_exact", "build_knn_descent", "recall"]


@dataclass(frozen=True)
class NeighborGraph:
    """Per-point top-k neighbors.

    neighbors[i] holds k distinct ids (never i itself), sorted ascending
    by distance with ties broken by ascending id; distances[i] holds the
    matching Euclidean distances.
    """

    neighbors: np.ndarray
    distances: np.ndarray
    k: int

    def __post_init__(self) -> None:
        ids, d = self.neighbors, self.distances
        if ids.ndim != 2 or d.shape != ids.shape:
            raise UsageError(
                f"neighbor/distance shape mismatch: {ids.shape} vs {d.shape}"
            )
        if ids.shape[1] != self.k:
            raise UsageError(f"k={self.k} does not match row width {ids.shape[1]}")
        ids.setflags(write=False)
        d.setflags(write=False)

    @property
    def n(self) -> int:
        return self.neighbors.shape[0]


@dataclass(frozen=True)
class AnnParams:
    """NN-Descent knobs.

    rho scales the per-round candidate sample, delta sets the early-out
    threshold (stop once updates fall to delta*n*k), max_iters caps the
    round count, and seed fixes the sampling sequence.
    """

    rho: float = 0.5
    delta: float = 0.001
    max_iters: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 < self.rho <= 1.0):
            raise UsageError(f"rho must be in (0, 1], got {self.rho}")
        if self.delta < 0.0:
            raise UsageError(f"delta must be >= 0, got {self.delta}")
        if self.max_iters < 1:
            raise UsageError(f"max_iters must be >= 1, got {self.max_iters}")


def _check_k(n: int, k: int) -> None:
    if k < 1 or k > n - 1:
        raise UsageError(f"k must satisfy 1 <= k <= n-1, got k={k}, n={n}")


def _canonical_rows(ids: np.ndarray, true_d: np.ndarray):
    # Row-wise sort by (distance, id); lexsort's last key is primary.
    order = np.lexsort((ids, true_d))
    return (
        np.take_along_axis(ids, order, axis=1),
        np.take_along_axis(true_d, order, axis=1),
    )


def build_knn_exact(x: PointSet, k: int, block_rows: int = 0) -> NeighborGraph:
    """Exact k-nearest neighbors by blocked full scan.

    O(n^2 d) time but only O(block * n) memory; fine up to a few tens of
    thousands of points. Ties at equal distance go to the smaller id.
    """
    n = x.n
    _check_k(n, k)
    work = np.ascontiguousarray(x.data, dtype=np.float64)
    if block_rows <= 0:
        block_rows = max(1, min(n, 16_777_216 // n))
    ids = np.empty((n, k), dtype=np.int64)
    dsq = np.empty((n, k), dtype=np.float64)
    for start in range(0, n, block_rows):
        stop = min(start + block_rows, n)
        sq = cdist(work[start:stop], work, "sqeuclidean")
        rows = np.arange(start, stop)
        sq[rows - start, rows] = np.inf
        # stable sort on distance leaves ties in ascending-id order
        order = np.argsort(sq, axis=1, kind="stable")[:, :k]
        ids[start:stop] = order
        dsq[start:stop] = np.take_along_axis(sq, order, axis=1)
    ids, true_d = _canonical_rows(ids, np.sqrt(dsq))
    return NeighborGraph(neighbors=ids, distances=true_d, k=k)


# --- NN-Descent kernels ---------------------------------------------------
#
# All randomness flows through a splitmix64 counter held in a one-element
# uint64 array, threaded through every kernel in call order.

_U64 = np.uint64


@njit(cache=True)
def _next_u64(state):
    state[0] += _U64(0x9E3779B97F4A7C15)
    z = state[0]
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


@njit(cache=True)
def _heap_push(heap_d, heap_i, heap_f, row, d, idx, flag):
    """Insert (d, idx) into row's bounded max-heap; 1 if accepted, else 0."""
    if d >= heap_d[row, 0]:
        return 0
    k = heap_i.shape[1]
    for m in range(k):
        if heap_i[row, m] == idx:
            return 0
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        if left >= k:
            break
        big = left
        if right < k and heap_d[row, right] > heap_d[row, left]:
            big = right
        if heap_d[row, big] > d:
            heap_d[row, i] = heap_d[row, big]
            heap_i[row, i] = heap_i[row, big]
            heap_f[row, i] = heap_f[row, big]
            i = big
        else:
            break
    heap_d[row, i] = d
    heap_i[row, i] = idx
    heap_f[row, i] = flag
    return 1


@njit(cache=True)
def _init_random(data, heap_d, heap_i, heap_f, state):
    n = data.shape[0]
    k = heap_i.shape[1]
    for i in range(n):
        if 2 * k >= n:
            # dense regime: comparing against everyone is cheaper than
            # rejection-sampling most of the id space
            for j in range(n):
                if j != i:
                    _heap_push(heap_d, heap_i, heap_f, i, _sqdist(data, i, j), j, 1)
        else:
            cnt = 0
            while cnt < k:
                j = np.int64(_next_u64(state) % _U64(n))
                if j == i:
                    continue
                d = _sqdist(data, i, j)
                cnt += _heap_push(heap_d, heap_i, heap_f, i, d, j, 1)


@njit(cache=True)
def _reservoir_add(cand, seen, row, val, state):
    cap = cand.shape[1]
    c = seen[row]
    if c < cap:
        cand[row, c] = val
    else:
        r = np.int64(_next_u64(state) % _U64(c + 1))
        if r < cap:
            cand[row, r] = val
    seen[row] = c + 1


@njit(cache=True)
def _build_candidates(heap_i, heap_f, cap, state):
    """Sample per-vertex new/old candidate lists, both graph directions.

    A flagged (fresh) entry that lands in its owner's new list is
    unflagged so later rounds stop re-joining it.
    """
    n, k = heap_i.shape
    new_cand = np.full((n, cap), -1, dtype=np.int64)
    old_cand = np.full((n, cap), -1, dtype=np.int64)
    new_seen = np.zeros(n, dtype=np.int64)
    old_seen = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for m in range(k):
            j = heap_i[i, m]
            if j < 0:
                continue
            if heap_f[i, m] == 1:
                _reservoir_add(new_cand, new_seen, i, j, state)
                _reservoir_add(new_cand, new_seen, j, i, state)
            else:
                _reservoir_add(old_cand, old_seen, i, j, state)
                _reservoir_add(old_cand, old_seen, j, i, state)
    for i in range(n):
        for m in range(k):
            if heap_f[i, m] == 0:
                continue
            j = heap_i[i, m]
            for a in range(cap):
                if new_cand[i, a] == j:
                    heap_f[i, m] = 0
                    break
    return new_cand, old_cand


@njit(cache=True)
def _local_join(data, heap_d, heap_i, heap_f, new_cand, old_cand):
    n = data.shape[0]
    cap = new_cand.shape[1]
    pushed = 0
    for i in range(n):
        for a in range(cap):
            p = new_cand[i, a]
            if p < 0:
                continue
            for b in range(a + 1, cap):
                q = new_cand[i, b]
                if q < 0 or q == p:
                    continue
                d = _sqdist(data, p, q)
                pushed += _heap_push(heap_d, heap_i, heap_f, p, d, q, 1)
                pushed += _heap_push(heap_d, heap_i, heap_f, q, d, p, 1)
            for b in range(cap):
                q = old_cand[i, b]
                if q < 0 or q == p:
                    continue
                d = _sqdist(data, p, q)
                pushed += _heap_push(heap_d, heap_i, heap_f, p, d, q, 1)
                pushed += _heap_push(heap_d, heap_i, heap_f, q, d, p, 1)
    return pushed


def build_knn_descent(x: PointSet, k: int, params: AnnParams | None = None) -> NeighborGraph:
    """Approximate k-nearest neighbors via NN-Descent.

    Deterministic for a fixed (params.seed, worker count); this
    implementation always runs one worker. With k = n-1 the candidate
    pool saturates and the output matches :func:`build_knn_exact`.
    """
    if params is None:
        params = AnnParams()
    if not isinstance(params, AnnParams):
        raise UsageError(f"params must be AnnParams, got {type(params).__name__}")
    n = x.n
    if n < 2:
        raise UsageError("NN-Descent needs at least 2 points")
    _check_k(n, k)

    data = x.data
    state = np.array([params.seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    heap_d = np.full((n, k), np.inf, dtype=np.float64)
    heap_i = np.full((n, k), -1, dtype=np.int64)
    heap_f = np.zeros((n, k), dtype=np.uint8)
    _init_random(data, heap_d, heap_i, heap_f, state)

    # candidate lists hold forward and reverse samples, rho of k from each
    cap = max(1, 2 * int(math.ceil(params.rho * k)))
    stop_below = params.delta * n * k
    for _ in range(params.max_iters):
        new_cand, old_cand = _build_candidates(heap_i, heap_f, cap, state)
        pushed = _local_join(data, heap_d, heap_i, heap_f, new_cand, old_cand)
        if pushed <= stop_below:
            break

    ids, true_d = _canonical_rows(heap_i, np.sqrt(heap_d))
    return NeighborGraph(neighbors=ids, distances=true_d, k=k)


def recall(approx: NeighborGraph, exact: NeighborGraph) -> float:
    """Mean per-row overlap between an approximate graph and the truth."""
    if approx.neighbors.shape != exact.neighbors.shape:
        raise UsageError(
            f"graph shapes differ: {approx.neighbors.shape} vs {exact.neighbors.shape}"
        )
    n, k = approx.neighbors.shape
    hits = 0
    for i in range(n):
        hits += np.intersect1d(approx.neighbors[i], exact.neighbors[i]).size
    return hits / (n * k)
