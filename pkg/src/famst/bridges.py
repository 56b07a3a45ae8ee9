"""Connectivity completion: sampled short edges between component pairs.

Each unordered pair of components gets its own candidate pool of random
cross edges (squared budget), from which the shortest few are kept. Pools
are seeded per pair, so the result does not depend on the order in which
pairs are processed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .components import ComponentLabeling
from .errors import UsageError
from .geometry import PointSet, _sqdist

__all__ = ["BridgeEdge", "BridgeEdgeSet", "sample_bridges", "pair_count"]


class BridgeEdge(NamedTuple):
    """Inter-component edge; ci < cj is the canonical orientation."""

    u: int
    v: int
    d: float
    ci: int
    cj: int


@dataclass(frozen=True)
class BridgeEdgeSet:
    edges: tuple

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def total_distance(self) -> float:
        return math.fsum(e.d for e in self.edges)


def pair_count(t: int) -> int:
    """Number of unordered component pairs."""
    return t * (t - 1) // 2


@njit(cache=True)
def _cross_distances(data, uu, vv):
    out = np.empty(uu.size, dtype=np.float64)
    for i in range(uu.size):
        out[i] = math.sqrt(_sqdist(data, uu[i], vv[i]))
    return out


def _dedupe_pairs(uu: np.ndarray, vv: np.ndarray):
    order = np.lexsort((vv, uu))
    uu, vv = uu[order], vv[order]
    keep = np.empty(uu.size, dtype=bool)
    keep[0] = True
    keep[1:] = (uu[1:] != uu[:-1]) | (vv[1:] != vv[:-1])
    return uu[keep], vv[keep]


def sample_bridges(
    x: PointSet,
    labeling: ComponentLabeling,
    n_bridges: int,
    seed: int,
    warn_components: int = 1000,
) -> BridgeEdgeSet:
    """Draw up to n_bridges short edges between every pair of components.

    Per pair, n_bridges**2 endpoint pairs are sampled uniformly with
    replacement, deduplicated, and the shortest n_bridges kept (ties
    broken by endpoint ids). Pairs small enough to enumerate outright
    skip sampling, so the single shortest bridge is never missed there.

    Sampling for pair (i, j) is seeded by (seed, i, j) alone, which keeps
    the output independent of processing order and worker count.
    """
    if n_bridges < 1:
        raise UsageError(f"n_bridges must be >= 1, got {n_bridges}")
    t = labeling.t
    if t > warn_components:
        warnings.warn(
            f"ANN graph has {t} components; bridging cost grows with its "
            "square. A larger k would reduce the component count.",
            RuntimeWarning,
            stacklevel=2,
        )
    if t == 1:
        return BridgeEdgeSet(edges=())

    data = x.data
    seed64 = seed & 0xFFFFFFFFFFFFFFFF
    budget = n_bridges * n_bridges
    out = []
    for i in range(t):
        comp_i = labeling.components[i]
        for j in range(i + 1, t):
            comp_j = labeling.components[j]
            if comp_i.size * comp_j.size <= budget:
                uu = np.repeat(comp_i, comp_j.size)
                vv = np.tile(comp_j, comp_i.size)
            else:
                rng = np.random.default_rng(np.random.SeedSequence((seed64, i, j)))
                uu = comp_i[rng.integers(0, comp_i.size, budget)]
                vv = comp_j[rng.integers(0, comp_j.size, budget)]
            uu, vv = _dedupe_pairs(uu, vv)
            dd = _cross_distances(data, uu, vv)
            order = np.lexsort((vv, uu, dd))[: min(n_bridges, dd.size)]
            for idx in order:
                out.append(
                    BridgeEdge(
                        u=int(uu[idx]), v=int(vv[idx]), d=float(dd[idx]), ci=i, cj=j
                    )
                )
    return BridgeEdgeSet(edges=tuple(out))
