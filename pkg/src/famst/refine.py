"""Bridge refinement: local search over endpoint neighborhoods.

A bridge (u, v) can usually be shortened by swapping u for one of its
graph neighbors (which all sit in u's component) or v for one of v's.
One pass scans the u side first, then the v side against the updated u.
Passes repeat until nothing moves; strict-decrease updates over a finite
set of cross distances guarantee that happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from numba import njit

from .bridges import BridgeEdge, BridgeEdgeSet
from .components import ComponentLabeling, UndirectedGraph
from .errors import InternalError, UsageError
from .geometry import PointSet, _sqdist

__all__ = [
    "Change",
    "RefinementDelta",
    "RefinementReport",
    "refine_once",
    "refine_until_converged",
    "dedupe_bridges",
]


class Change(NamedTuple):
    old: BridgeEdge
    new: BridgeEdge


@dataclass(frozen=True)
class RefinementDelta:
    """Edges rewritten by one pass; every record strictly shortens its edge."""

    changes: tuple

    def __len__(self) -> int:
        return len(self.changes)


@dataclass(frozen=True)
class RefinementReport:
    rounds: int
    total_changes: int
    converged: bool


@njit(cache=True)
def _refine_edge(data, indptr, indices, u, v, d):
    """Best endpoint swap for one bridge: u side first, then v side."""
    best_u = u
    best_d = d
    for e in range(indptr[u], indptr[u + 1]):
        cand = indices[e]
        if cand == v:
            continue
        dd = math.sqrt(_sqdist(data, cand, v))
        if dd < best_d:
            best_d = dd
            best_u = cand
    best_v = v
    for e in range(indptr[v], indptr[v + 1]):
        cand = indices[e]
        if cand == u:
            continue
        dd = math.sqrt(_sqdist(data, best_u, cand))
        if dd < best_d:
            best_d = dd
            best_v = cand
    return best_u, best_v, best_d


def refine_once(
    x: PointSet,
    g: UndirectedGraph,
    labeling: ComponentLabeling,
    e: BridgeEdgeSet,
) -> tuple:
    """One refinement pass over every bridge, in stable input order.

    Neighbor lists in g never cross components, so every candidate swap
    keeps the edge between its original component pair; a cheap label
    check guards that assumption.
    """
    label = labeling.label
    data = x.data
    refined = []
    changes = []
    for edge in e.edges:
        if label[edge.u] != edge.ci or label[edge.v] != edge.cj:
            raise InternalError(
                f"bridge ({edge.u}, {edge.v}) tagged ({edge.ci}, {edge.cj}) but "
                f"labels are ({label[edge.u]}, {label[edge.v]})"
            )
        new_u, new_v, new_d = _refine_edge(
            data, g.indptr, g.indices, edge.u, edge.v, edge.d
        )
        if new_u == edge.u and new_v == edge.v:
            refined.append(edge)
            continue
        if label[new_u] != edge.ci or label[new_v] != edge.cj:
            raise InternalError(
                f"refinement moved bridge ({edge.u}, {edge.v}) out of its "
                f"component pair ({edge.ci}, {edge.cj})"
            )
        new_edge = BridgeEdge(
            u=int(new_u), v=int(new_v), d=float(new_d), ci=edge.ci, cj=edge.cj
        )
        refined.append(new_edge)
        changes.append(Change(old=edge, new=new_edge))
    return BridgeEdgeSet(edges=tuple(refined)), RefinementDelta(changes=tuple(changes))


def refine_until_converged(
    x: PointSet,
    g: UndirectedGraph,
    labeling: ComponentLabeling,
    e: BridgeEdgeSet,
    max_rounds: int = 100,
) -> tuple:
    """Run refinement passes until a pass changes nothing.

    Hitting max_rounds first is reported via converged=False, not raised.
    """
    if max_rounds < 1:
        raise UsageError(f"max_rounds must be >= 1, got {max_rounds}")
    current = e
    rounds = 0
    total = 0
    converged = False
    for _ in range(max_rounds):
        current, delta = refine_once(x, g, labeling, current)
        rounds += 1
        total += len(delta)
        if len(delta) == 0:
            converged = True
            break
    return current, RefinementReport(
        rounds=rounds, total_changes=total, converged=converged
    )


def dedupe_bridges(e: BridgeEdgeSet) -> BridgeEdgeSet:
    """Collapse bridges that converged onto the same endpoint pair.

    Keeps the minimum distance per unordered pair, at the position where
    the pair first appeared.
    """
    slot: dict = {}
    kept: list = []
    for edge in e.edges:
        key = (edge.u, edge.v) if edge.u < edge.v else (edge.v, edge.u)
        at = slot.get(key)
        if at is None:
            slot[key] = len(kept)
            kept.append(edge)
        elif edge.d < kept[at].d:
            kept[at] = edge
    return BridgeEdgeSet(edges=tuple(kept))
