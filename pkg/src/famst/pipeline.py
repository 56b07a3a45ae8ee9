"""End-to-end orchestration: neighbors, components, bridges, refinement, tree.

famst() runs the full pipeline and reports per-phase wall-clock times;
evaluate() additionally scores the result against the exact baseline when
the instance is small enough to afford one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from time import perf_counter

from .bridges import sample_bridges
from .components import find_components, symmetrize
from .errors import UsageError
from .geometry import PointSet
from .mst import (
    SpanningTree,
    assemble_candidate_edges,
    exact_mst_prim,
    kruskal,
    relative_error,
)
from .neighbors import AnnParams, build_knn_descent, build_knn_exact
from .refine import dedupe_bridges, refine_until_converged

__all__ = ["FamstConfig", "RunStats", "famst", "evaluate"]

_BACKENDS = ("descent", "exact")


@dataclass(frozen=True)
class FamstConfig:
    """Pipeline knobs; defaults follow the recommended k=10, 5 bridges."""

    k: int = 10
    n_bridges: int = 5
    seed: int = 0
    backend: str = "descent"
    ann: AnnParams | None = None
    max_rounds: int = 100

    def __post_init__(self) -> None:
        if self.k < 1:
            raise UsageError(f"k must be >= 1, got {self.k}")
        if self.n_bridges < 1:
            raise UsageError(f"n_bridges must be >= 1, got {self.n_bridges}")
        if self.backend not in _BACKENDS:
            raise UsageError(
                f"backend must be one of {_BACKENDS}, got {self.backend!r}"
            )
        if self.max_rounds < 1:
            raise UsageError(f"max_rounds must be >= 1, got {self.max_rounds}")


@dataclass(frozen=True)
class RunStats:
    """Per-run shape, outcome, and phase timing record."""

    n: int
    d: int
    k: int
    n_bridges: int
    t: int
    r: int
    ann_seconds: float
    connect_seconds: float
    refine_seconds: float
    mst_seconds: float
    total_seconds: float
    total_weight: float
    relative_error: float | None = None

    def to_dict(self) -> dict:
        """Stable-order mapping for serialization; the bridge-count key is
        spelled "lambda" on disk."""
        out = {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "lambda": self.n_bridges,
            "t": self.t,
            "r": self.r,
            "ann_seconds": self.ann_seconds,
            "connect_seconds": self.connect_seconds,
            "refine_seconds": self.refine_seconds,
            "mst_seconds": self.mst_seconds,
            "total_seconds": self.total_seconds,
            "total_weight": self.total_weight,
        }
        if self.relative_error is not None:
            out["relative_error"] = self.relative_error
        return out


def famst(x: PointSet, cfg: FamstConfig) -> tuple:
    """Approximate MST of x: (SpanningTree, RunStats).

    Deterministic for a fixed (cfg, worker count). With one component the
    bridging and refinement phases have nothing to do and cost ~nothing.
    """
    if not isinstance(cfg, FamstConfig):
        raise UsageError(f"cfg must be FamstConfig, got {type(cfg).__name__}")
    n = x.n
    if n < 2:
        raise UsageError("need at least 2 points to build a tree")
    if cfg.k > n - 1:
        raise UsageError(f"k={cfg.k} too large for n={n}; need k <= n-1")
    if cfg.n_bridges > cfg.k:
        warnings.warn(
            "more bridges per component pair than neighbors per point; "
            "this adds cost without helping quality — keep the bridge "
            "count at or below k",
            RuntimeWarning,
            stacklevel=2,
        )

    t_start = perf_counter()

    t0 = perf_counter()
    if cfg.backend == "exact":
        g = build_knn_exact(x, cfg.k)
    else:
        params = cfg.ann if cfg.ann is not None else AnnParams(seed=cfg.seed)
        g = build_knn_descent(x, cfg.k, params)
    ann_seconds = perf_counter() - t0

    t0 = perf_counter()
    ug = symmetrize(g)
    labeling = find_components(ug)
    bridges = sample_bridges(x, labeling, cfg.n_bridges, cfg.seed)
    connect_seconds = perf_counter() - t0

    t0 = perf_counter()
    refined, report = refine_until_converged(x, ug, labeling, bridges, cfg.max_rounds)
    final_bridges = dedupe_bridges(refined)
    refine_seconds = perf_counter() - t0

    t0 = perf_counter()
    candidates = assemble_candidate_edges(g, final_bridges)
    tree = kruskal(n, candidates)
    mst_seconds = perf_counter() - t0

    stats = RunStats(
        n=n,
        d=x.d,
        k=cfg.k,
        n_bridges=cfg.n_bridges,
        t=labeling.t,
        r=report.rounds,
        ann_seconds=ann_seconds,
        connect_seconds=connect_seconds,
        refine_seconds=refine_seconds,
        mst_seconds=mst_seconds,
        total_seconds=perf_counter() - t_start,
        total_weight=tree.total_weight,
    )
    return tree, stats


def evaluate(
    x: PointSet,
    cfg: FamstConfig,
    exact: SpanningTree | None = None,
    exact_gate: int = 20_000,
    require_error: bool = False,
) -> RunStats:
    """Run the pipeline and attach the relative error when possible.

    The exact weight comes from the supplied tree, or from the O(n^2)
    baseline when n is within exact_gate. Above the gate with no tree
    supplied, the error is omitted (or raised, with require_error).
    """
    tree, stats = famst(x, cfg)
    if exact is not None:
        w_exact = exact.total_weight
    elif x.n <= exact_gate:
        w_exact = exact_mst_prim(x).total_weight
    elif require_error:
        raise UsageError(
            f"n={x.n} exceeds the exact-baseline gate ({exact_gate}) and no "
            "exact tree was supplied"
        )
    else:
        return stats
    return replace(stats, relative_error=relative_error(tree.total_weight, w_exact))
