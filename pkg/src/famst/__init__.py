"""Fast approximate minimum spanning trees for large point sets.

The pipeline builds a k-nearest-neighbor graph, ties its connected
components together with sampled short edges, locally refines those
edges, and extracts the tree with Kruskal. An exact O(n^2) baseline and
a relative-error metric support evaluation at desk scale.
"""

from .bridges import BridgeEdge, BridgeEdgeSet, pair_count, sample_bridges
from .components import (
    ComponentLabeling,
    UndirectedGraph,
    find_components,
    symmetrize,
)
from .errors import DataError, FamstError, InternalError, UsageError
from .geometry import PointSet
from .io import (
    BlobSpec,
    gen_blobs,
    load_csv,
    load_matrix,
    load_points,
    read_tree,
    save_matrix,
    write_stats,
    write_tree,
)
from .mst import (
    EdgeList,
    SpanningTree,
    UnionFind,
    WeightedEdge,
    assemble_candidate_edges,
    exact_mst_prim,
    kruskal,
    relative_error,
)
from .neighbors import (
    AnnParams,
    NeighborGraph,
    build_knn_descent,
    build_knn_exact,
    recall,
)
from .pipeline import FamstConfig, RunStats, evaluate, famst
from .refine import (
    Change,
    RefinementDelta,
    RefinementReport,
    dedupe_bridges,
    refine_once,
    refine_until_converged,
)

__version__ = "0.1.0"

__all__ = [
    "AnnParams",
    "BlobSpec",
    "BridgeEdge",
    "BridgeEdgeSet",
    "Change",
    "ComponentLabeling",
    "DataError",
    "EdgeList",
    "FamstConfig",
    "FamstError",
    "InternalError",
    "NeighborGraph",
    "PointSet",
    "RefinementDelta",
    "RefinementReport",
    "RunStats",
    "SpanningTree",
    "UndirectedGraph",
    "UnionFind",
    "UsageError",
    "WeightedEdge",
    "assemble_candidate_edges",
    "build_knn_descent",
    "build_knn_exact",
    "dedupe_bridges",
    "evaluate",
    "exact_mst_prim",
    "famst",
    "find_components",
    "gen_blobs",
    "kruskal",
    "load_csv",
    "load_matrix",
    "load_points",
    "pair_count",
    "read_tree",
    "recall",
    "refine_once",
    "refine_until_converged",
    "relative_error",
    "sample_bridges",
    "save_matrix",
    "symmetrize",
    "write_stats",
    "write_tree",
]
