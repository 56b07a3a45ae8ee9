"""Session setup: compile every jitted kernel once before any timed test."""

from __future__ import annotations

import numpy as np
import pytest

import famst
from helpers import clustered_points, enum_min_tree_weight, weight_matrix


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    rng = np.random.default_rng(0)
    x = famst.PointSet(rng.uniform(size=(30, 3)))
    famst.famst(x, famst.FamstConfig(k=2, n_bridges=1, seed=0, backend="exact"))
    famst.famst(x, famst.FamstConfig(k=2, n_bridges=1, seed=0, backend="descent"))
    famst.exact_mst_prim(x)
    enum_min_tree_weight(weight_matrix(famst.PointSet(rng.uniform(size=(4, 2)))))
    # multi-component instance so the bridge and refinement kernels compile too
    x2 = clustered_points([8, 8], d=3, seed=1)
    famst.famst(x2, famst.FamstConfig(k=2, n_bridges=2, seed=0, backend="exact"))
    yield
