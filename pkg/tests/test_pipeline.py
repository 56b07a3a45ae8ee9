import numpy as np
import pytest

from famst import (
    AnnParams,
    FamstConfig,
    PointSet,
    UsageError,
    evaluate,
    exact_mst_prim,
    famst,
)
from helpers import assert_valid_tree, clustered_points


def _line() -> PointSet:
    return PointSet(np.array([[0.0], [1.0], [10.0], [11.0]]))


def test_line_instance_is_exact():
    tree, stats = famst(_line(), FamstConfig(k=1, n_bridges=1, backend="exact"))
    assert_valid_tree(tree)
    got = set(zip(tree.u.tolist(), tree.v.tolist(), tree.w.tolist()))
    assert got == {(0, 1, 1.0), (2, 3, 1.0), (1, 2, 9.0)}
    assert stats.total_weight == pytest.approx(11.0, abs=1e-12)
    assert stats.t == 2
    assert stats.r >= 1


def test_saturated_k_matches_exact_baseline():
    rng = np.random.default_rng(41)
    x = PointSet(rng.normal(size=(60, 4)))
    tree, stats = famst(x, FamstConfig(k=59, n_bridges=1, backend="exact"))
    exact = exact_mst_prim(x)
    assert stats.t == 1
    assert abs(tree.total_weight - exact.total_weight) <= 1e-12


def test_connected_input_skips_bridging():
    x = clustered_points([30], d=3, seed=2)
    tree, stats = famst(x, FamstConfig(k=8, n_bridges=2, backend="exact"))
    assert_valid_tree(tree)
    assert stats.t == 1
    assert stats.r == 1  # one refinement pass over an empty set, then done


def test_multi_cluster_run_reports_phases():
    x = clustered_points([40, 35, 25], d=5, seed=9)
    cfg = FamstConfig(k=4, n_bridges=3, seed=1, backend="exact")
    tree, stats = famst(x, cfg)
    assert_valid_tree(tree)
    assert stats.n == 100 and stats.d == 5
    assert stats.k == 4 and stats.n_bridges == 3
    assert stats.t == 3
    assert stats.r >= 1
    for phase in (
        stats.ann_seconds,
        stats.connect_seconds,
        stats.refine_seconds,
        stats.mst_seconds,
    ):
        assert phase >= 0.0
    phase_sum = (
        stats.ann_seconds
        + stats.connect_seconds
        + stats.refine_seconds
        + stats.mst_seconds
    )
    assert stats.total_seconds >= phase_sum - 1e-6


def test_determinism_edge_for_edge():
    x = clustered_points([50, 40, 30], d=6, seed=13)
    cfg = FamstConfig(k=5, n_bridges=2, seed=7)
    t1, s1 = famst(x, cfg)
    t2, s2 = famst(x, cfg)
    assert np.array_equal(t1.u, t2.u)
    assert np.array_equal(t1.v, t2.v)
    assert np.array_equal(t1.w, t2.w)
    assert t1.total_weight == t2.total_weight
    assert (s1.t, s1.r) == (s2.t, s2.r)
    # a different seed may legitimately pick different bridges
    t3, _ = famst(x, FamstConfig(k=5, n_bridges=2, seed=8))
    assert_valid_tree(t3)


def test_warns_when_bridges_exceed_k():
    x = _line()
    with pytest.warns(RuntimeWarning, match="at or below k"):
        famst(x, FamstConfig(k=1, n_bridges=2, backend="exact"))


def test_input_validation():
    x = _line()
    with pytest.raises(UsageError):
        famst(x, FamstConfig(k=4))  # k > n-1
    with pytest.raises(UsageError):
        famst(PointSet(np.array([[1.0]])), FamstConfig(k=1))
    with pytest.raises(UsageError):
        famst(x, "not a config")
    with pytest.raises(UsageError):
        FamstConfig(k=0)
    with pytest.raises(UsageError):
        FamstConfig(n_bridges=0)
    with pytest.raises(UsageError):
        FamstConfig(backend="annoy")
    with pytest.raises(UsageError):
        FamstConfig(max_rounds=0)


def test_custom_ann_params_respected():
    x = clustered_points([80, 70], d=4, seed=5)
    cfg = FamstConfig(k=6, n_bridges=2, seed=3, ann=AnnParams(seed=99, max_iters=30))
    tree, stats = famst(x, cfg)
    assert_valid_tree(tree)
    assert stats.t >= 1


def test_evaluate_small_instance_scores_itself():
    stats = evaluate(_line(), FamstConfig(k=1, n_bridges=1, backend="exact"))
    assert stats.relative_error == pytest.approx(0.0, abs=1e-12)


def test_evaluate_with_supplied_tree():
    x = clustered_points([20, 20], d=3, seed=21)
    exact = exact_mst_prim(x)
    stats = evaluate(x, FamstConfig(k=3, n_bridges=2, backend="exact"), exact=exact)
    assert stats.relative_error is not None
    assert stats.relative_error >= -1e-12


def test_evaluate_above_gate_behaviour():
    x = clustered_points([15, 15], d=3, seed=22)
    cfg = FamstConfig(k=3, n_bridges=1, backend="exact")
    silent = evaluate(x, cfg, exact_gate=10)
    assert silent.relative_error is None
    with pytest.raises(UsageError):
        evaluate(x, cfg, exact_gate=10, require_error=True)


def test_stats_to_dict_spells_lambda():
    stats = evaluate(_line(), FamstConfig(k=1, n_bridges=1, backend="exact"))
    d = stats.to_dict()
    assert d["lambda"] == 1
    assert "n_bridges" not in d
    assert "relative_error" in d
    _, bare = famst(_line(), FamstConfig(k=1, n_bridges=1, backend="exact"))
    assert "relative_error" not in bare.to_dict()
    assert list(d)[:6] == ["n", "d", "k", "lambda", "t", "r"]
