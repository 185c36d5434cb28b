import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mclwalk import (
    DegenerateInputError,
    DimensionError,
    SolverConfig,
    build_episode,
    centrality_pool_episode,
    eigen_approx,
    episode_transitions,
    flatten_support,
    global_average_pool,
    pool_query,
    pool_support,
)
from tests.helpers import random_episode


class TestPoolQuery:
    def test_uniform_is_gap(self, rng):
        q = rng.standard_normal((5, 4))
        np.testing.assert_allclose(pool_query(q, np.full(4, 0.25)), global_average_pool(q), atol=1e-12)

    def test_one_hot_selects_column(self, rng):
        q = rng.standard_normal((5, 4))
        np.testing.assert_array_equal(pool_query(q, np.eye(4)[2]), q[:, 2])

    def test_weighted(self):
        np.testing.assert_allclose(pool_query(np.eye(2), [0.75, 0.25]), [0.75, 0.25])

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            pool_query(np.eye(2), [1.0])


class TestPoolSupport:
    def test_uniform_is_per_class_gap(self, rng):
        s = rng.standard_normal((3, 6))
        out = pool_support(s, np.full(6, 1 / 6), 2)
        np.testing.assert_allclose(out[0], s[:, :3].mean(axis=1), atol=1e-12)
        np.testing.assert_allclose(out[1], s[:, 3:].mean(axis=1), atol=1e-12)

    def test_concentrated_class_block(self, rng):
        s = rng.standard_normal((3, 4))
        w = np.array([0.0, 0.5, 0.25, 0.25])
        out = pool_support(s, w, 2)
        np.testing.assert_array_equal(out[0], s[:, 1])
        np.testing.assert_allclose(out[1], s[:, 2:].mean(axis=1))

    def test_block_renormalization(self):
        # class weights (0.4, 0.1) -> (0.8, 0.2) and (0.3, 0.2) -> (0.6, 0.4)
        s = np.eye(4)
        out = pool_support(s, [0.4, 0.1, 0.3, 0.2], 2)
        np.testing.assert_allclose(out[0], [0.8, 0.2, 0, 0])
        np.testing.assert_allclose(out[1], [0, 0, 0.6, 0.4])

    def test_zero_mass(self):
        with pytest.raises(DegenerateInputError):
            pool_support(np.eye(4), [0.0, 0.0, 0.5, 0.5], 2)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            pool_support(np.eye(4), [0.5, 0.5], 2)


class TestGlobalAveragePool:
    def test_single_column(self):
        np.testing.assert_array_equal(global_average_pool([[1.0], [2.0]]), [1.0, 2.0])

    def test_two_columns(self):
        np.testing.assert_allclose(global_average_pool(np.eye(2)), [0.5, 0.5])


class TestCentralityPoolEpisode:
    def test_identical_features_reduce_to_gap(self):
        m = np.tile(np.arange(1.0, 5.0)[:, None], (1, 3))
        ep = build_episode([[m], [m + 0.0]], m)
        pooled = centrality_pool_episode(ep)
        np.testing.assert_allclose(pooled.query_vec, global_average_pool(m), atol=1e-12)
        for v in pooled.class_vecs:
            np.testing.assert_allclose(v, global_average_pool(m), atol=1e-12)

    def test_single_class(self, rng):
        assert len(centrality_pool_episode(random_episode(rng, 1, 4, 8)).class_vecs) == 1

    def test_matches_manual_composition(self, rng):
        ep = random_episode(rng, 3, 5, 16)
        cp = eigen_approx(episode_transitions(ep, 20.0, 10.0))
        pooled = centrality_pool_episode(ep, 20.0, 10.0)
        np.testing.assert_allclose(pooled.query_vec, pool_query(ep.query, cp.pi_q), atol=1e-14)
        for a, b in zip(pooled.class_vecs, pool_support(flatten_support(ep), cp.pi_s, 3)):
            np.testing.assert_allclose(a, b, atol=1e-14)

    def test_one_sided_ablation(self, rng):
        # centrality on the query, GAP on the supports
        ep = random_episode(rng, 2, 4, 8)
        pooled = centrality_pool_episode(ep, solver=SolverConfig(method="power"))
        gap_support = [global_average_pool(s) for s in ep.supports]
        assert pooled.query_vec.shape == gap_support[0].shape


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_pooled_vectors_are_convex(n, r, seed):
    ep = random_episode(np.random.default_rng(seed), n, r, 6)
    pooled = centrality_pool_episode(ep)
    slack = 1e-12
    q = ep.query.data
    assert np.all(pooled.query_vec >= q.min(axis=1) - slack)
    assert np.all(pooled.query_vec <= q.max(axis=1) + slack)
    for v, s in zip(pooled.class_vecs, ep.supports):
        assert np.all(v >= s.data.min(axis=1) - slack) and np.all(v <= s.data.max(axis=1) + slack)
    assert np.all(np.isfinite(pooled.query_vec))
