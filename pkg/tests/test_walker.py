import numpy as np
import pytest

from mclwalk import (
    ClassDistribution,
    DegenerateInputError,
    ParameterError,
    WalkStats,
    build_transitions,
    classify_katz,
    episode_transitions,
    estimate_class_distribution,
    estimate_katz_accessibility,
    simulate,
    stationary_power,
    walk_trace,
)
from tests.helpers import random_episode, random_pair

SINGLE = build_transitions(np.zeros((1, 1)), 1.0, 1.0)
UNIFORM = build_transitions(np.zeros((2, 4)), 20.0, 10.0)


def test_visit_accounting(rng):
    pair = random_pair(rng, 3, 2, 8)
    stats = simulate(pair, steps=500, trials=7, seed=3)
    assert stats.visits_support.sum() + stats.visits_query.sum() == 500 * 7
    assert (stats.total_steps, stats.trials, stats.rng_seed) == (500, 7, 3)


@pytest.mark.parametrize("steps", [1, 2, 7, 100])
def test_single_feature_alternates(steps):
    for trial in range(6):
        path = walk_trace(SINGLE, steps, seed=11, trial=trial)
        assert np.all(path[1:] != path[:-1])
    stats = simulate(SINGLE, steps, trials=1, seed=5)
    assert stats.visits_support[0] in (steps // 2, (steps + 1) // 2)


def test_trace_never_stays_on_one_side(rng):
    pair = random_pair(rng, 3, 4, 8)
    path = walk_trace(pair, 5000, seed=2)
    side = path < pair.n_support
    assert np.all(side[1:] != side[:-1])


def test_trace_replays_simulate(rng):
    pair = random_pair(rng, 2, 3, 8)
    stats = simulate(pair, 3000, trials=3, seed=9)
    counts = np.zeros(pair.n_states, dtype=np.int64)
    for t in range(3):
        path = walk_trace(pair, 3000, seed=9, trial=t)
        np.add.at(counts, path[1:], 1)
    np.testing.assert_array_equal(counts[: pair.n_support], stats.visits_support)


def test_reproducible(rng):
    pair = random_pair(rng, 2, 4, 8)
    a = simulate(pair, 2000, trials=5, seed=42)
    b = simulate(pair, 2000, trials=5, seed=42)
    np.testing.assert_array_equal(a.visits_support, b.visits_support)
    np.testing.assert_array_equal(a.visits_query, b.visits_query)
    c = simulate(pair, 2000, trials=5, seed=43)
    assert not np.array_equal(a.visits_support, c.visits_support)


def test_chunking_does_not_change_result(rng, monkeypatch):
    import mclwalk.walker as w

    pair = random_pair(rng, 2, 3, 8)
    a = simulate(pair, 1000, trials=2, seed=1)
    monkeypatch.setattr(w, "_CHUNK", 37)
    b = simulate(pair, 1000, trials=2, seed=1)
    np.testing.assert_array_equal(a.visits_support, b.visits_support)


def test_uniform_pair_frequencies_within_binomial_bounds():
    stats = simulate(UNIFORM, steps=1000, trials=100, seed=0)
    for visits in (stats.visits_support, stats.visits_query):
        n = visits.sum()
        p = 1 / visits.size
        sigma = np.sqrt(n * p * (1 - p))
        assert np.all(np.abs(visits - n * p) <= 3 * sigma)


def test_frequencies_match_stationary():
    g = np.random.default_rng(2024)
    pair = random_pair(g, 2, 2, 64)
    stats = simulate(pair, steps=10_000, trials=100, seed=1)
    np.testing.assert_allclose(stats.support_frequencies, stationary_power(pair).pi_s, atol=0.01)


def test_monte_carlo_error_scaling():
    g = np.random.default_rng(77)
    pairs = [random_pair(g, 2, 2, 64) for _ in range(4)]

    def mean_gap(steps):
        gaps = []
        for i, pair in enumerate(pairs):
            pi = stationary_power(pair).pi_s
            for seed in range(8):
                stats = simulate(pair, steps, trials=10, seed=1000 * i + seed)
                gaps.append(np.abs(stats.support_frequencies - pi).max())
        return np.mean(gaps)

    ratio = mean_gap(1_000) / mean_gap(100_000)
    assert 5 <= ratio <= 20


class TestEstimateClassDistribution:
    def _stats(self, support):
        support = np.asarray(support)
        return WalkStats(support, np.zeros(2, dtype=np.int64), int(support.sum()), 1, 0)

    def test_all_in_class_zero(self):
        np.testing.assert_array_equal(estimate_class_distribution(self._stats([3, 5, 0, 0]), 2).probs, [1, 0])

    def test_uniform(self):
        np.testing.assert_allclose(estimate_class_distribution(self._stats([4, 4, 4, 4]), 2).probs, [0.5, 0.5])

    def test_zero_visits(self):
        with pytest.raises(DegenerateInputError):
            estimate_class_distribution(self._stats([0, 0]), 1)

    def test_returns_distribution(self, rng):
        stats = simulate(random_pair(rng, 3, 2, 8), 100, 1, 0)
        assert isinstance(estimate_class_distribution(stats, 3), ClassDistribution)


class TestKatzAccessibility:
    def test_uniform(self):
        dist = estimate_katz_accessibility(UNIFORM, 0.5, horizon=30, trials=20_000, seed=0)
        np.testing.assert_allclose(dist.probs, 0.5, atol=0.02)

    def test_matches_closed_form(self):
        g = np.random.default_rng(5)
        ep = random_episode(g, 2, 2, 16)
        pair = episode_transitions(ep, 20.0, 10.0)
        dist = estimate_katz_accessibility(pair, 0.5, horizon=30, trials=100_000, seed=3)
        np.testing.assert_allclose(dist.probs, classify_katz(ep, alpha=0.5).probs, atol=0.02)

    def test_small_alpha_is_one_step(self, rng):
        pair = random_pair(rng, 3, 2, 8)
        one_step = pair.p_sq.sum(axis=1).reshape(3, -1).sum(axis=1)
        dist = estimate_katz_accessibility(pair, 1e-3, horizon=5, trials=100_000, seed=0)
        # first-step weight dominates; MC noise ~ 1/sqrt(trials / (r / (N r + r)))
        np.testing.assert_allclose(dist.probs, one_step / one_step.sum(), atol=0.02)

    def test_short_horizon_rejected(self):
        with pytest.raises(ParameterError):
            estimate_katz_accessibility(UNIFORM, 0.9, horizon=10, trials=1)

    def test_bad_counts(self):
        with pytest.raises(ParameterError):
            simulate(UNIFORM, 0, 1)
