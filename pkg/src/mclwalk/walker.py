"""Monte Carlo simulation of the bipartite walk.

Random numbers come from numpy's PCG64. Trial ``i`` draws from its own
substream ``SeedSequence(seed).spawn(trials)[i]``, so results do not depend
on chunking or on how trials are scheduled. Each trial consumes one uniform
for its start state (uniform over all ``Nr + r`` states) and then one per
step. A step from a query state samples a support state from the matching
column of ``p_sq`` by inverse CDF; support states sample from ``p_qs``.
Visits are counted from step 1; the start state is not a visit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .affinity import TransitionPair
from .classifier import ClassDistribution
from .errors import DegenerateInputError, ParameterError

__all__ = [
    "WalkStats",
    "simulate",
    "walk_trace",
    "estimate_class_distribution",
    "estimate_katz_accessibility",
]

_CHUNK = 1 << 16


@dataclass(frozen=True)
class WalkStats:
    visits_support: np.ndarray
    visits_query: np.ndarray
    total_steps: int
    trials: int
    rng_seed: int

    @property
    def support_frequencies(self) -> np.ndarray:
        return self.visits_support / self.visits_support.sum()


@numba.njit(cache=True)
def _pick(cdf, col, u):
    n = cdf.shape[0]
    lo, hi = 0, n - 1
    # first row whose cumulative mass exceeds u; the last row absorbs rounding
    while lo < hi:
        mid = (lo + hi) // 2
        if cdf[mid, col] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


@numba.njit(cache=True)
def _advance(state, n_support, cdf_sq, cdf_qs, u):
    if state < n_support:
        return n_support + _pick(cdf_qs, state, u)
    return _pick(cdf_sq, state - n_support, u)


@numba.njit(cache=True)
def _walk_counts(state, uniforms, n_support, cdf_sq, cdf_qs, counts):
    for u in uniforms:
        state = _advance(state, n_support, cdf_sq, cdf_qs, u)
        counts[state] += 1
    return state


@numba.njit(cache=True)
def _walk_path(state, uniforms, n_support, cdf_sq, cdf_qs, out):
    for t in range(uniforms.size):
        state = _advance(state, n_support, cdf_sq, cdf_qs, uniforms[t])
        out[t] = state
    return state


@numba.njit(cache=True)
def _walk_attenuated(state, uniforms, n_support, cdf_sq, cdf_qs, weight, alpha, acc):
    for u in uniforms:
        state = _advance(state, n_support, cdf_sq, cdf_qs, u)
        weight *= alpha
        if state < n_support:
            acc[state] += weight
    return state, weight


def _cdfs(pair: TransitionPair):
    return np.cumsum(pair.p_sq, axis=0), np.cumsum(pair.p_qs, axis=0)


def _streams(seed: int, trials: int):
    return [np.random.Generator(np.random.PCG64(ss)) for ss in np.random.SeedSequence(seed).spawn(trials)]


def _start(gen, n_states):
    return min(int(gen.random() * n_states), n_states - 1)


def _chunks(gen, steps):
    left = steps
    while left > 0:
        n = min(left, _CHUNK)
        yield gen.random(n)
        left -= n


def _check_counts(steps, trials):
    if steps < 1 or trials < 1:
        raise ParameterError(f"steps and trials must be positive, got steps={steps}, trials={trials}")


def simulate(pair: TransitionPair, steps: int, trials: int = 1, seed: int = 0) -> WalkStats:
    _check_counts(steps, trials)
    cdf_sq, cdf_qs = _cdfs(pair)
    n = pair.n_support
    counts = np.zeros(pair.n_states, dtype=np.int64)
    for gen in _streams(seed, trials):
        state = _start(gen, pair.n_states)
        for u in _chunks(gen, steps):
            state = _walk_counts(state, u, n, cdf_sq, cdf_qs, counts)
    return WalkStats(
        visits_support=counts[:n],
        visits_query=counts[n:],
        total_steps=int(steps),
        trials=int(trials),
        rng_seed=int(seed),
    )


def walk_trace(pair: TransitionPair, steps: int, seed: int = 0, trial: int = 0) -> np.ndarray:
    """State sequence ``X_0 .. X_steps`` of one trial, replaying :func:`simulate`'s stream."""
    _check_counts(steps, trial + 1)
    cdf_sq, cdf_qs = _cdfs(pair)
    gen = _streams(seed, trial + 1)[trial]
    path = np.empty(steps + 1, dtype=np.int64)
    path[0] = state = _start(gen, pair.n_states)
    pos = 1
    for u in _chunks(gen, steps):
        state = _walk_path(state, u, pair.n_support, cdf_sq, cdf_qs, path[pos : pos + u.size])
        pos += u.size
    return path


def estimate_class_distribution(stats: WalkStats, n_classes: int) -> ClassDistribution:
    visits = np.asarray(stats.visits_support, dtype=np.float64)
    total = visits.sum()
    if total == 0:
        raise DegenerateInputError("walk never visited a support state")
    return ClassDistribution(visits.reshape(n_classes, -1).sum(axis=1) / total)


def estimate_katz_accessibility(
    pair: TransitionPair, alpha: float, horizon: int, trials: int, seed: int = 0
) -> ClassDistribution:
    """Monte Carlo estimate of attenuated support visits, normalized over classes."""
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    _check_counts(horizon, trials)
    tail = alpha**horizon / (1 - alpha)
    if tail >= 1e-4:
        raise ParameterError(f"horizon {horizon} too short for alpha={alpha}: tail {tail:.2e} >= 1e-4")
    cdf_sq, cdf_qs = _cdfs(pair)
    acc = np.zeros(pair.n_support)
    for gen in _streams(seed, trials):
        state = _start(gen, pair.n_states)
        weight = 1.0
        for u in _chunks(gen, horizon):
            state, weight = _walk_attenuated(state, u, pair.n_support, cdf_sq, cdf_qs, weight, alpha, acc)
    total = acc.sum()
    if not total > 0:
        raise DegenerateInputError("no attenuated support visits recorded")
    return ClassDistribution(acc.reshape(pair.n_classes, -1).sum(axis=1) / total)
