"""Centrality-weighted pooling as a drop-in for global average pooling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affinity import episode_transitions
from .centrality import EIGEN_ALPHA, SolverConfig, solve_centrality
from .errors import DegenerateInputError, DimensionError
from .features import FeatureMatrix, flatten_support

__all__ = [
    "PooledFeatures",
    "pool_query",
    "pool_support",
    "global_average_pool",
    "centrality_pool_episode",
]


@dataclass(frozen=True)
class PooledFeatures:
    query_vec: np.ndarray
    class_vecs: tuple[np.ndarray, ...]


def _data(m) -> np.ndarray:
    return m.data if isinstance(m, FeatureMatrix) else np.asarray(m, dtype=np.float64)


def pool_query(query, pi_q) -> np.ndarray:
    q = _data(query)
    w = np.asarray(pi_q, dtype=np.float64)
    if w.shape != (q.shape[1],):
        raise DimensionError(f"expected {q.shape[1]} query weights, got shape {w.shape}")
    return q @ w


def pool_support(support_union, pi_s, n_classes: int) -> list[np.ndarray]:
    """Per-class convex combinations with weights renormalized inside each class block."""
    s = _data(support_union)
    w = np.asarray(pi_s, dtype=np.float64)
    if w.shape != (s.shape[1],) or s.shape[1] % n_classes:
        raise DimensionError(
            f"support has {s.shape[1]} columns, weights shape {w.shape}, {n_classes} classes"
        )
    r = s.shape[1] // n_classes
    out = []
    for c in range(n_classes):
        block = w[c * r : (c + 1) * r]
        mass = block.sum()
        if not mass > 0:
            raise DegenerateInputError(f"class {c} has zero centrality mass")
        out.append(s[:, c * r : (c + 1) * r] @ (block / mass))
    return out


def global_average_pool(features) -> np.ndarray:
    return _data(features).mean(axis=1)


def centrality_pool_episode(episode, gamma: float = 20.0, beta: float = 10.0, solver: SolverConfig | None = None):
    solver = solver or SolverConfig(alpha=EIGEN_ALPHA)
    cp = solve_centrality(episode_transitions(episode, gamma, beta), solver)
    return PooledFeatures(
        query_vec=pool_query(episode.query, cp.pi_q),
        class_vecs=tuple(pool_support(flatten_support(episode), cp.pi_s, episode.n_classes)),
    )
