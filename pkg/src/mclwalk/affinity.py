"""Cosine affinities and the two column-stochastic transition blocks.

The bipartite walk moves query -> support with ``p_sq`` (``Nr x r``) and
support -> query with ``p_qs`` (``r x Nr``). The full transition matrix is
anti-block-diagonal with the support states first; it is only materialized
by :func:`assemble_dense`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError, ValidationError
from .features import FeatureMatrix, flatten_support

__all__ = [
    "NORM_EPS",
    "DEFAULT_SCALES",
    "TransitionPair",
    "cosine_affinity",
    "column_softmax",
    "build_transitions",
    "assemble_dense",
    "episode_transitions",
]

NORM_EPS = 1e-12

# (gamma, beta) keyed by shots per class.
DEFAULT_SCALES = {1: (20.0, 10.0), 5: (40.0, 20.0)}


def _matrix(m) -> np.ndarray:
    arr = m.data if isinstance(m, FeatureMatrix) else np.asarray(m, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("input contains non-finite entries")
    return arr


def _unit_columns(a: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(a, axis=0)
    # zero-norm features get a zero column so their cosine is 0 everywhere
    safe = np.where(norms < NORM_EPS, np.inf, norms)
    return a / safe


def cosine_affinity(query, support_union) -> np.ndarray:
    """``r x Nr`` matrix of cosine similarities between query and support columns."""
    q = _matrix(query)
    s = _matrix(support_union)
    if q.shape[0] != s.shape[0]:
        raise DimensionError(f"feature dimension mismatch: query d={q.shape[0]}, support d={s.shape[0]}")
    return _unit_columns(q).T @ _unit_columns(s)


def column_softmax(matrix, scale: float) -> np.ndarray:
    """``exp(scale * m)`` with every column normalized to sum to one."""
    if not scale > 0:
        raise ParameterError(f"softmax scale must be positive, got {scale}")
    z = scale * np.asarray(matrix, dtype=np.float64)
    z = z - z.max(axis=0, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=0, keepdims=True)


@dataclass(frozen=True)
class TransitionPair:
    p_sq: np.ndarray
    p_qs: np.ndarray
    gamma: float
    beta: float

    def __post_init__(self):
        p_sq = np.asarray(self.p_sq, dtype=np.float64)
        p_qs = np.asarray(self.p_qs, dtype=np.float64)
        if p_sq.ndim != 2 or p_qs.shape != p_sq.shape[::-1]:
            raise DimensionError(f"incompatible blocks: p_sq {p_sq.shape}, p_qs {p_qs.shape}")
        if p_sq.shape[0] % p_sq.shape[1]:
            raise DimensionError(f"support size {p_sq.shape[0]} is not a multiple of r={p_sq.shape[1]}")
        for name, arr in (("p_sq", p_sq), ("p_qs", p_qs)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def r(self) -> int:
        return self.p_sq.shape[1]

    @property
    def n_support(self) -> int:
        return self.p_sq.shape[0]

    @property
    def n_classes(self) -> int:
        return self.n_support // self.r

    @property
    def n_states(self) -> int:
        return self.n_support + self.r


def build_transitions(phi, gamma: float, beta: float) -> TransitionPair:
    if not (gamma > 0 and beta > 0):
        raise ParameterError(f"gamma and beta must be positive, got gamma={gamma}, beta={beta}")
    phi = np.asarray(phi, dtype=np.float64)
    return TransitionPair(
        p_sq=column_softmax(phi.T, gamma),
        p_qs=column_softmax(phi, beta),
        gamma=float(gamma),
        beta=float(beta),
    )


def assemble_dense(pair: TransitionPair) -> np.ndarray:
    """Explicit ``(Nr+r) x (Nr+r)`` transition matrix, support states first."""
    n = pair.n_support
    P = np.zeros((pair.n_states, pair.n_states))
    P[:n, n:] = pair.p_sq
    P[n:, :n] = pair.p_qs
    return P


def episode_transitions(episode, gamma: float, beta: float) -> TransitionPair:
    phi = cosine_affinity(episode.query, flatten_support(episode))
    return build_transitions(phi, gamma, beta)
