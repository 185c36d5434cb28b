"""Dense feature sets and N-way episodes.

A feature matrix is ``d x r``: column ``j`` is the ``j``-th local feature.
The support union of an episode is laid out class-major, so columns
``[c*r, (c+1)*r)`` belong to class ``c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ValidationError

__all__ = [
    "FeatureMatrix",
    "Episode",
    "average_prototype",
    "build_episode",
    "flatten_support",
    "random_shots",
]


@dataclass(frozen=True)
class FeatureMatrix:
    """Read-only ``d x r`` block of dense features."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise DimensionError(f"feature matrix must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"feature matrix must be non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("feature matrix contains non-finite entries")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def d(self) -> int:
        return self.data.shape[0]

    @property
    def r(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other):
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.shape, self.data.tobytes()))


def _as_feature_matrix(m) -> FeatureMatrix:
    return m if isinstance(m, FeatureMatrix) else FeatureMatrix(m)


@dataclass(frozen=True)
class Episode:
    """One N-way task: a prototype per support class plus one query.

    ``shots`` keeps the raw per-class shots when the episode was built from
    them; it is only used for serialization.
    """

    supports: tuple[FeatureMatrix, ...]
    query: FeatureMatrix
    shots: tuple[tuple[FeatureMatrix, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        supports = tuple(_as_feature_matrix(s) for s in self.supports)
        query = _as_feature_matrix(self.query)
        if not supports:
            raise DimensionError("episode needs at least one support class")
        for c, s in enumerate(supports):
            if s.shape != query.shape:
                raise DimensionError(
                    f"class {c} prototype has shape {s.shape}, query has {query.shape}"
                )
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "query", query)

    @property
    def n_classes(self) -> int:
        return len(self.supports)

    @property
    def d(self) -> int:
        return self.query.d

    @property
    def r(self) -> int:
        return self.query.r

    @property
    def k_shots(self) -> int:
        return 1 if self.shots is None else len(self.shots[0])


def average_prototype(shots: Sequence) -> FeatureMatrix:
    """Position-wise mean of ``K`` aligned shots."""
    shots = [_as_feature_matrix(s) for s in shots]
    if not shots:
        raise ValidationError("cannot average an empty list of shots")
    shape = shots[0].shape
    for k, s in enumerate(shots):
        if s.shape != shape:
            raise DimensionError(f"shot {k} has shape {s.shape}, expected {shape}")
    if len(shots) == 1:
        return shots[0]
    return FeatureMatrix(np.mean([s.data for s in shots], axis=0))


def build_episode(per_class_shots: Sequence[Sequence], query) -> Episode:
    query = _as_feature_matrix(query)
    if len(per_class_shots) == 0:
        raise DimensionError("episode needs at least one support class")
    classes = []
    for c, shots in enumerate(per_class_shots):
        shots = tuple(_as_feature_matrix(s) for s in shots)
        if not shots:
            raise ValidationError(f"class {c} has no shots")
        for k, s in enumerate(shots):
            if s.shape != query.shape:
                raise DimensionError(
                    f"class {c} shot {k} has shape {s.shape}, query has {query.shape}"
                )
        k0 = len(classes[0]) if classes else len(shots)
        if len(shots) != k0:
            raise DimensionError(f"class {c} has {len(shots)} shots, expected {k0}")
        classes.append(shots)
    supports = tuple(average_prototype(shots) for shots in classes)
    return Episode(supports=supports, query=query, shots=tuple(classes))


def flatten_support(episode: Episode) -> FeatureMatrix:
    """Support union as a ``d x (N*r)`` matrix, class-major."""
    if episode.n_classes == 1:
        return episode.supports[0]
    return FeatureMatrix(np.concatenate([s.data for s in episode.supports], axis=1))


def random_shots(rng: np.random.Generator, n_classes: int, k_shots: int, d: int, r: int):
    """Unit-norm Gaussian features: ``(per_class_shots, query)`` as arrays."""

    def draw():
        m = rng.standard_normal((d, r))
        return m / np.linalg.norm(m, axis=0, keepdims=True)

    per_class = [[draw() for _ in range(k_shots)] for _ in range(n_classes)]
    return per_class, draw()
