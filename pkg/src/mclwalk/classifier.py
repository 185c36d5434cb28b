"""Class probabilities from support centralities (MCL and MCL-Katz heads)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affinity import episode_transitions
from .centrality import SolverConfig, katz_block_inverse, solve_centrality
from .errors import DegenerateInputError, DimensionError, ParameterError

__all__ = [
    "KATZ_ALPHA",
    "ClassDistribution",
    "class_mass",
    "classify_mcl",
    "classify_katz",
    "predict",
]

KATZ_ALPHA = 0.5


@dataclass(frozen=True)
class ClassDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise DimensionError(f"class distribution must be a non-empty vector, got shape {p.shape}")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def n_classes(self) -> int:
        return self.probs.size

    def __len__(self):
        return self.probs.size


def class_mass(scores: np.ndarray, n_classes: int) -> ClassDistribution:
    """Sum class-major support scores per class block and normalize."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size % n_classes:
        raise DimensionError(f"{scores.size} support scores do not split into {n_classes} classes")
    per_class = scores.reshape(n_classes, -1).sum(axis=1)
    total = per_class.sum()
    if not total > 0:
        raise DegenerateInputError("support scores have no mass")
    return ClassDistribution(per_class / total)


def classify_mcl(episode, gamma: float = 20.0, beta: float = 10.0, solver: SolverConfig | None = None):
    pair = episode_transitions(episode, gamma, beta)
    cp = solve_centrality(pair, solver)
    return class_mass(cp.pi_s, episode.n_classes)


def classify_katz(episode, gamma: float = 20.0, beta: float = 10.0, alpha: float = KATZ_ALPHA):
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    pair = episode_transitions(episode, gamma, beta)
    raw = katz_block_inverse(pair, alpha)
    return class_mass(raw.x[: raw.n_support], episode.n_classes)


def predict(dist: ClassDistribution) -> int:
    # np.argmax returns the first maximum, i.e. ties go to the lowest index
    return int(np.argmax(dist.probs))
