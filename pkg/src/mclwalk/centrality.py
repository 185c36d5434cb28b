"""Stationary, eigenvector and Katz centralities of the bipartite walk.

All solvers return the support-side stationary vector ``pi_s`` (length
``Nr``) and its conjugate ``pi_q = p_qs @ pi_s`` (length ``r``), or the raw
unnormalized Katz scores over all ``Nr + r`` states.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .affinity import TransitionPair, assemble_dense
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    IllConditionedWarning,
    NumericalError,
    ParameterError,
)

__all__ = [
    "Method",
    "SolverConfig",
    "CentralityPair",
    "RawCentrality",
    "stationary_power",
    "stationary_linear",
    "katz_closed_form",
    "katz_block_inverse",
    "eigen_approx",
    "single_mode_normalize",
    "solve_centrality",
    "EIGEN_ALPHA",
]

EIGEN_ALPHA = 0.999
# warn once the 1-norm condition bound (1 + a) / (1 - a) of I - aP passes this
_COND_WARN = 1e10
_NEG_SLACK = 1e-12


class Method(str, enum.Enum):
    POWER = "power"
    LINEAR = "linear"
    KATZ_CLOSED_FORM = "dense"
    KATZ_BLOCK_INVERSE = "eigen"


@dataclass(frozen=True)
class SolverConfig:
    method: Method = Method.KATZ_BLOCK_INVERSE
    alpha: float = EIGEN_ALPHA
    tol: float = 1e-10
    max_iter: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) < 1:
            raise ParameterError(f"max_iter must be positive, got {self.max_iter}")


@dataclass(frozen=True)
class CentralityPair:
    pi_s: np.ndarray
    pi_q: np.ndarray


@dataclass(frozen=True)
class RawCentrality:
    """Unnormalized scores; ``x[:n_support]`` are the support states."""

    x: np.ndarray
    n_support: int


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    if (1 + alpha) / (1 - alpha) > _COND_WARN:
        warnings.warn(
            f"I - alpha*P is ill-conditioned for alpha={alpha}", IllConditionedWarning, stacklevel=3
        )


def _conjugate(pair: TransitionPair, pi_s: np.ndarray) -> CentralityPair:
    pi_q = pair.p_qs @ pi_s
    return CentralityPair(pi_s=pi_s, pi_q=pi_q / pi_q.sum())


def _renormalize_columns(m):
    return m / m.sum(axis=0, keepdims=True)


def stationary_power(pair: TransitionPair, tol: float = 1e-10, max_iter: int = 10_000) -> CentralityPair:
    """Power iteration on the composed support chain ``p_sq @ p_qs``.

    The raw walk is period-2 and never settles pointwise, so we iterate the
    two-step chain, which is strictly positive. Sweep ``k`` applies the
    chain ``2**k`` times: ``M**m = p_sq @ Q**(m-1) @ p_qs`` with the small
    ``r x r`` chain ``Q = p_qs @ p_sq``, so doubling only costs ``O(r**3)``.
    Stopping on ``||v_{k+1} - v_k||_inf < tol`` is then a faithful error
    estimate even when the chain mixes slowly.
    """
    p_sq, p_qs = pair.p_sq, pair.p_qs
    Q = p_qs @ p_sq
    R = np.eye(pair.r)  # Q ** (2**k - 1)
    v = np.full(pair.n_support, 1.0 / pair.n_support)
    delta = np.inf
    for _ in range(int(max_iter)):
        w = p_sq @ (R @ (p_qs @ v))
        w /= w.sum()
        delta = np.max(np.abs(w - v))
        v = w
        if delta < tol:
            return _conjugate(pair, v)
        R = _renormalize_columns(R @ Q @ R)
    raise ConvergenceError(f"power iteration did not converge in {max_iter} sweeps", delta)


def stationary_linear(pair: TransitionPair) -> CentralityPair:
    """Least-squares solve of ``[M - I; 1^T] pi = [0; 1]`` with ``M = p_sq @ p_qs``."""
    n = pair.n_support
    A = np.vstack([pair.p_sq @ pair.p_qs - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < n:
        raise NumericalError(f"stationary system is rank deficient (rank {rank} < {n})")
    if pi.min() < -_NEG_SLACK:
        raise NumericalError(f"least-squares solution has negative mass {pi.min():.3e}")
    if abs(pi.sum() - 1.0) > 1e-8:
        raise NumericalError(f"stochastic constraint violated by {abs(pi.sum() - 1.0):.3e}")
    pi = np.clip(pi, 0.0, None)
    return _conjugate(pair, pi / pi.sum())


def katz_closed_form(pair: TransitionPair, alpha: float) -> RawCentrality:
    """``((I - alpha P)^-1 - I) e`` on the dense ``(Nr+r)``-square matrix."""
    _check_alpha(alpha)
    P = assemble_dense(pair)
    e = np.ones(pair.n_states)
    # (I - aP)^-1 e - e == (I - aP)^-1 (a P e), which avoids cancellation at small alpha
    x = np.linalg.solve(np.eye(pair.n_states) - alpha * P, alpha * (P @ e))
    return RawCentrality(x=x, n_support=pair.n_support)


def katz_block_inverse(pair: TransitionPair, alpha: float) -> RawCentrality:
    """Katz scores via block inversion; only ``I - alpha^2 p_qs p_sq`` (``r x r``) is factored."""
    _check_alpha(alpha)
    p_sq, p_qs = pair.p_sq, pair.p_qs
    a2 = alpha * alpha
    delta = np.eye(pair.r) - a2 * (p_qs @ p_sq)
    row_qs = p_qs.sum(axis=1)  # p_qs @ e_Nr
    row_sq = p_sq.sum(axis=1)  # p_sq @ e_r
    rhs = np.column_stack([a2 * row_qs + alpha, alpha * row_qs + a2 * (p_qs @ row_sq)])
    sol = np.linalg.solve(delta, rhs)
    x_s = p_sq @ sol[:, 0]
    x_q = sol[:, 1]
    return RawCentrality(x=np.concatenate([x_s, x_q]), n_support=pair.n_support)


def single_mode_normalize(raw: RawCentrality) -> CentralityPair:
    n = raw.n_support
    x = np.asarray(raw.x, dtype=np.float64)
    if not 0 < n < x.size:
        raise DegenerateInputError(f"partition index {n} invalid for {x.size} states")
    xs, xq = x[:n], x[n:]
    ss, sq = xs.sum(), xq.sum()
    if not (ss > 0 and sq > 0):
        raise DegenerateInputError(f"cannot normalize slice with sum {min(ss, sq)}")
    return CentralityPair(pi_s=xs / ss, pi_q=xq / sq)


def eigen_approx(pair: TransitionPair, alpha: float = EIGEN_ALPHA) -> CentralityPair:
    """Eigenvector centrality approximated by Katz centrality at ``alpha`` close to 1."""
    if not 0.9 < alpha < 1:
        raise ParameterError(f"eigen approximation needs alpha in (0.9, 1), got {alpha}")
    return single_mode_normalize(katz_block_inverse(pair, alpha))


def solve_centrality(pair: TransitionPair, config: SolverConfig | None = None) -> CentralityPair:
    config = config or SolverConfig()
    if config.method is Method.POWER:
        return stationary_power(pair, config.tol, config.max_iter)
    if config.method is Method.LINEAR:
        return stationary_linear(pair)
    if config.method is Method.KATZ_CLOSED_FORM:
        return single_mode_normalize(katz_closed_form(pair, config.alpha))
    return single_mode_normalize(katz_block_inverse(pair, config.alpha))
