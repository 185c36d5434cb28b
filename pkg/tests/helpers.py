import numpy as np

from mclwalk import build_episode, episode_transitions
from mclwalk.features import random_shots


def random_episode(rng, n_classes, r, d, k_shots=1):
    shots, query = random_shots(rng, n_classes, k_shots, d, r)
    return build_episode(shots, query)


def random_pair(rng, n_classes, r, d, gamma=20.0, beta=10.0):
    return episode_transitions(random_episode(rng, n_classes, r, d), gamma, beta)


def dense_eigen_pi_s(pair):
    """Test-only oracle: Perron eigenvector of the dense P at eigenvalue 1, restricted to S."""
    n = pair.n_support
    P = np.zeros((pair.n_states, pair.n_states))
    P[:n, n:] = pair.p_sq
    P[n:, :n] = pair.p_qs
    w, V = np.linalg.eig(P)
    x = np.real(V[:, np.argmin(np.abs(w - 1.0))])
    return x[:n] / x[:n].sum(), x[n:] / x[n:].sum()


def dense_P(pair):
    n = pair.n_support
    P = np.zeros((pair.n_states, pair.n_states))
    P[:n, n:] = pair.p_sq
    P[n:, :n] = pair.p_qs
    return P


def truncated_katz_series(P, alpha, T):
    """sum_{t=1}^T alpha^t P^t e, by repeated mat-vec."""
    v = np.ones(P.shape[0])
    acc = np.zeros_like(v)
    scale = 1.0
    for _ in range(T):
        v = P @ v
        scale *= alpha
        acc += scale * v
    return acc


def truncated_accessibility(P, n_support, n_classes, T):
    """Eq. 6 ratio truncated at horizon T: class visits over support visits, uniform starts."""
    v = np.ones(P.shape[0])
    acc = np.zeros(P.shape[0])
    for _ in range(T):
        v = P @ v
        acc += v
    support = acc[:n_support]
    return support.reshape(n_classes, -1).sum(axis=1) / support.sum()
