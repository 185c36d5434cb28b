"""Solver timing across feature-map resolutions.

Every resolution gets ``warmup + episodes`` synthetic 1-shot episodes of
unit-norm random features, generated up front from ``seed``. Each episode
holds ``n_query`` query images per class; the time for one episode is the
sum over its query images of affinity, transitions, solve and class
scoring. Only the last ``episodes`` episodes are recorded.
"""
from __future__ import annotations

import json
import platform
import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .affinity import build_transitions, cosine_affinity
from .centrality import EIGEN_ALPHA, eigen_approx, stationary_linear, stationary_power
from .classifier import class_mass
from .errors import NumericalError, ParameterError

__all__ = [
    "SOLVERS",
    "AGREEMENT_TOL",
    "BenchRow",
    "BenchReport",
    "make_workload",
    "run_bench",
    "emit_report",
]

AGREEMENT_TOL = 2e-3
MIN_EPISODES = 30
MIN_WARMUP = 5


def _dense_inverse(pair):
    n, m = pair.n_support, pair.n_states
    P = np.zeros((m, m))
    P[:n, n:] = pair.p_sq
    P[n:, :n] = pair.p_qs
    inv = np.linalg.inv(np.eye(m) - EIGEN_ALPHA * P)
    x = inv.sum(axis=1) - 1.0
    return x[:n] / x[:n].sum()


SOLVERS = {
    "dense_inverse": _dense_inverse,
    "lstsq": lambda pair: stationary_linear(pair).pi_s,
    "power": lambda pair: stationary_power(pair).pi_s,
    "block_katz": lambda pair: eigen_approx(pair).pi_s,
}


@dataclass(frozen=True)
class BenchRow:
    solver: str
    r: int
    n: int
    mean_ms: float
    std_ms: float
    episodes: int


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    env: str = ""

    def to_dict(self) -> dict:
        return {"rows": [asdict(row) for row in self.rows], "env": self.env}

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchReport":
        return cls(rows=[BenchRow(**row) for row in doc["rows"]], env=doc["env"])

    def mean_ms(self, solver: str, r: int) -> float:
        for row in self.rows:
            if row.solver == solver and row.r == r:
                return row.mean_ms
        raise KeyError((solver, r))


def environment_note() -> str:
    return f"python {platform.python_version()}; numpy {np.__version__}; {platform.machine()}; single-threaded driver"


def make_workload(rng: np.random.Generator, r: int, n_classes: int, n_query: int, d: int):
    """Unit-norm supports ``(d, N*r)`` and queries ``(N*n_query, d, r)`` for one episode."""
    support = rng.standard_normal((d, n_classes * r))
    queries = rng.standard_normal((n_classes * n_query, d, r))
    support /= np.linalg.norm(support, axis=0, keepdims=True)
    queries /= np.linalg.norm(queries, axis=1, keepdims=True)
    return support, queries


def _classify_all(solve, support, queries, n_classes, gamma, beta):
    out = []
    for q in queries:
        pair = build_transitions(cosine_affinity(q, support), gamma, beta)
        out.append(class_mass(solve(pair), n_classes).probs)
    return np.array(out)


def run_bench(
    resolutions,
    n_classes: int = 5,
    n_query: int = 15,
    d: int = 64,
    episodes: int = MIN_EPISODES,
    seed: int = 0,
    warmup: int = MIN_WARMUP,
    gamma: float = 20.0,
    beta: float = 10.0,
    solvers=None,
) -> BenchReport:
    if min(n_classes, n_query, d) < 1 or not resolutions or min(resolutions) < 1:
        raise ParameterError("resolutions, n_classes, n_query and d must be positive")
    if episodes < MIN_EPISODES or warmup < MIN_WARMUP:
        raise ParameterError(f"need at least {MIN_EPISODES} timed and {MIN_WARMUP} warm-up episodes")
    solvers = dict(SOLVERS if solvers is None else solvers)
    rng = np.random.default_rng(seed)
    report = BenchReport(env=environment_note())
    for r in resolutions:
        workload = [make_workload(rng, r, n_classes, n_query, d) for _ in range(warmup + episodes)]
        times = {name: [] for name in solvers}
        for i, (support, queries) in enumerate(workload):
            results = {}
            for name, solve in solvers.items():
                t0 = time.perf_counter()
                results[name] = _classify_all(solve, support, queries, n_classes, gamma, beta)
                elapsed = (time.perf_counter() - t0) * 1e3
                if i >= warmup:
                    times[name].append(elapsed)
            stacked = np.stack(list(results.values()))
            gap = float(np.max(stacked.max(axis=0) - stacked.min(axis=0)))
            if gap > AGREEMENT_TOL:
                raise NumericalError(f"solvers disagree by {gap:.2e} at r={r}, episode {i}")
        for name, ts in times.items():
            report.rows.append(
                BenchRow(name, int(r), int(n_classes), statistics.fmean(ts), statistics.stdev(ts), len(ts))
            )
    return report


_COLUMNS = ("solver", "r", "n", "mean_ms", "std_ms", "episodes")


def emit_report(report: BenchReport, format: str = "table") -> str:
    if format == "json":
        return json.dumps(report.to_dict())
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")
    lines = ["{:<14} {:>5} {:>3} {:>11} {:>10} {:>8}".format(*_COLUMNS)]
    for row in report.rows:
        lines.append(
            f"{row.solver:<14} {row.r:>5} {row.n:>3} {row.mean_ms:>11.3f} {row.std_ms:>10.3f} {row.episodes:>8}"
        )
    if report.env:
        lines.append(f"# {report.env}")
    return "\n".join(lines)
