"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
Errors go to stderr as one line: ``mclwalk: <kind>: <message>``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .affinity import episode_transitions
from .centrality import EIGEN_ALPHA, Method, SolverConfig, solve_centrality
from .classifier import KATZ_ALPHA, classify_katz, classify_mcl, predict
from .errors import MCLError, NumericalError, ParameterError
from .features import build_episode, random_shots
from .io import load_episode, save_episode
from .pooling import centrality_pool_episode
from .walker import estimate_class_distribution, simulate

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _alpha(text):
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {text}")
    return value


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


def _add_walk_args(p, method=True):
    p.add_argument("--episode", required=True, type=Path)
    p.add_argument("--gamma", type=_positive(float), default=20.0)
    p.add_argument("--beta", type=_positive(float), default=10.0)
    if method:
        p.add_argument("--method", choices=[m.value for m in Method], default=Method.KATZ_BLOCK_INVERSE.value)
        p.add_argument("--alpha", type=_alpha, default=None)
        p.add_argument("--tol", type=_positive(float), default=1e-10)
        p.add_argument("--max-iter", type=_positive(int), default=10_000)
    p.add_argument("--output", choices=["json", "table"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mclwalk", description="Bipartite random-walk centrality for dense features.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="class distribution and prediction for one episode")
    _add_walk_args(p)
    p.add_argument("--katz", action="store_true", help=f"MCL-Katz head (default alpha {KATZ_ALPHA})")

    p = sub.add_parser("centrality", help="single-mode centralities pi(S) and pi(q)")
    _add_walk_args(p)

    p = sub.add_parser("pool", help="centrality-weighted pooled feature vectors")
    _add_walk_args(p)

    p = sub.add_parser("simulate", help="Monte Carlo walk statistics")
    _add_walk_args(p, method=False)
    p.add_argument("--steps", type=_positive(int), default=100_000)
    p.add_argument("--trials", type=_positive(int), default=1)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="time solvers across resolutions")
    p.add_argument("--resolutions", type=_positive(int), nargs="+", default=[25, 64, 100, 144])
    p.add_argument("--n", type=_positive(int), default=5)
    p.add_argument("--n-query", type=_positive(int), default=15)
    p.add_argument("--d", type=_positive(int), default=64)
    p.add_argument("--episodes", type=_positive(int), default=bench_mod.MIN_EPISODES)
    p.add_argument("--warmup", type=_positive(int), default=bench_mod.MIN_WARMUP)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", choices=["json", "table"], default="table")

    p = sub.add_parser("gen", help="write a synthetic episode")
    p.add_argument("--n", type=_positive(int), default=5)
    p.add_argument("--k", type=_positive(int), default=1)
    p.add_argument("--d", type=_positive(int), default=64)
    p.add_argument("--r", type=_positive(int), default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--variant", choices=["binary", "text"], default="binary")
    p.add_argument("--output", choices=["json", "table"], default="json")
    return parser


def _solver(args, default_alpha=EIGEN_ALPHA):
    alpha = default_alpha if args.alpha is None else args.alpha
    return SolverConfig(method=args.method, alpha=alpha, tol=args.tol, max_iter=args.max_iter)


def _fmt(values):
    return " ".join(f"{v:.6f}" for v in values)


def _emit(doc, table_lines, output):
    if output == "json":
        print(json.dumps(doc))
    else:
        print("\n".join(table_lines))


def cmd_classify(args):
    episode = load_episode(args.episode)
    if args.katz:
        alpha = KATZ_ALPHA if args.alpha is None else args.alpha
        dist = classify_katz(episode, args.gamma, args.beta, alpha)
        head = "katz"
    else:
        cfg = _solver(args)
        alpha = cfg.alpha
        dist = classify_mcl(episode, args.gamma, args.beta, cfg)
        head = "mcl"
    label = predict(dist)
    doc = {
        "head": head,
        "method": "eigen" if args.katz else args.method,
        "gamma": args.gamma,
        "beta": args.beta,
        "alpha": alpha,
        "probs": dist.probs.tolist(),
        "predicted": label,
    }
    _emit(doc, [f"head      {head} ({doc['method']}, alpha={alpha})", f"probs     {_fmt(dist.probs)}", f"predicted {label}"], args.output)


def cmd_centrality(args):
    episode = load_episode(args.episode)
    cp = solve_centrality(episode_transitions(episode, args.gamma, args.beta), _solver(args))
    doc = {"method": args.method, "pi_s": cp.pi_s.tolist(), "pi_q": cp.pi_q.tolist()}
    _emit(doc, [f"pi_s {_fmt(cp.pi_s)}", f"pi_q {_fmt(cp.pi_q)}"], args.output)


def cmd_pool(args):
    episode = load_episode(args.episode)
    pooled = centrality_pool_episode(episode, args.gamma, args.beta, _solver(args))
    doc = {"query_vec": pooled.query_vec.tolist(), "class_vecs": [v.tolist() for v in pooled.class_vecs]}
    lines = [f"query   {_fmt(pooled.query_vec)}"]
    lines += [f"class {c} {_fmt(v)}" for c, v in enumerate(pooled.class_vecs)]
    _emit(doc, lines, args.output)


def cmd_simulate(args):
    episode = load_episode(args.episode)
    pair = episode_transitions(episode, args.gamma, args.beta)
    stats = simulate(pair, args.steps, args.trials, args.seed)
    dist = estimate_class_distribution(stats, episode.n_classes)
    doc = {
        "steps": stats.total_steps,
        "trials": stats.trials,
        "seed": stats.rng_seed,
        "visits_support": stats.visits_support.tolist(),
        "visits_query": stats.visits_query.tolist(),
        "support_frequencies": stats.support_frequencies.tolist(),
        "probs": dist.probs.tolist(),
    }
    lines = [
        f"steps {stats.total_steps} x trials {stats.trials} (seed {stats.rng_seed})",
        f"support visits {stats.visits_support.sum()}, query visits {stats.visits_query.sum()}",
        f"probs {_fmt(dist.probs)}",
    ]
    _emit(doc, lines, args.output)


def cmd_bench(args):
    report = bench_mod.run_bench(
        args.resolutions, args.n, args.n_query, args.d, args.episodes, args.seed, args.warmup
    )
    print(bench_mod.emit_report(report, args.output))


def cmd_gen(args):
    rng = np.random.default_rng(args.seed)
    shots, query = random_shots(rng, args.n, args.k, args.d, args.r)
    episode = build_episode(shots, query)
    save_episode(episode, args.out, args.variant)
    doc = {"path": str(args.out), "variant": args.variant, "n": args.n, "k": args.k, "d": args.d, "r": args.r, "seed": args.seed}
    _emit(doc, [f"wrote {args.variant} episode N={args.n} K={args.k} d={args.d} r={args.r} to {args.out}"], args.output)


COMMANDS = {
    "classify": cmd_classify,
    "centrality": cmd_centrality,
    "pool": cmd_pool,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "gen": cmd_gen,
}


def _fail(kind, message, code):
    print(f"mclwalk: {kind}: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    try:
        COMMANDS[args.command](args)
    except ParameterError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except NumericalError as exc:
        return _fail("numerical", exc, EXIT_NUMERIC)
    except MCLError as exc:
        return _fail(type(exc).__name__, exc, EXIT_DATA)
    except OSError as exc:
        return _fail("io", exc, EXIT_DATA)
    return 0


if __name__ == "__main__":
    sys.exit(main())
