"""Batch experiment runner.

Subcommands ``select``, ``eval``, ``check`` and ``oracle``. Output is CSV
(``select``, ``eval``, ``oracle``) or a short text report (``check``).
Exit codes: 0 success, 1 I/O, 2 usage, 3 internal consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .diffusion import DEFAULT_MC_RUNS, DEFAULT_SNAPSHOTS, EvalCache, SnapshotPool, estimate_sigma_mc
from .graph import EdgeListError, Graph, read_edge_list
from .oracle import (
    MAX_POWERSET_NODES,
    OracleGuardError,
    assignment_count,
    MAX_ASSIGNMENTS,
    brute_force_opt,
    check_monotone_submodular,
    exact_sigma,
    find_submodularity_violation,
)
from .selection import ALGORITHMS, evaluate_curve, select
from .thresholds import Concavity, ThresholdModel, is_concave_cdf, parse_model

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3

SELECT_HEADER = ["k", "seed_id", "cumulative_sigma_estimate", "elapsed_ms"]
EVAL_HEADER = ["sigma_estimate", "stderr", "estimator", "runs"]


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    graph: str | None = None
    directed: bool = False
    model: str = "linear"
    algo: str = "greedypp"
    k: int = 10
    r: int = DEFAULT_MC_RUNS
    snapshots: int = DEFAULT_SNAPSHOTS
    seed: int = 0
    estimator: str = "snapshots"
    out: str | None = None
    workers: int = 1

    def threshold_model(self) -> ThresholdModel:
        try:
            return parse_model(self.model)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def load_graph(self) -> Graph:
        if not self.graph:
            raise UsageError("--graph is required")
        return read_edge_list(self.graph, self.directed)


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def select_rows(cfg: ExperimentConfig, g: Graph | None = None) -> list[list]:
    """Run one selection and its evaluation pass; header included."""
    model = cfg.threshold_model()
    if cfg.algo.lower() not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {cfg.algo!r}; choose from {', '.join(ALGORITHMS)}")
    if cfg.estimator not in ("mc", "snapshots"):
        raise UsageError(f"unknown estimator {cfg.estimator!r}")
    g = cfg.load_graph() if g is None else g
    if not 1 <= cfg.k <= g.node_count:
        raise UsageError(f"--k must lie in 1..{g.node_count}")
    sel = select(cfg.algo, g, model, cfg.k, R=cfg.r, snapshots=cfg.snapshots, seed=cfg.seed,
                 workers=cfg.workers)
    runs = cfg.snapshots if cfg.estimator == "snapshots" else cfg.r
    curve = evaluate_curve(g, model, sel.seeds, cfg.estimator, runs, cfg.seed, cfg.workers)
    rows: list[list] = [SELECT_HEADER]
    for i, (s, sig, dt) in enumerate(zip(sel.seeds, curve, sel.wall_time), 1):
        rows.append([i, int(g.labels[s]), _fmt(sig), f"{dt * 1000:.3f}"])
    rows.append(["total", "", _fmt(curve[-1]), f"{sel.total_time * 1000:.3f}"])
    return rows


def cmd_select(cfg: ExperimentConfig) -> str:
    return _csv(select_rows(cfg))


def read_seeds(path: str, g: Graph) -> list[int]:
    """Original node ids, one per line; returns dense ids."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                label = int(s)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad node id {s!r}") from None
            try:
                out.append(g.index_of(label))
            except KeyError:
                raise UsageError(f"unknown node id {label}") from None
    return out


def cmd_eval(cfg: ExperimentConfig, seeds_path: str) -> str:
    model = cfg.threshold_model()
    g = cfg.load_graph()
    seeds = read_seeds(seeds_path, g)
    if cfg.estimator == "mc":
        mean, se = estimate_sigma_mc(g, model, seeds, cfg.r,
                                     rngmod.substream(cfg.seed, rngmod.EVALUATE), cfg.workers)
        runs = cfg.r
    elif cfg.estimator == "snapshots":
        pool = SnapshotPool.generate(g, model, cfg.snapshots, cfg.seed, rngmod.EVALUATE)
        cache = EvalCache(g, pool, cfg.workers)
        for s in dict.fromkeys(seeds):
            cache.commit_seed(s)
        sizes = cache.active.sum(axis=1, dtype=np.int64)
        mean = float(sizes.sum() / len(pool))
        se = float(sizes.std(ddof=1) / np.sqrt(len(pool))) if len(pool) > 1 else 0.0
        runs = cfg.snapshots
    else:
        raise UsageError(f"unknown estimator {cfg.estimator!r}")
    return _csv([EVAL_HEADER, [_fmt(mean), _fmt(se), cfg.estimator, runs]])


def cmd_check(cfg: ExperimentConfig, budget: int = 500) -> tuple[str, int]:
    """Concavity judgment plus oracle evidence; exit 3 if they disagree."""
    model = cfg.threshold_model()
    judgment = is_concave_cdf(model)
    concave = judgment is Concavity.CONCAVE_CONTINUOUS_INCREASING
    lines = [f"model: {model.spec}"]
    lines.append("concave: yes" if concave else f"concave: no ({judgment.value})")
    code = EXIT_OK
    if cfg.graph:
        g = cfg.load_graph()
        if g.node_count > MAX_POWERSET_NODES or assignment_count(g) > MAX_ASSIGNMENTS:
            lines.append("oracle: skipped, graph exceeds exhaustive-enumeration guards")
            return "\n".join(lines) + "\n", code
        rep = check_monotone_submodular(g, model)
        if rep.holds:
            lines.append("submodular: holds")
            if not concave:
                lines.append("note: no violation on this graph; the converse only "
                             "guarantees one on some graph")
        else:
            lines.append(f"violation found: {rep}")
            if concave:
                code = EXIT_INCONSISTENT
    else:
        w = find_submodularity_violation(model, budget, cfg.seed)
        if w is None:
            lines.append(f"submodular: holds on all {budget} searched graphs")
            if not concave:
                lines.append(f"note: no violation within a budget of {budget} graphs")
        else:
            lines.append(f"violation found on a {w.graph.node_count}-node graph")
            lines.append(w.to_text().rstrip("\n"))
            if concave:
                code = EXIT_INCONSISTENT
    return "\n".join(lines) + "\n", code


def cmd_oracle(cfg: ExperimentConfig, seeds_path: str | None) -> str:
    model = cfg.threshold_model()
    g = cfg.load_graph()
    rows: list[list] = [["quantity", "seeds", "value"]]
    try:
        if seeds_path:
            seeds = read_seeds(seeds_path, g)
            val = exact_sigma(g, model, seeds)
            rows.append(["exact_sigma", " ".join(str(g.labels[s]) for s in seeds), _fmt(val)])
        if cfg.k:
            best, val = brute_force_opt(g, model, cfg.k)
            rows.append(["brute_force_opt", " ".join(str(g.labels[s]) for s in best), _fmt(val)])
    except (OracleGuardError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return _csv(rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", metavar="PATH")
    common.add_argument("--directed", action="store_true")
    common.add_argument("--model", default="linear", metavar="SPEC",
                        help="linear | concave | convex | majority:<d0> | powerlaw:<gamma>")
    common.add_argument("--algo", default="greedypp", metavar="NAME")
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--r", type=int, default=DEFAULT_MC_RUNS)
    common.add_argument("--snapshots", type=int, default=DEFAULT_SNAPSHOTS)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--estimator", choices=["mc", "snapshots"], default="snapshots")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--workers", type=int, default=1)

    p = argparse.ArgumentParser(prog="cgim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("select", parents=[common], help="pick top-k seeds and report spread")
    e = sub.add_parser("eval", parents=[common], help="estimate spread of a seed file")
    e.add_argument("--seeds-file", required=True)
    c = sub.add_parser("check", parents=[common], help="concavity vs. oracle submodularity")
    c.add_argument("--budget", type=int, default=500)
    o = sub.add_parser("oracle", parents=[common], help="exact sigma / brute-force optimum")
    o.add_argument("--seeds-file")
    return p


def _config(ns) -> ExperimentConfig:
    return ExperimentConfig(
        graph=ns.graph, directed=ns.directed, model=ns.model, algo=ns.algo,
        k=ns.k if ns.k is not None else (10 if ns.command == "select" else 0),
        r=ns.r, snapshots=ns.snapshots, seed=ns.seed, estimator=ns.estimator,
        out=ns.out, workers=ns.workers,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = _config(ns)
    code = EXIT_OK
    try:
        if ns.command == "select":
            text = cmd_select(cfg)
        elif ns.command == "eval":
            text = cmd_eval(cfg, ns.seeds_file)
        elif ns.command == "check":
            text, code = cmd_check(cfg, ns.budget)
        else:
            text = cmd_oracle(cfg, ns.seeds_file)
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (OSError, EdgeListError) as exc:
        print(f"cgim: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
