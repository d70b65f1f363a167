"""Top-k seed selection: Monte Carlo greedy, lazy snapshot greedy, baselines.

All argmax ties resolve toward the lowest node id, so every selector is a
deterministic function of its inputs and seed.
"""
from __future__ import annotations

import heapq
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from . import rng as rngmod
from .diffusion import (
    DEFAULT_MC_RUNS,
    DEFAULT_SNAPSHOTS,
    EvalCache,
    SnapshotPool,
    _ranges,
    estimate_sigma_mc,
)
from .graph import Graph
from .thresholds import ThresholdModel

ALGORITHMS = ("greedy", "greedypp", "degree", "pagerank", "random")


@dataclass
class SeedSelection:
    seeds: list[int]
    gain_curve: list[float]
    algorithm: str
    wall_time: list[float]
    notes: list[str] = field(default_factory=list)

    @property
    def total_time(self) -> float:
        return float(sum(self.wall_time))


def _check_k(g: Graph, k: int) -> int:
    k = int(k)
    if not 1 <= k <= g.node_count:
        raise ValueError(f"k must lie in 1..{g.node_count}, got {k}")
    return k


def greedy(g: Graph, model: ThresholdModel, k: int, R: int = DEFAULT_MC_RUNS,
           rng=None, workers: int = 1) -> SeedSelection:
    """Plain greedy with fresh Monte Carlo estimates.

    Every round re-estimates sigma(S + v) from scratch with ``R`` fresh runs
    for each remaining candidate ``v``. Within a round all candidates share
    one random key (common random numbers), so run ``r`` uses the same
    thresholds for every candidate and the argmax compares like with like.
    Keys depend only on ``rng``, never on ``workers``.
    """
    k = _check_k(g, k)
    if R < 1:
        raise ValueError("R must be at least 1")
    rng = rngmod.as_generator(rng)
    variant, param = int(model.variant), float(model.param)
    indeg = g.in_degree.astype(np.int64)
    chosen: list[int] = []
    taken = np.zeros(g.node_count, dtype=bool)
    curve, times = [], []
    for _ in range(k):
        t0 = time.perf_counter()
        cands = np.flatnonzero(~taken).astype(np.int64)
        keys = np.full(len(cands), rngmod.hash_key(rng), dtype=np.int64)
        base = np.asarray(chosen, dtype=np.int64)

        def run(lo, hi):
            return K.mc_candidate_sums(g.out_indptr, g.out_indices, indeg, variant, param,
                                       base, cands[lo:hi], keys[lo:hi], R)

        parts = _ranges(len(cands), workers)
        if len(parts) > 1:
            with ThreadPoolExecutor(max_workers=len(parts)) as ex:
                sums = np.concatenate(list(ex.map(lambda ab: run(*ab), parts)))
        else:
            sums = run(0, len(cands))
        best = int(np.argmax(sums))  # first maximum = lowest id
        u = int(cands[best])
        chosen.append(u)
        taken[u] = True
        curve.append(sums[best] / R)
        times.append(time.perf_counter() - t0)
    return SeedSelection(chosen, curve, "greedy", times)


def greedy_pp(g: Graph, model: ThresholdModel, k: int, R: int = DEFAULT_SNAPSHOTS,
              rng=None, workers: int = 1, pool: SnapshotPool | None = None) -> SeedSelection:
    """Lazy-forward greedy over a fixed pool of ``R`` snapshots.

    Stale gains sit in a max-heap initialised to +inf; the top is recomputed
    against the incremental cache and reinserted until a node whose gain is
    fresh for the current round reaches the top. Gains are compared as
    integer sums over the pool, so ties are exact.

    ``rng`` may be an int master seed (snapshot ``i`` uses substream ``i``)
    or a Generator from which a master seed is drawn. A prebuilt ``pool``
    overrides both.
    """
    k = _check_k(g, k)
    t0 = time.perf_counter()
    if pool is None:
        if R < 1:
            raise ValueError("R must be at least 1")
        master = rng if isinstance(rng, (int, np.integer)) else rngmod.hash_key(rngmod.as_generator(rng))
        pool = SnapshotPool.generate(g, model, R, int(master), rngmod.SELECT)
    cache = EvalCache(g, pool, workers)
    heap = [(float("-inf"), v) for v in range(g.node_count)]
    fresh = np.full(g.node_count, -1, dtype=np.int64)
    curve, times = [], []
    lookups = 0
    for i in range(k):
        while True:
            _, v = heap[0]
            if fresh[v] == i:
                heapq.heappop(heap)
                cache.commit_seed(v)
                break
            heapq.heapreplace(heap, (-cache.gain_sum(v), v))
            fresh[v] = i
            lookups += 1
        curve.append(cache.sigma)
        t1 = time.perf_counter()
        times.append(t1 - t0)
        t0 = t1
    sel = SeedSelection(list(cache.committed), curve, "greedypp", times)
    sel.notes.append(f"gain evaluations: {lookups}")
    return sel


def _top_k(scores: np.ndarray, k: int) -> list[int]:
    order = np.lexsort((np.arange(len(scores)), -np.asarray(scores, dtype=float)))
    return [int(v) for v in order[:k]]


def _ranked_times(t0: float, k: int) -> list[float]:
    # a ranking is paid for once, before the first pick
    return [time.perf_counter() - t0] + [0.0] * (k - 1)


def degree_heuristic(g: Graph, k: int) -> SeedSelection:
    """Largest out-degree first."""
    k = _check_k(g, k)
    t0 = time.perf_counter()
    seeds = _top_k(g.out_degree, k)
    return SeedSelection(seeds, [], "degree", _ranked_times(t0, k))


def pagerank_scores(g: Graph, alpha: float = 0.9, tol: float = 1e-8,
                    max_iter: int = 100) -> tuple[np.ndarray, bool]:
    """PageRank of the edge-reversed graph by power iteration.

    ``alpha`` is the probability of following a link; dangling nodes spread
    their mass uniformly. Returns the scores and whether the L1 change fell
    below ``tol``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    n = g.node_count
    # a reversed edge v -> u exists for every original edge u -> v, so the
    # reversed out-degree of u is its original in-degree
    rdeg = g.in_degree.astype(float)
    dangling = rdeg == 0
    src = np.repeat(np.arange(n), g.out_degree)
    x = np.full(n, 1.0 / n)
    converged = False
    for _ in range(max_iter):
        share = np.divide(x, rdeg, out=np.zeros(n), where=~dangling)
        new = alpha * np.bincount(src, weights=share[g.out_indices], minlength=n)
        new += (alpha * x[dangling].sum() + (1.0 - alpha)) / n
        new /= new.sum()
        err = np.abs(new - x).sum()
        x = new
        if err < tol:
            converged = True
            break
    return x, converged


def pagerank_heuristic(g: Graph, k: int, alpha: float = 0.9, tol: float = 1e-8,
                       max_iter: int = 100) -> SeedSelection:
    k = _check_k(g, k)
    t0 = time.perf_counter()
    scores, ok = pagerank_scores(g, alpha, tol, max_iter)
    sel = SeedSelection(_top_k(scores, k), [], "pagerank", _ranked_times(t0, k))
    if not ok:
        msg = f"PageRank did not converge within {max_iter} iterations"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        sel.notes.append(msg)
    return sel


def random_heuristic(g: Graph, k: int, rng=None) -> SeedSelection:
    k = _check_k(g, k)
    t0 = time.perf_counter()
    rng = rngmod.as_generator(rng)
    seeds = rng.choice(g.node_count, size=k, replace=False).tolist()
    return SeedSelection([int(s) for s in seeds], [], "random", _ranked_times(t0, k))


def evaluate_curve(g: Graph, model: ThresholdModel, seeds, estimator: str = "snapshots",
                   R: int = DEFAULT_SNAPSHOTS, master_seed: int = 0, workers: int = 1,
                   pool: SnapshotPool | None = None) -> list[float]:
    """Spread estimate after each prefix of ``seeds``.

    ``snapshots`` uses a held-out pool (substream tag EVALUATE) shared by
    every algorithm evaluated with the same seed; ``mc`` runs ``R`` fresh
    simulations per prefix.
    """
    seeds = [int(s) for s in seeds]
    if estimator == "snapshots":
        if pool is None:
            pool = SnapshotPool.generate(g, model, R, master_seed, rngmod.EVALUATE)
        cache = EvalCache(g, pool, workers)
        out = []
        for s in seeds:
            cache.commit_seed(s)
            out.append(cache.sigma)
        return out
    if estimator == "mc":
        out = []
        for j in range(1, len(seeds) + 1):
            rng = rngmod.substream(master_seed, rngmod.EVALUATE, j)
            out.append(estimate_sigma_mc(g, model, seeds[:j], R, rng, workers)[0])
        return out
    raise ValueError(f"unknown estimator {estimator!r}")


def select(algorithm: str, g: Graph, model: ThresholdModel, k: int, *, R: int = DEFAULT_MC_RUNS,
           snapshots: int = DEFAULT_SNAPSHOTS, seed: int = 0, workers: int = 1,
           alpha: float = 0.9) -> SeedSelection:
    """Dispatch by CLI algorithm name, with randomness derived from ``seed``."""
    name = algorithm.lower()
    if name == "greedy":
        return greedy(g, model, k, R, rngmod.substream(seed, rngmod.SELECT), workers)
    if name == "greedypp":
        return greedy_pp(g, model, k, snapshots, seed, workers)
    if name == "degree":
        return degree_heuristic(g, k)
    if name == "pagerank":
        return pagerank_heuristic(g, k, alpha)
    if name == "random":
        return random_heuristic(g, k, rngmod.substream(seed, rngmod.SELECT))
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
