"""Progressive coordination-game spread and spread estimators.

A *snapshot* fixes every node's threshold, which makes the cascade
deterministic. Since a node with in-degree ``d`` and threshold ``delta``
adopts exactly when ``count >= delta * d``, the cascade depends on ``delta``
only through the integer requirement ``ceil(delta * d)``; snapshots store both.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from . import rng as rngmod
from .graph import Graph
from .thresholds import ThresholdModel, requirement_of, sample_thresholds

DEFAULT_MC_RUNS = 10_000
DEFAULT_SNAPSHOTS = 100


@dataclass(frozen=True, eq=False)
class Snapshot:
    thresholds: np.ndarray
    requirements: np.ndarray
    origin_seed: tuple | None = None


@dataclass(frozen=True)
class SpreadResult:
    active: frozenset
    step_counts: list[int]
    steps: int

    @property
    def size(self) -> int:
        return len(self.active)


def _seed_array(g: Graph, seeds: Iterable[int]) -> np.ndarray:
    arr = np.unique(np.fromiter((int(s) for s in seeds), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.node_count):
        raise IndexError("seed outside 0..node_count-1")
    return arr


def requirements_for(g: Graph, thresholds: np.ndarray) -> np.ndarray:
    return requirement_of(thresholds, g.in_degree)


def generate_snapshot(g: Graph, model: ThresholdModel, rng, origin_seed=None) -> Snapshot:
    """Draw one threshold per node (i.i.d.) and derive integer requirements."""
    rng = rngmod.as_generator(rng)
    th = sample_thresholds(model, rng, g.node_count)
    req = requirements_for(g, th)
    th.setflags(write=False)
    req.setflags(write=False)
    return Snapshot(th, req, origin_seed)


def snapshot_from_thresholds(g: Graph, thresholds) -> Snapshot:
    th = np.asarray(thresholds, dtype=float)
    if th.shape != (g.node_count,):
        raise ValueError("need exactly one threshold per node")
    return Snapshot(th, requirements_for(g, th))


class SnapshotPool:
    """A fixed list of snapshots stored as stacked arrays.

    Snapshot ``i`` is drawn from substream ``(master_seed, tag, i)``, so a pool
    of size ``R`` is a prefix of any larger pool with the same seed and tag.
    """

    def __init__(self, g: Graph, snapshots: Sequence[Snapshot]):
        if not len(snapshots):
            raise ValueError("at least one snapshot is required")
        self.graph = g
        self.thresholds = np.stack([s.thresholds for s in snapshots])
        self.requirements = np.ascontiguousarray(
            np.stack([s.requirements for s in snapshots]), dtype=np.int64)
        self.origins = [s.origin_seed for s in snapshots]

    @classmethod
    def generate(cls, g: Graph, model: ThresholdModel, count: int, master_seed: int,
                 tag=rngmod.SELECT) -> "SnapshotPool":
        snaps = [
            generate_snapshot(g, model, rngmod.substream(master_seed, tag, i),
                              origin_seed=(master_seed, tag, i))
            for i in range(count)
        ]
        return cls(g, snaps)

    def __len__(self) -> int:
        return self.requirements.shape[0]

    def __getitem__(self, i: int) -> Snapshot:
        return Snapshot(self.thresholds[i], self.requirements[i], self.origins[i])

    def dump_thresholds(self, path) -> None:
        """Text dump, one snapshot per row, column = dense node id."""
        np.savetxt(path, self.thresholds, fmt="%.17g")


def as_pool(g: Graph, snapshots) -> SnapshotPool:
    if isinstance(snapshots, SnapshotPool):
        return snapshots
    if isinstance(snapshots, Snapshot):
        snapshots = [snapshots]
    return SnapshotPool(g, list(snapshots))


def _ranges(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(int(workers), total))
    bounds = np.linspace(0, total, workers + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def parallel_sum(fn, total: int, workers: int = 1):
    """Sum ``fn(lo, hi)`` over a partition of ``range(total)``.

    Results are integers, so the reduction is exact and independent of the
    partition.
    """
    parts = _ranges(total, workers)
    if len(parts) <= 1:
        return fn(0, total)
    with ThreadPoolExecutor(max_workers=len(parts)) as ex:
        results = list(ex.map(lambda ab: fn(*ab), parts))
    out = results[0]
    for r in results[1:]:
        out = tuple(a + b for a, b in zip(out, r)) if isinstance(out, tuple) else out + r
    return out


def simulate(g: Graph, snapshot: Snapshot, seeds: Iterable[int]) -> SpreadResult:
    """Deterministic cascade from ``seeds`` under fixed thresholds.

    Rounds are synchronous: a node activated in round ``t`` starts counting
    toward its out-neighbors' requirements in round ``t + 1``.
    """
    s = _seed_array(g, seeds)
    req = np.array(snapshot.requirements, dtype=np.int64)  # kernel needs a writable array
    active, rounds, t = K.simulate_one(g.out_indptr, g.out_indices, req, s, g.node_count)
    return SpreadResult(
        frozenset(np.flatnonzero(active).tolist()),
        np.cumsum(rounds).tolist(),
        int(t),
    )


def simulate_direct(g: Graph, thresholds, seeds: Iterable[int]) -> frozenset:
    """Reference cascade evaluating ``count >= delta * d`` directly on reals.

    Quadratic per round; used only to cross-check the integer-requirement path.
    """
    th = np.asarray(thresholds, dtype=float)
    indeg = g.in_degree
    active = set(int(s) for s in seeds)
    while True:
        add = []
        for v in range(g.node_count):
            if v in active or indeg[v] == 0:
                continue
            x = sum(1 for u in g.influence_neighbors(v) if u in active)
            if x >= th[v] * indeg[v]:
                add.append(v)
        if not add:
            return frozenset(active)
        active.update(add)


def _model_args(model: ThresholdModel) -> tuple[int, float]:
    return int(model.variant), float(model.param)


def estimate_sigma_mc(g: Graph, model: ThresholdModel, seeds: Iterable[int],
                      R: int = DEFAULT_MC_RUNS, rng=None, workers: int = 1
                      ) -> tuple[float, float]:
    """Mean and standard error of the spread over ``R`` fresh threshold draws."""
    if R < 1:
        raise ValueError("R must be at least 1")
    s = _seed_array(g, seeds)
    if s.size == 0:
        return 0.0, 0.0
    key = rngmod.hash_key(rngmod.as_generator(rng))
    variant, param = _model_args(model)
    indeg = g.in_degree.astype(np.int64)

    def run(lo, hi):
        return K.mc_spread_sums(g.out_indptr, g.out_indices, indeg, variant, param,
                                s, key, lo, hi)

    s1, s2 = parallel_sum(run, R, workers)
    mean = s1 / R
    if R == 1:
        return mean, 0.0
    var = max(s2 - s1 * s1 / R, 0.0) / (R - 1)
    return mean, math.sqrt(var / R)


def spread_sum_snapshots(g: Graph, pool: SnapshotPool, seeds: np.ndarray, workers: int = 1) -> int:
    def run(lo, hi):
        return K.snapshot_spread_sum(g.out_indptr, g.out_indices, pool.requirements,
                                     seeds, lo, hi)

    return int(parallel_sum(run, len(pool), workers))


def estimate_sigma_snapshots(g: Graph, snapshots, seeds: Iterable[int], workers: int = 1) -> float:
    """Average spread over a fixed snapshot list."""
    pool = as_pool(g, snapshots)
    s = _seed_array(g, seeds)
    return spread_sum_snapshots(g, pool, s, workers) / len(pool)


class EvalCache:
    """Incremental per-snapshot state for the committed seed set.

    For each snapshot holds the active mask and, for every node, the number of
    active in-neighbors. ``marginal_gain`` runs an overlay cascade from the
    candidate without touching the stored state; ``commit_seed`` folds it in.
    """

    def __init__(self, g: Graph, snapshots, workers: int = 1):
        self.graph = g
        self.pool = as_pool(g, snapshots)
        self.workers = workers
        r, n = self.pool.requirements.shape
        self.active = np.zeros((r, n), dtype=np.uint8)
        self.counts = np.zeros((r, n), dtype=np.int32)
        self.committed: list[int] = []
        self._committed_set: set[int] = set()
        self.total = 0  # sum over snapshots of |active|

    def __len__(self) -> int:
        return len(self.pool)

    @property
    def sigma(self) -> float:
        return self.total / len(self.pool)

    def _check(self, u: int) -> int:
        u = int(u)
        if not 0 <= u < self.graph.node_count:
            raise IndexError(f"node {u} out of range")
        if u in self._committed_set:
            raise ValueError(f"node {u} is already committed")
        return u

    def gain_sum(self, u: int) -> int:
        """Integer total of new activations over all snapshots."""
        u = self._check(u)
        g = self.graph

        def run(lo, hi):
            return K.cache_gain_sum(g.out_indptr, g.out_indices, self.pool.requirements,
                                    self.active, self.counts, u, lo, hi)

        return int(parallel_sum(run, len(self.pool), self.workers))

    def marginal_gain(self, u: int) -> float:
        return self.gain_sum(u) / len(self.pool)

    def commit_seed(self, u: int) -> int:
        """Commit ``u``; returns the integer gain summed over snapshots."""
        u = self._check(u)
        g = self.graph

        def run(lo, hi):
            return K.cache_commit(g.out_indptr, g.out_indices, self.pool.requirements,
                                  self.active, self.counts, u, lo, hi)

        gain = int(parallel_sum(run, len(self.pool), self.workers))
        self.committed.append(u)
        self._committed_set.add(u)
        self.total += gain
        return gain

    def audit(self) -> bool:
        """Check cached state against from-scratch simulation of every snapshot."""
        g = self.graph
        for i in range(len(self.pool)):
            res = simulate(g, self.pool[i], self.committed)
            mask = np.zeros(g.node_count, dtype=bool)
            mask[list(res.active)] = True
            if not np.array_equal(mask, self.active[i].astype(bool)):
                return False
            cnt = np.zeros(g.node_count, dtype=np.int64)
            np.add.at(cnt, g.out_indices[np.isin(np.repeat(np.arange(g.node_count), g.out_degree),
                                                 np.flatnonzero(mask))], 1)
            if not np.array_equal(cnt, self.counts[i]):
                return False
        return True


def marginal_gain(cache: EvalCache, u: int) -> float:
    return cache.marginal_gain(u)


def commit_seed(cache: EvalCache, u: int) -> EvalCache:
    cache.commit_seed(u)
    return cache
