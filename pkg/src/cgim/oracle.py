"""Exact spread on tiny graphs and brute-force checks built on it.

The cascade depends on a node's threshold only through its integer
requirement, so the expectation over continuous thresholds reduces to a
finite sum over joint requirement assignments, each weighted by the product
of per-node requirement probabilities.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .graph import Graph
from .thresholds import ThresholdModel, parse_model, requirement_distribution

MAX_ASSIGNMENTS = 10**7
MAX_SUBSETS = 10**5
MAX_POWERSET_NODES = 8


class OracleGuardError(ValueError):
    """The instance is too large for exhaustive enumeration."""


def assignment_count(g: Graph) -> int:
    """Size of the enumeration bound, prod(in_degree + 1)."""
    return math.prod(int(d) + 1 for d in g.in_degree)


def _check_guard(g: Graph) -> None:
    c = assignment_count(g)
    if c > MAX_ASSIGNMENTS:
        raise OracleGuardError(
            f"prod(in_degree + 1) = {c} exceeds the assignment bound {MAX_ASSIGNMENTS}")


def requirement_support(g: Graph, model: ThresholdModel):
    """Per-node (values, probabilities) of the integer requirement, padded."""
    n = g.node_count
    vals, probs = [], []
    for d in g.in_degree:
        if d == 0:
            vals.append([1])
            probs.append([1.0])
            continue
        p = requirement_distribution(model, int(d))
        nz = np.flatnonzero(p > 0)
        vals.append(nz.tolist())
        probs.append(p[nz].tolist())
    width = max((len(v) for v in vals), default=1)
    support = np.zeros((n, width), dtype=np.int64)
    mass = np.zeros((n, width))
    sizes = np.zeros(n, dtype=np.int64)
    for i, (v, p) in enumerate(zip(vals, probs)):
        support[i, : len(v)] = v
        mass[i, : len(p)] = p
        sizes[i] = len(v)
    return support, mass, sizes


def exact_sigma_many(g: Graph, model: ThresholdModel, seed_sets: Sequence[Iterable[int]]) -> np.ndarray:
    """Exact expected spread for each seed set in one enumeration pass."""
    _check_guard(g)
    sets = [sorted(set(int(s) for s in ss)) for ss in seed_sets]
    for ss in sets:
        if ss and (ss[0] < 0 or ss[-1] >= g.node_count):
            raise IndexError("seed outside 0..node_count-1")
    width = max((len(s) for s in sets), default=0)
    mat = np.zeros((len(sets), max(width, 1)), dtype=np.int64)
    lens = np.zeros(len(sets), dtype=np.int64)
    for i, ss in enumerate(sets):
        mat[i, : len(ss)] = ss
        lens[i] = len(ss)
    if g.node_count == 0:
        return lens.astype(float)
    support, mass, sizes = requirement_support(g, model)
    extra, _ = K.exact_extra_mass(g.out_indptr, g.out_indices, g.node_count,
                                  support, mass, sizes, mat, lens)
    return lens + extra


def exact_sigma(g: Graph, model: ThresholdModel, seeds: Iterable[int]) -> float:
    """sigma(seeds) = |seeds| + sum over non-seeds of Pr[node ends active]."""
    return float(exact_sigma_many(g, model, [list(seeds)])[0])


def _mask_sets(n: int) -> list[list[int]]:
    return [[v for v in range(n) if m >> v & 1] for m in range(1 << n)]


def exact_sigma_powerset(g: Graph, model: ThresholdModel) -> np.ndarray:
    """Exact sigma for every subset, indexed by bitmask."""
    if g.node_count > MAX_POWERSET_NODES:
        raise OracleGuardError(
            f"power-set enumeration limited to {MAX_POWERSET_NODES} nodes, got {g.node_count}")
    return exact_sigma_many(g, model, _mask_sets(g.node_count))


def brute_force_opt(g: Graph, model: ThresholdModel, k: int) -> tuple[tuple[int, ...], float]:
    """Best k-subset by exact sigma; ties go to the lexicographically smallest set."""
    n = g.node_count
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}")
    if math.comb(n, k) > MAX_SUBSETS:
        raise OracleGuardError(f"C({n}, {k}) exceeds the subset bound {MAX_SUBSETS}")
    subsets = list(itertools.combinations(range(n), k))
    vals = exact_sigma_many(g, model, subsets)
    best = int(np.argmax(vals))  # combinations() is lexicographic
    return subsets[best], float(vals[best])


def greedy_exact(g: Graph, model: ThresholdModel, k: int) -> tuple[list[int], float]:
    """Greedy selection driven by exact sigma; ties to the lowest id."""
    chosen: list[int] = []
    value = 0.0
    for _ in range(k):
        cands = [v for v in range(g.node_count) if v not in chosen]
        vals = exact_sigma_many(g, model, [chosen + [v] for v in cands])
        best = int(np.argmax(vals))
        chosen.append(cands[best])
        value = float(vals[best])
    return chosen, value


@dataclass
class Witness:
    """A violation of monotonicity or diminishing returns."""

    kind: str  # "submodular" or "monotone"
    S: tuple[int, ...]
    T: tuple[int, ...]
    v: int | None
    margin_S: float  # sigma(S+v)-sigma(S), or sigma(S) for monotone
    margin_T: float  # sigma(T+v)-sigma(T), or sigma(T) for monotone
    graph: Graph | None = None
    model: ThresholdModel | None = None

    def to_text(self) -> str:
        lines = ["# cgim violation witness", f"kind {self.kind}"]
        if self.model is not None:
            lines.append(f"model {self.model.spec}")
        if self.graph is not None:
            lines.append(f"nodes {self.graph.node_count}")
            lines.append(f"directed {int(self.graph.directed)}")
            lines.append("edges")
            lines += [f"{a} {b}" for a, b in self.graph.edges().tolist()]
            lines.append("end")
        lines.append("S " + " ".join(map(str, self.S)))
        lines.append("T " + " ".join(map(str, self.T)))
        lines.append(f"v {'' if self.v is None else self.v}")
        lines.append(f"margin_S {self.margin_S!r}")
        lines.append(f"margin_T {self.margin_T!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Witness":
        fields: dict[str, str] = {}
        edges: list[tuple[int, int]] = []
        in_edges = False
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line == "edges":
                in_edges = True
                continue
            if line == "end":
                in_edges = False
                continue
            if in_edges:
                a, b = line.split()
                edges.append((int(a), int(b)))
                continue
            key, _, val = line.partition(" ")
            fields[key] = val.strip()
        graph = None
        if "nodes" in fields:
            graph = Graph.from_edges(edges, directed=fields.get("directed", "0") == "1",
                                     n=int(fields["nodes"]))
        ints = lambda s: tuple(int(x) for x in s.split())
        return cls(
            kind=fields["kind"],
            S=ints(fields.get("S", "")),
            T=ints(fields.get("T", "")),
            v=int(fields["v"]) if fields.get("v") else None,
            margin_S=float(fields["margin_S"]),
            margin_T=float(fields["margin_T"]),
            graph=graph,
            model=parse_model(fields["model"]) if "model" in fields else None,
        )


@dataclass
class CheckReport:
    holds: bool
    witness: Witness | None = None

    def __str__(self) -> str:
        if self.holds:
            return "holds"
        w = self.witness
        if w.kind == "monotone":
            return f"monotonicity violated: sigma{set(w.S)}={w.margin_S:.6g} > sigma{set(w.T)}={w.margin_T:.6g}"
        return (f"submodularity violated: S={set(w.S)}, T={set(w.T)}, v={w.v}, "
                f"gain(S)={w.margin_S:.6g} < gain(T)={w.margin_T:.6g}")


def _bits(m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m.bit_length()) if m >> i & 1)


def _subset_reduce(f: np.ndarray, n: int, op) -> np.ndarray:
    """out[T] = op over all submasks S of T of f[S] (sum-over-subsets DP)."""
    out = f.copy()
    masks = np.arange(1 << n)
    for b in range(n):
        idx = masks[(masks >> b) & 1 == 1]
        out[idx] = op(out[idx], out[idx ^ (1 << b)])
    return out


def check_sigma_table(sigma: np.ndarray, n: int, tol: float = 1e-9) -> CheckReport:
    """Monotone/submodular check of a set function given on all bitmasks.

    Monotone: sigma(S) <= sigma(T) + tol for all S subset of T.
    Submodular: gain_v(S) >= gain_v(T) - tol for all S subset of T, v not in T.
    """
    masks = np.arange(1 << n)
    best_below = _subset_reduce(sigma, n, np.maximum)
    bad = np.flatnonzero(best_below > sigma + tol)
    if bad.size:
        T = int(bad[0])
        subs = [S for S in range(T + 1) if S & T == S and sigma[S] > sigma[T] + tol]
        S = subs[0]
        return CheckReport(False, Witness("monotone", _bits(S), _bits(T), None,
                                          float(sigma[S]), float(sigma[T])))
    for v in range(n):
        bit = 1 << v
        gain = np.full(1 << n, np.inf)
        without = masks[(masks & bit) == 0]
        gain[without] = sigma[without | bit] - sigma[without]
        least_below = _subset_reduce(gain, n, np.minimum)
        bad = without[least_below[without] < gain[without] - tol]
        if bad.size:
            T = int(bad[0])
            S = next(S for S in range(T + 1) if S & T == S and gain[S] < gain[T] - tol)
            return CheckReport(False, Witness("submodular", _bits(S), _bits(T), v,
                                              float(gain[S]), float(gain[T])))
    return CheckReport(True)


def check_monotone_submodular(g: Graph, model: ThresholdModel, tol: float = 1e-9) -> CheckReport:
    sigma = exact_sigma_powerset(g, model)
    rep = check_sigma_table(sigma, g.node_count, tol)
    if rep.witness is not None:
        rep.witness.graph = g
        rep.witness.model = model
    return rep


def small_connected_graphs(min_nodes: int = 3, max_nodes: int = 7):
    """Non-isomorphic connected undirected graphs, by node count then edge count."""
    import networkx as nx

    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if min_nodes <= n <= max_nodes and nx.is_connected(G):
            yield Graph.from_edges(list(G.edges()), n=n)


def random_connected_graphs(rng, min_nodes: int = 3, max_nodes: int = 7):
    import networkx as nx

    while True:
        n = int(rng.integers(min_nodes, max_nodes + 1))
        p = float(rng.uniform(0.2, 0.8))
        G = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))
        if nx.is_connected(G):
            yield Graph.from_edges(list(G.edges()), n=n)


def find_submodularity_violation(model: ThresholdModel, budget: int = 500, seed: int = 0,
                                 tol: float = 1e-9) -> Witness | None:
    """Search small connected graphs for a witness; atlas first, then random."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    graphs = itertools.chain(small_connected_graphs(),
                             random_connected_graphs(np.random.default_rng(seed)))
    for g in itertools.islice(graphs, budget):
        rep = check_monotone_submodular(g, model, tol)
        if not rep.holds:
            return rep.witness
    return None
