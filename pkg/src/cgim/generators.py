"""Synthetic graphs for experiments and tests."""
from __future__ import annotations

import networkx as nx
import numpy as np

from .graph import Graph


def preferential_attachment_digraph(n: int, seed: int = 0) -> Graph:
    """Directed scale-free graph (Bollobas et al. preferential attachment).

    Parallel edges and self-loops produced by the generator are dropped.
    """
    G = nx.scale_free_graph(n, seed=seed)
    return Graph.from_edges([(a, b) for a, b, _ in G.edges(keys=True)], directed=True, n=n)


def barabasi_albert(n: int, m: int, seed: int = 0) -> Graph:
    G = nx.barabasi_albert_graph(n, m, seed=seed)
    return Graph.from_edges(list(G.edges()), n=n)


def random_graph(n: int, p: float, rng, directed: bool = False, connected: bool = False) -> Graph:
    """G(n, p); with ``connected`` set, redraws until the graph is connected."""
    rng = np.random.default_rng(rng)
    while True:
        G = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)), directed=directed)
        if not connected or n <= 1 or (
            nx.is_weakly_connected(G) if directed else nx.is_connected(G)
        ):
            return Graph.from_edges(list(G.edges()), directed=directed, n=n)


def star(leaves: int, offset: int = 0) -> list[tuple[int, int]]:
    """Edges of a star with center ``offset``."""
    return [(offset, offset + i) for i in range(1, leaves + 1)]
