"""Immutable CSR graph and SNAP-style edge-list I/O.

Nodes are remapped to dense ids ``0..n-1`` in order of first appearance.
For directed graphs a node's activation depends on its in-neighbors and
influence travels along out-edges; for undirected graphs both views coincide.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np


class EdgeListError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True)
class LoadStats:
    lines: int = 0
    self_loops: int = 0
    duplicates: int = 0


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int64)
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


@dataclass(frozen=True, eq=False)
class Graph:
    """Adjacency structure in compressed sparse row form.

    ``out_indptr/out_indices`` list out-neighbors, ``in_indptr/in_indices``
    in-neighbors. For undirected graphs the two are the same arrays.
    """

    node_count: int
    directed: bool
    out_indptr: np.ndarray
    out_indices: np.ndarray
    in_indptr: np.ndarray
    in_indices: np.ndarray
    labels: np.ndarray
    load_stats: LoadStats = field(default_factory=LoadStats)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        directed: bool = False,
        n: int | None = None,
        labels: Iterable[int] | None = None,
    ) -> "Graph":
        """Build a graph from dense-id edges. Self-loops and repeats are dropped."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if n is None:
            n = int(arr.max()) + 1 if arr.size else 0
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        return cls._build(n, arr[:, 0], arr[:, 1], directed, labels)

    @classmethod
    def _build(cls, n, src, dst, directed, labels=None, lines=0) -> "Graph":
        keep = src != dst
        loops = int((~keep).sum())
        src, dst = src[keep], dst[keep]
        if not directed:
            lo, hi = np.minimum(src, dst), np.maximum(src, dst)
            src, dst = lo, hi
        raw = len(src)
        if raw:
            pairs = np.unique(np.stack([src, dst], axis=1), axis=0)
            src, dst = pairs[:, 0], pairs[:, 1]
        dups = raw - len(src)
        if directed:
            out_indptr, out_indices = _csr(n, src, dst)
            in_indptr, in_indices = _csr(n, dst, src)
        else:
            out_indptr, out_indices = _csr(
                n, np.concatenate([src, dst]), np.concatenate([dst, src])
            )
            in_indptr, in_indices = out_indptr, out_indices
        lab = np.arange(n, dtype=np.int64) if labels is None else np.asarray(list(labels), dtype=np.int64)
        if len(lab) != n:
            raise ValueError("labels must have one entry per node")
        for a in (out_indptr, out_indices, in_indptr, in_indices, lab):
            a.setflags(write=False)
        return cls(
            n, bool(directed), out_indptr, out_indices, in_indptr, in_indices, lab,
            LoadStats(lines=lines, self_loops=loops, duplicates=dups),
        )

    @property
    def edge_count(self) -> int:
        if self.directed:
            return len(self.out_indices)
        return len(self.out_indices) // 2

    @property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    @property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    def _check(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.node_count:
            raise IndexError(f"node {v} out of range for graph with {self.node_count} nodes")
        return v

    def influence_neighbors(self, v: int) -> list[int]:
        """Neighbors whose adoption counts toward ``v``'s threshold."""
        v = self._check(v)
        return self.in_indices[self.in_indptr[v]:self.in_indptr[v + 1]].tolist()

    def spread_targets(self, v: int) -> list[int]:
        """Nodes whose activation condition may change when ``v`` activates."""
        v = self._check(v)
        return self.out_indices[self.out_indptr[v]:self.out_indptr[v + 1]].tolist()

    def edges(self) -> np.ndarray:
        """Dense-id edge array, each undirected edge listed once as (lo, hi)."""
        src = np.repeat(np.arange(self.node_count), self.out_degree)
        e = np.stack([src, self.out_indices], axis=1)
        if not self.directed:
            e = e[e[:, 0] < e[:, 1]]
        return e

    def index_of(self, label: int) -> int:
        """Dense id of an original node label."""
        hits = np.flatnonzero(self.labels == int(label))
        if not len(hits):
            raise KeyError(f"unknown node id {label}")
        return int(hits[0])

    def to_networkx(self):
        import networkx as nx

        G = nx.DiGraph() if self.directed else nx.Graph()
        G.add_nodes_from(range(self.node_count))
        G.add_edges_from(self.edges().tolist())
        return G


def influence_neighbors(g: Graph, v: int) -> list[int]:
    return g.influence_neighbors(v)


def spread_targets(g: Graph, v: int) -> list[int]:
    return g.spread_targets(v)


def load_edge_list(source: TextIO | str, directed: bool = False) -> Graph:
    """Parse a whitespace-separated edge list.

    ``source`` is a text stream or a string holding the file contents. Lines
    starting with ``#`` and blank lines are skipped. Original ids are remapped
    densely in order of first appearance; drop counts land in
    ``graph.load_stats``.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    src: list[int] = []
    dst: list[int] = []
    ids: dict[int, int] = {}
    nlines = 0
    for lineno, line in enumerate(source, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected 2 node ids, got {len(parts)}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer node id in {s!r}", lineno) from None
        if a < 0 or b < 0:
            raise EdgeListError(f"negative node id in {s!r}", lineno)
        src.append(ids.setdefault(a, len(ids)))
        dst.append(ids.setdefault(b, len(ids)))
        nlines += 1
    if not nlines:
        raise EdgeListError("empty edge list")
    labels = np.fromiter(ids.keys(), dtype=np.int64, count=len(ids))
    return Graph._build(
        len(ids), np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64),
        directed, labels, lines=nlines,
    )


def read_edge_list(path, directed: bool = False) -> Graph:
    with open(path) as fh:
        return load_edge_list(fh, directed)


def write_edge_list(g: Graph, stream: TextIO) -> None:
    """Write the graph with original labels, one edge per line."""
    for a, b in g.edges():
        stream.write(f"{g.labels[a]} {g.labels[b]}\n")
