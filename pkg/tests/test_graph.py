import io
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgim.graph import EdgeListError, Graph, load_edge_list, read_edge_list, write_edge_list


def test_undirected_path():
    g = load_edge_list("0 1\n1 2\n", directed=False)
    assert g.node_count == 3
    assert g.edge_count == 2
    assert g.out_degree[g.index_of(1)] == 2


def test_comments_and_self_loop():
    g = load_edge_list("# c\n5 5\n5 9\n")
    assert g.node_count == 2
    assert g.edge_count == 1
    assert g.load_stats.self_loops == 1
    assert sorted(g.labels.tolist()) == [5, 9]


def test_duplicates_reported():
    g = load_edge_list("1 2\n2 1\n1 2\n3 1\n")
    assert g.edge_count == 2
    assert g.load_stats.duplicates == 2
    d = load_edge_list("1 2\n2 1\n1 2\n", directed=True)
    assert d.edge_count == 2
    assert d.load_stats.duplicates == 1


@pytest.mark.parametrize("text, lineno", [
    ("0 1\n1 x\n", 2),
    ("0 1\n\n1 2 3\n", 3),
    ("7\n", 1),
])
def test_parse_errors_carry_line(text, lineno):
    with pytest.raises(EdgeListError) as exc:
        load_edge_list(text)
    assert exc.value.lineno == lineno
    assert f"line {lineno}" in str(exc.value)


def test_empty_input():
    with pytest.raises(EdgeListError):
        load_edge_list("# only a comment\n\n")


def test_neighbors_undirected(path3):
    assert sorted(path3.influence_neighbors(1)) == [0, 2]
    assert sorted(path3.spread_targets(1)) == [0, 2]


def test_neighbors_directed():
    g = Graph.from_edges([(0, 1), (2, 1)], directed=True)
    assert sorted(g.influence_neighbors(1)) == [0, 2]
    assert g.influence_neighbors(0) == []
    assert g.spread_targets(0) == [1]
    assert g.spread_targets(1) == []


def test_out_of_range():
    g = Graph.from_edges([(0, 1)])
    with pytest.raises(IndexError):
        g.influence_neighbors(2)
    with pytest.raises(IndexError):
        g.spread_targets(-1)


edge_lists = st.lists(
    st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=60
)


def _check_invariants(g: Graph):
    n = g.node_count
    for v in range(n):
        nb = g.influence_neighbors(v)
        assert v not in nb
        assert len(nb) == len(set(nb))
    if g.directed:
        assert g.in_degree.sum() == g.edge_count == g.out_degree.sum()
    else:
        assert g.out_degree.sum() == 2 * g.edge_count
        for v in range(n):
            assert g.influence_neighbors(v) == g.spread_targets(v)
            for u in g.spread_targets(v):
                assert v in g.spread_targets(u)


@settings(max_examples=60, deadline=None)
@given(edges=edge_lists, directed=st.booleans(), data=st.data())
def test_permutation_invariance_and_roundtrip(edges, directed, data):
    text = "".join(f"{a} {b}\n" for a, b in edges)
    try:
        g = load_edge_list(text, directed)
    except EdgeListError:
        return
    _check_invariants(g)
    perm = data.draw(st.permutations(edges))
    h = load_edge_list("".join(f"{a} {b}\n" for a, b in perm), directed)
    assert h.node_count == g.node_count
    assert sorted(h.out_degree) == sorted(g.out_degree)
    assert sorted(h.in_degree) == sorted(g.in_degree)
    # same edges in original labels
    def lab(G):
        e = G.labels[G.edges()]
        if not G.directed:
            e = np.sort(e, axis=1)
        return sorted(map(tuple, e.tolist()))

    assert lab(h) == lab(g)

    buf = io.StringIO()
    write_edge_list(g, buf)
    if g.edge_count:
        r = load_edge_list(buf.getvalue(), directed)
        assert lab(r) == lab(g)
        assert r.node_count == len(np.unique(g.edges()))


NETHEPT = os.environ.get("CGIM_NETHEPT")


@pytest.mark.skipif(not NETHEPT, reason="set CGIM_NETHEPT to the NetHEPT edge list")
def test_nethept_statistics():
    g = read_edge_list(NETHEPT, directed=False)
    print(f"NetHEPT: |V|={g.node_count} |E|={g.edge_count} stats={g.load_stats}")
    assert g.node_count == 15233
    assert g.edge_count == 58991
