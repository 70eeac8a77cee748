import json

import pytest
from hypothesis import given, settings, strategies as st

import treecov as tc
from conftest import INF, floyd_warshall, random_connected_graph


def test_graph_basic_construction():
    g = tc.Graph(3, [(0, 1, 2), (2, 1, 5)])
    assert g.n == 3 and g.m == 2
    assert g.edges == ((0, 1, 2), (1, 2, 5))
    assert g.edge_weight(1, 0) == 2
    assert g.has_edge(1, 2) and not g.has_edge(0, 2)


def test_graph_rejects_bad_input():
    with pytest.raises(tc.GraphError):
        tc.Graph(2, [(0, 0, 1)])
    with pytest.raises(tc.GraphError):
        tc.Graph(2, [(0, 3, 1)])
    with pytest.raises(tc.GraphError):
        tc.Graph(2, [(0, 1, -1)])
    with pytest.raises(tc.GraphError):
        tc.Graph(2, [(0, 1, 1), (1, 0, 2)])  # duplicate with dedupe=reject


def test_dedupe_modes():
    g = tc.Graph(2, [(0, 1, 7), (1, 0, 3)], dedupe="min")
    assert g.edges == ((0, 1, 3),)


def test_dijkstra_matches_floyd_warshall():
    for seed in range(6):
        g = random_connected_graph(seed, 24, extra=14)
        fw = floyd_warshall(g.n, g.edges)
        for s in range(g.n):
            dist, _ = tc.shortest_paths(g, s)
            for v in range(g.n):
                assert dist[v] == fw[s][v]


def test_dijkstra_disconnected():
    g = tc.Graph(4, [(0, 1, 1), (2, 3, 1)])
    dist, parent = tc.shortest_paths(g, 0)
    assert dist[1] == 1
    assert dist[2] is tc.UNREACHABLE and dist[3] is tc.UNREACHABLE
    assert parent[2] is None


def test_unreachable_sentinel_identity():
    u = tc.UNREACHABLE
    assert not u
    assert u is tc.UNREACHABLE
    assert repr(u) == "UNREACHABLE"


def test_multi_source_is_min_over_sources(two_comp_graph):
    g = two_comp_graph
    dist, _, src = tc.multi_source_shortest_paths(g, [0, 4])
    for v in range(g.n):
        best = INF
        arg = None
        for s in (0, 4):
            d, _ = tc.shortest_paths(g, s)
            if d[v] is not tc.UNREACHABLE and d[v] < best:
                best, arg = d[v], s
        if best is INF:
            assert dist[v] is tc.UNREACHABLE
        else:
            assert dist[v] == best
            assert src[v] == arg


def test_connected_components(two_comp_graph):
    comps = tc.connected_components(two_comp_graph)
    assert comps == [(0, 1, 2), (3, 4, 5)]
    assert not tc.is_connected(two_comp_graph)
    assert tc.is_connected(tc.Graph(1, []))


def test_induced_subgraph_maps_weights(two_comp_graph):
    sub = tc.induced_subgraph(two_comp_graph, [0, 2, 4])
    assert sub.to_parent == (0, 2, 4)
    # only the 0-2 edge survives
    assert sub.graph.edges == ((0, 1, 4),)
    assert sub.from_parent[4] == 2


def test_diameter_bound_dominates_real_distances():
    for seed in range(4):
        g = random_connected_graph(seed, 16, extra=5)
        fw = floyd_warshall(g.n, g.edges)
        bound = tc.diameter_bound(g)
        assert bound > max(d for row in fw for d in row if d is not INF)


def test_all_pairs_matches_single_source():
    g = random_connected_graph(11, 18, extra=9)
    dm = tc.all_pairs_distances(g)
    for u in range(g.n):
        dist, _ = tc.shortest_paths(g, u)
        for v in range(g.n):
            assert dm.get(u, v) == dist[v]


def test_text_round_trip(wgrid4):
    text = tc.dump_graph_text(wgrid4)
    back = tc.load_graph_text(text)
    assert back.n == wgrid4.n and back.edges == wgrid4.edges


def test_text_format_errors():
    with pytest.raises(tc.GraphError):
        tc.load_graph_text("e 0 1 2\n")  # edge before header
    with pytest.raises(tc.GraphError):
        tc.load_graph_text("p 2 1\np 2 1\ne 0 1 2\n")
    with pytest.raises(tc.GraphError):
        tc.load_graph_text("p 2 2\ne 0 1 2\n")  # count mismatch
    with pytest.raises(tc.GraphError):
        tc.load_graph_text("p 2 1\ne 0 1 2.5\n")  # float without scale


def test_text_float_weights_need_scale():
    g = tc.load_graph_text("p 2 1\ne 0 1 2.5\n", scale=4)
    assert g.edges == ((0, 1, 10),)


def test_json_round_trip(wgrid4):
    text = tc.dump_graph_json(wgrid4)
    obj = json.loads(text)
    assert obj["format"] == "treecov-graph"
    back = tc.load_graph_json(text)
    assert back.edges == wgrid4.edges


def test_vertex_set():
    s = tc.VertexSet([3, 1, 1, 2])
    assert s.ids == (1, 2, 3)
    assert 2 in s and 0 not in s
    assert len(s) == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=20), st.integers(0, 10 ** 6))
def test_walk_to_root_properties(n, seed):
    g = random_connected_graph(seed, n, extra=n // 3)
    dist, parent = tc.shortest_paths(g, 0)
    for v in range(n):
        path = tc.graph.walk_to_root(parent, v)
        assert path[0] == v and path[-1] == 0
        total = sum(g.edge_weight(path[i], path[i + 1])
                    for i in range(len(path) - 1))
        assert total == dist[v]
