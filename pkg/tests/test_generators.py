import pytest

import treecov as tc
from conftest import floyd_warshall, INF


def connected(g):
    fw = floyd_warshall(g.n, g.edges)
    return all(fw[0][v] < INF for v in range(g.n))


def test_grid_shape():
    g = tc.grid_graph(3, 5)
    assert g.n == 15 and g.m == 3 * 4 + 2 * 5
    assert all(w == 1 for _, _, w in g.edges)
    assert g.has_edge(0, 1) and g.has_edge(0, 5) and not g.has_edge(4, 5)
    w = tc.grid_graph(3, 5, seed=2, max_weight=9)
    assert {e[:2] for e in w.edges} == {e[:2] for e in g.edges}
    assert any(wt > 1 for _, _, wt in w.edges)


def test_random_tree_shape():
    g = tc.random_tree(64, seed=3, max_weight=5)
    assert g.n == 64 and g.m == 63 and connected(g)


def test_gnp_probability_extremes():
    empty = tc.gnp_graph(10, 0.0, seed=1)
    assert empty.m == 0
    full = tc.gnp_graph(10, 1.0, seed=1)
    assert full.m == 45


def test_partial_k_tree_valid():
    for k in (1, 2, 3):
        g, td = tc.partial_k_tree(60, k, seed=4, max_weight=7)
        assert g.n == 60 and connected(g)
        assert td.width <= k
        tc.validate_decomposition(td, g)


def test_generators_deterministic():
    for build in (lambda s: tc.grid_graph(4, 4, seed=s, max_weight=9),
                  lambda s: tc.random_tree(30, seed=s, max_weight=9),
                  lambda s: tc.gnp_graph(30, 0.2, seed=s),
                  lambda s: tc.partial_k_tree(30, 2, seed=s)[0]):
        a, b, c = build(5), build(5), build(6)
        assert a.edges == b.edges
        assert a.edges != c.edges


def test_generator_argument_errors():
    with pytest.raises(tc.GraphError):
        tc.grid_graph(0, 3)
    with pytest.raises(tc.GraphError):
        tc.random_tree(0)
    with pytest.raises(tc.GraphError):
        tc.gnp_graph(5, 1.5)
    with pytest.raises(tc.GraphError):
        tc.partial_k_tree(5, 0)
    with pytest.raises(tc.GraphError):
        tc.grid_graph(3, 3, max_weight=0)
