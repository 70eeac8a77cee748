"""Shared fixtures and independent reference oracles.

The oracles here are deliberately written against different algorithms than
the library (Floyd-Warshall vs Dijkstra, root-path walks vs Euler tours) so
a bug in the fast path cannot hide in the checker.
"""

import random

import pytest

import treecov as tc

INF = float("inf")


# ---------------------------------------------------------------------------
# independent distance oracles
# ---------------------------------------------------------------------------

def floyd_warshall(n, edges):
    """All-pairs shortest paths as a dense list of lists, INF = unreachable.

    Reference implementation: O(n^3), no heaps, no numpy.
    """
    dist = [[INF] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0
    for u, v, w in edges:
        if w < dist[u][v]:
            dist[u][v] = w
            dist[v][u] = w
    for mid in range(n):
        dm = dist[mid]
        for i in range(n):
            via = dist[i][mid]
            if via == INF:
                continue
            di = dist[i]
            for j in range(n):
                if via + dm[j] < di[j]:
                    di[j] = via + dm[j]
    return dist


def graph_fw(g):
    return floyd_warshall(g.n, g.edges)


def naive_tree_distances(tree):
    """Distances in a Tree by plain DFS from every source over the edge list."""
    adj = {v: [] for v in tree.vertices}
    for u, v, w in tree.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    out = {}
    for s in tree.vertices:
        dist = {s: 0}
        stack = [s]
        while stack:
            x = stack.pop()
            for y, w in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + w
                    stack.append(y)
        out[s] = dist
    return out


def naive_hst_distance(hst, x, y):
    """ell(lca) via parent walks from the two leaves."""
    if x == y:
        return 0
    a = hst.leaf_node[x]
    b = hst.leaf_node[y]
    anc = set()
    while a is not None:
        anc.add(a)
        a = hst.parents[a]
    while b not in anc:
        b = hst.parents[b]
    return hst.labels[b]


# ---------------------------------------------------------------------------
# random instances (seeded, independent of treecov.generators)
# ---------------------------------------------------------------------------

def random_connected_graph(seed, n, extra=0, max_w=9):
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v, rng.randint(1, max_w)))
    have = {(u, v) for u, v, _ in edges}
    tries = 0
    while extra > 0 and tries < 50 * n:
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        if u > v:
            u, v = v, u
        if (u, v) in have:
            continue
        have.add((u, v))
        edges.append((u, v, rng.randint(1, max_w)))
        extra -= 1
    return tc.Graph(n, edges)


def random_tree_graph(seed, n, max_w=9):
    return random_connected_graph(seed, n, extra=0, max_w=max_w)


def random_metric(seed, n, max_w=9):
    """Shortest-path metric of a random connected graph."""
    g = random_connected_graph(seed, n, extra=n // 2, max_w=max_w)
    return tc.FiniteMetric.from_graph(g, range(g.n))


def random_ultrametric(seed, n):
    """Random laminar hierarchy with power-of-two-ish labels."""
    rng = random.Random(seed)
    points = list(range(n))
    values = {}

    def split(group, scale):
        if len(group) <= 1:
            return
        cut = rng.randint(1, len(group) - 1)
        left, right = group[:cut], group[cut:]
        for x in left:
            for y in right:
                values[(min(x, y), max(x, y))] = scale
        split(left, rng.randint(1, scale))
        split(right, rng.randint(1, scale))

    split(points, 1 << rng.randint(2, 6))
    return tc.Ultrametric(points, values)


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def grid5():
    return tc.grid_graph(5, 5, seed=1)


@pytest.fixture(scope="session")
def wgrid4():
    return tc.grid_graph(4, 4, seed=3, max_weight=9)


@pytest.fixture(scope="session")
def ktree40():
    g, td = tc.partial_k_tree(40, 2, seed=5, max_weight=5)
    return g, td


@pytest.fixture(scope="session")
def two_comp_graph():
    edges = [(0, 1, 2), (1, 2, 3), (0, 2, 4), (3, 4, 1), (4, 5, 1)]
    return tc.Graph(6, edges)


@pytest.fixture(scope="session")
def path9():
    return tc.Graph(9, [(i, i + 1, 1) for i in range(8)])
