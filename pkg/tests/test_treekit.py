import random

import pytest

import treecov as tc
from treecov.treekit import EulerLca, centroid_chains
from conftest import naive_tree_distances, random_tree_graph


def make_tree(seed, n, max_w=9):
    g = random_tree_graph(seed, n, max_w=max_w)
    return tc.Tree(range(n), g.edges)


def root_path(parent, v):
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def naive_lca(parent, u, v):
    pu = root_path(parent, u)
    anc = set(pu)
    x = v
    while x not in anc:
        x = parent[x]
    return x


def test_tree_validation():
    with pytest.raises(tc.TreeError):
        tc.Tree([0, 1, 2], [(0, 1, 1)])  # disconnected
    with pytest.raises(tc.TreeError):
        tc.Tree([0, 1, 2], [(0, 1, 1), (1, 2, 1), (0, 2, 1)])  # cycle
    with pytest.raises(tc.TreeError):
        tc.Tree([0, 1], [(0, 1, -2)])
    with pytest.raises(tc.TreeError):
        tc.Tree([0, 1], [(0, 2, 1)])  # unknown vertex
    t = tc.Tree([5], [])
    assert t.n == 1 and t.root_default == 5


def test_tree_normalizes_ids():
    t = tc.Tree([7, 3, 9], [(9, 3, 2), (3, 7, 1)])
    assert t.vertices == (3, 7, 9)
    assert t.edges == ((3, 7, 1), (3, 9, 2))
    assert t.edge_weight(9, 3) == 2


def test_euler_lca_against_parent_walks():
    rng = random.Random(4)
    for trial in range(10):
        n = rng.randint(2, 60)
        parents = [None] + [rng.randrange(i) for i in range(1, n)]
        children = [[] for _ in range(n)]
        for i in range(1, n):
            children[parents[i]].append(i)
        lca = EulerLca(n, 0, children)
        for _ in range(150):
            u, v = rng.randrange(n), rng.randrange(n)
            assert lca.lca(u, v) == naive_lca(parents, u, v)


def test_lca_oracle_on_trees():
    t = make_tree(8, 40)
    oracle = tc.LcaOracle(t, root=0)
    # reference parents from a DFS
    parent = {0: None}
    stack = [0]
    while stack:
        x = stack.pop()
        for y, _ in t.adj[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    plist = [parent[v] for v in range(t.n)]
    rng = random.Random(1)
    for _ in range(300):
        u, v = rng.randrange(t.n), rng.randrange(t.n)
        assert oracle.lca(u, v) == naive_lca(plist, u, v)


def test_path_oracle_exact():
    for seed in (0, 3, 9):
        t = make_tree(seed, 50)
        oracle = tc.TreePathOracle(t)
        ref = naive_tree_distances(t)
        for u in t.vertices:
            for v in t.vertices:
                assert oracle.distance(u, v) == ref[u][v]
        seq, total = oracle.path(4, 31)
        assert seq[0] == 4 and seq[-1] == 31
        assert total == ref[4][31]
        assert sum(t.edge_weight(seq[i], seq[i + 1])
                   for i in range(len(seq) - 1)) == total


def test_tree_distance_matrix_matches_naive():
    t = make_tree(5, 30)
    ids, mat = tc.tree_distance_matrix(t)
    ref = naive_tree_distances(t)
    pos = {v: i for i, v in enumerate(ids)}
    for u in t.vertices:
        for v in t.vertices:
            assert int(mat[pos[u], pos[v]]) == ref[u][v]


def test_centroid_chains_depth():
    t = make_tree(2, 128, max_w=1)
    chains = centroid_chains(t)
    cap = tc.max_label_entries(t.n)
    assert max(len(c) for c in chains.values()) <= cap


def test_tree_labels_exact_and_small():
    for seed, n in ((0, 2), (1, 17), (2, 64), (3, 100)):
        t = make_tree(seed, n)
        labels = tc.build_tree_labels(t)
        cap = tc.max_label_entries(n)
        ref = naive_tree_distances(t)
        for v in t.vertices:
            assert len(labels[v].entries) <= cap
        for u in t.vertices:
            for v in t.vertices:
                assert tc.label_distance(labels[u], labels[v]) == ref[u][v]


def test_label_distance_rejects_foreign_trees():
    t1 = make_tree(0, 8)
    t2 = make_tree(1, 8)
    l1 = tc.build_tree_labels(t1, tree_id=1)
    l2 = tc.build_tree_labels(t2, tree_id=2)
    with pytest.raises(tc.TreeError):
        tc.label_distance(l1[0], l2[0])


def test_routing_all_pairs():
    for seed in (1, 6):
        t = make_tree(seed, 40)
        routing = tc.TreeRouting(t)
        ref = naive_tree_distances(t)
        for u in t.vertices:
            for v in t.vertices:
                trace = tc.simulate_tree_route(routing, u, v)
                assert trace.vertices[0] == u
                assert trace.vertices[-1] == v
                assert trace.total == ref[u][v]
                # every step is a real tree edge
                for i in range(len(trace.vertices) - 1):
                    assert trace.weights[i] == t.edge_weight(
                        trace.vertices[i], trace.vertices[i + 1])


def test_routing_per_hop_constant():
    """After the origin hop, table work per hop stays below a fixed constant
    that does not depend on n."""
    worst = {}
    for n in (64, 256, 1024):
        t = make_tree(7, n, max_w=1)
        routing = tc.TreeRouting(t)
        rng = random.Random(n)
        top = 0
        for _ in range(60):
            u, v = rng.randrange(n), rng.randrange(n)
            trace = tc.simulate_tree_route(routing, u, v)
            if len(trace.per_hop_ops) > 1:
                top = max(top, max(trace.per_hop_ops[1:]))
        worst[n] = top
    assert max(worst.values()) <= 3
    assert worst[1024] <= worst[64] + 1


def test_routing_strict_mode_agrees():
    t = make_tree(3, 25)
    routing = tc.TreeRouting(t)
    for u in t.vertices:
        for v in t.vertices:
            a = tc.simulate_tree_route(routing, u, v, strict=True)
            b = tc.simulate_tree_route(routing, u, v, strict=False)
            assert a.vertices == b.vertices
            assert a.header_words == 0 and b.header_words == 1


def test_two_hop_emulator_exact():
    for seed, n in ((2, 33), (5, 128)):
        t = make_tree(seed, n)
        emu = tc.TwoHopEmulator(t)
        assert len(emu.edges) <= n * tc.max_label_entries(n)
        ref = naive_tree_distances(t)
        edge_set = set(emu.edges)
        for u in t.vertices:
            for v in t.vertices:
                if u == v:
                    continue
                dist, hops = emu.query(u, v)
                assert dist == ref[u][v]
                assert 1 <= len(hops) <= 2
                assert sum(w for _, _, w in hops) == dist
                for a, b, w in hops:
                    assert (min(a, b), max(a, b), w) in edge_set
                # hop endpoints chain from u to v
                chain = [u] + [e[1] for e in hops]
                assert chain[-1] == v
                for e, (x, y) in zip(hops, zip(chain, chain[1:])):
                    assert (e[0], e[1]) == (x, y)


def test_max_label_entries_values():
    assert tc.max_label_entries(1) == 1
    assert tc.max_label_entries(2) == 2
    assert tc.max_label_entries(256) == 9
    assert tc.max_label_entries(257) == 10
