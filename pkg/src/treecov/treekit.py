"""Tree primitives: LCA, path oracles, distance labels, routing, 2-hop emulators.

Trees carry arbitrary integer vertex ids (they are usually subsets of some
graph's id space). All distances are exact Python ints; numpy is used only for
the sparse-table RMQ and for bulk all-pairs verification matrices, with an
overflow guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

_INT64_SAFE = 1 << 62


class TreeError(ValueError):
    """Structural problem with a tree or a tree query."""


class Tree:
    """Immutable weighted free tree over arbitrary integer vertex ids."""

    __slots__ = ("vertices", "edges", "adj")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int, int]]):
        self.vertices: tuple[int, ...] = tuple(sorted(set(vertices)))
        vs = set(self.vertices)
        norm = []
        for u, v, w in edges:
            if u not in vs or v not in vs:
                raise TreeError(f"edge ({u},{v}) uses unknown vertex")
            if u == v:
                raise TreeError(f"self loop at {u}")
            if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                raise TreeError(f"bad edge weight {w!r}")
            norm.append((u, v, w) if u < v else (v, u, w))
        self.edges: tuple[tuple[int, int, int], ...] = tuple(sorted(norm))
        if len(self.edges) != len(self.vertices) - 1:
            raise TreeError(
                f"{len(self.edges)} edges for {len(self.vertices)} vertices")
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        seen = set()
        for u, v, w in self.edges:
            if (u, v) in seen:
                raise TreeError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            adj[u].append((v, w))
            adj[v].append((u, w))
        self.adj = {v: tuple(sorted(a)) for v, a in adj.items()}
        # connectivity: |E| = |V|-1 plus one sweep reaching everything
        if self.vertices:
            stack = [self.vertices[0]]
            reach = {self.vertices[0]}
            while stack:
                x = stack.pop()
                for y, _ in self.adj[x]:
                    if y not in reach:
                        reach.add(y)
                        stack.append(y)
            if len(reach) != len(self.vertices):
                raise TreeError("tree is not connected")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def root_default(self) -> int:
        return self.vertices[0]

    def edge_weight(self, u: int, v: int) -> int:
        for nbr, w in self.adj[u]:
            if nbr == v:
                return w
        raise TreeError(f"no edge ({u},{v})")

    def __repr__(self) -> str:
        return f"Tree(n={self.n})"


def tree_to_json_obj(t: Tree) -> dict:
    return {"vertices": list(t.vertices),
            "edges": [[u, v, w] for u, v, w in t.edges]}


def tree_from_json_obj(obj: dict) -> Tree:
    return Tree(obj["vertices"], [tuple(e) for e in obj["edges"]])


class EulerLca:
    """Euler-tour + sparse-table RMQ over an explicit rooted node forest.

    Nodes are dense ints 0..n-1 with a children list per node. O(n log n)
    build, O(1) per query, plus a vectorized all-pairs grid used by the
    verification paths.
    """

    __slots__ = ("_euler", "_depth", "_first", "_table", "_floorlog")

    def __init__(self, n_nodes: int, root: int, children: list[list[int]]):
        euler: list[int] = []
        depth: list[int] = []
        first = [-1] * n_nodes
        # iterative DFS emitting a node every time the walk returns to it
        stack: list[tuple[int, int, int]] = [(root, 0, 0)]
        while stack:
            node, d, child_i = stack.pop()
            if child_i == 0:
                first[node] = len(euler)
            euler.append(node)
            depth.append(d)
            if child_i < len(children[node]):
                stack.append((node, d, child_i + 1))
                stack.append((children[node][child_i], d + 1, 0))
        self._euler = np.asarray(euler, dtype=np.int64)
        self._depth = np.asarray(depth, dtype=np.int64)
        self._first = np.asarray(first, dtype=np.int64)
        length = len(euler)
        flog = [0] * (length + 1)
        for i in range(2, length + 1):
            flog[i] = flog[i >> 1] + 1
        self._floorlog = np.asarray(flog, dtype=np.int64)
        levels = flog[length] + 1 if length else 1
        table = np.empty((levels, length), dtype=np.int64)
        table[0] = np.arange(length, dtype=np.int64)
        for k in range(1, levels):
            span = 1 << (k - 1)
            prev = table[k - 1]
            left = prev[: length - 2 * span + 1]
            right = prev[span: length - span + 1]
            take_left = self._depth[left] <= self._depth[right]
            table[k, : length - 2 * span + 1] = np.where(take_left, left, right)
            table[k, length - 2 * span + 1:] = prev[length - 2 * span + 1:]
        self._table = table

    def lca(self, a: int, b: int) -> int:
        fa = int(self._first[a])
        fb = int(self._first[b])
        if fa > fb:
            fa, fb = fb, fa
        k = int(self._floorlog[fb - fa + 1])
        p1 = int(self._table[k, fa])
        p2 = int(self._table[k, fb - (1 << k) + 1])
        pos = p1 if self._depth[p1] <= self._depth[p2] else p2
        return int(self._euler[pos])

    def lca_grid(self, nodes: np.ndarray) -> np.ndarray:
        """All-pairs LCA node ids for the given node array (m x m result)."""
        f = self._first[nodes]
        lo = np.minimum.outer(f, f)
        hi = np.maximum.outer(f, f)
        k = self._floorlog[hi - lo + 1]
        p1 = self._table[k, lo]
        p2 = self._table[k, hi - (np.int64(1) << k) + 1]
        pos = np.where(self._depth[p1] <= self._depth[p2], p1, p2)
        return self._euler[pos]


def _rooted_children(tree: Tree, root: int):
    """Children lists (sorted ids) and parents for the tree rooted at root."""
    idx = {v: i for i, v in enumerate(tree.vertices)}
    children: list[list[int]] = [[] for _ in tree.vertices]
    parent: dict[int, int | None] = {root: None}
    parent_w: dict[int, int] = {}
    order = [root]
    stack = [root]
    while stack:
        v = stack.pop()
        for nbr, w in tree.adj[v]:
            if nbr not in parent:
                parent[nbr] = v
                parent_w[nbr] = w
                children[idx[v]].append(idx[nbr])
                order.append(nbr)
                stack.append(nbr)
    if len(order) != tree.n:
        raise TreeError("root does not reach every vertex")
    for ch in children:
        ch.sort()
    return idx, children, parent, parent_w, order


class LcaOracle:
    """O(1) LCA queries on a Tree via Euler tour + sparse table."""

    __slots__ = ("tree", "root", "_idx", "_euler")

    def __init__(self, tree: Tree, root: int | None = None):
        self.tree = tree
        self.root = tree.root_default if root is None else root
        if self.root not in tree.adj:
            raise TreeError(f"root {self.root} not in tree")
        self._idx, children, _, _, _ = _rooted_children(tree, self.root)
        self._euler = EulerLca(tree.n, self._idx[self.root], children)

    def lca(self, u: int, v: int) -> int:
        try:
            node = self._euler.lca(self._idx[u], self._idx[v])
        except KeyError as exc:
            raise TreeError(f"vertex {exc} not in tree") from exc
        return self.tree.vertices[node]


class TreePathOracle:
    """Exact tree distances and path reporting: root distances + parents + LCA."""

    __slots__ = ("tree", "root", "parent", "parent_weight", "root_dist", "_lca")

    def __init__(self, tree: Tree, root: int | None = None):
        self.tree = tree
        self.root = tree.root_default if root is None else root
        _, _, parent, parent_w, order = _rooted_children(tree, self.root)
        self.parent = parent
        self.parent_weight = parent_w
        dist = {self.root: 0}
        for v in order:
            if v != self.root:
                dist[v] = dist[parent[v]] + parent_w[v]
        self.root_dist = dist
        self._lca = LcaOracle(tree, self.root)

    def lca(self, u: int, v: int) -> int:
        return self._lca.lca(u, v)

    def distance(self, u: int, v: int) -> int:
        z = self._lca.lca(u, v)
        return self.root_dist[u] + self.root_dist[v] - 2 * self.root_dist[z]

    def path(self, u: int, v: int) -> tuple[list[int], int]:
        """Vertex sequence of the unique u-v path and its total weight."""
        z = self._lca.lca(u, v)
        up = []
        x = u
        while x != z:
            up.append(x)
            x = self.parent[x]
        down = []
        x = v
        while x != z:
            down.append(x)
            x = self.parent[x]
        seq = up + [z] + list(reversed(down))
        total = (self.root_dist[u] - self.root_dist[z]) + \
                (self.root_dist[v] - self.root_dist[z])
        return seq, total


def tree_distance_matrix(tree: Tree, root: int | None = None):
    """(vertices, int64 matrix) of exact all-pairs tree distances.

    Vectorized for use by verification passes; guarded against int64 overflow
    (weights are capped well below it).
    """
    root = tree.root_default if root is None else root
    idx, children, parent, parent_w, order = _rooted_children(tree, root)
    dist = {root: 0}
    for v in order:
        if v != root:
            dist[v] = dist[parent[v]] + parent_w[v]
    if tree.n and max(dist.values()) >= _INT64_SAFE // 4:
        raise TreeError("tree distances too large for vectorized verification")
    euler = EulerLca(tree.n, idx[root], children)
    nodes = np.arange(tree.n, dtype=np.int64)
    lcas = euler.lca_grid(nodes)
    rd = np.asarray([dist[v] for v in tree.vertices], dtype=np.int64)
    mat = rd[:, None] + rd[None, :] - 2 * rd[lcas]
    return tree.vertices, mat


# ---------------------------------------------------------------------------
# centroid decomposition: distance labels and helpers
# ---------------------------------------------------------------------------

def centroid_chains(tree: Tree) -> dict[int, tuple[tuple[int, int], ...]]:
    """For each vertex, its centroid-ancestor chain as (centroid, distance)
    pairs ordered from the top-level centroid down. Chain length is at most
    ceil(log2 n) + 1; every chain ends with (v, 0)."""
    chains: dict[int, list[tuple[int, int]]] = {v: [] for v in tree.vertices}
    removed: set[int] = set()

    def component(start: int) -> list[int]:
        comp = [start]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y, _ in tree.adj[x]:
                if y not in seen and y not in removed:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        return comp

    def find_centroid(comp: list[int]) -> int:
        total = len(comp)
        comp_set = set(comp)
        root = comp[0]
        order = [root]
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y, _ in tree.adj[x]:
                if y in comp_set and y not in parent:
                    parent[y] = x
                    order.append(y)
                    stack.append(y)
        size = {v: 1 for v in comp}
        heaviest = {v: 0 for v in comp}
        for v in reversed(order):
            p = parent[v]
            if p is not None:
                size[p] += size[v]
                heaviest[p] = max(heaviest[p], size[v])
        best = None
        for v in sorted(comp):
            part = max(heaviest[v], total - size[v])
            if best is None or part < best[0]:
                best = (part, v)
        return best[1]

    def dists_from(c: int) -> dict[int, int]:
        out = {c: 0}
        stack = [c]
        while stack:
            x = stack.pop()
            for y, w in tree.adj[x]:
                if y not in removed and y not in out:
                    out[y] = out[x] + w
                    stack.append(y)
        return out

    def decompose(comp: list[int]) -> None:
        c = find_centroid(comp)
        dd = dists_from(c)
        for v in comp:
            chains[v].append((c, dd[v]))
        removed.add(c)
        done = {c}
        for nbr, _ in tree.adj[c]:
            if nbr in removed or nbr in done:
                continue
            sub = component(nbr)
            done.update(sub)
            decompose(sub)

    if tree.vertices:
        decompose(list(tree.vertices))
    return {v: tuple(ch) for v, ch in chains.items()}


def max_label_entries(n: int) -> int:
    if n <= 1:
        return 1
    return (n - 1).bit_length() + 1  # ceil(log2 n) + 1


@dataclass(frozen=True)
class TreeLabel:
    """Distance label: the vertex's centroid chain plus the owning tree id."""
    tree_id: int
    vertex: int
    entries: tuple[tuple[int, int], ...]

    def word_count(self) -> int:
        return 2 + 2 * len(self.entries)


def build_tree_labels(tree: Tree, tree_id: int = 0) -> dict[int, TreeLabel]:
    chains = centroid_chains(tree)
    cap = max_label_entries(tree.n)
    labels = {}
    for v, ch in chains.items():
        if len(ch) > cap:
            raise TreeError(
                f"label for {v} has {len(ch)} entries, cap {cap}")
        labels[v] = TreeLabel(tree_id, v, ch)
    return labels


def label_distance(a: TreeLabel, b: TreeLabel) -> int:
    """Exact tree distance from two labels of the same tree."""
    if a.tree_id != b.tree_id:
        raise TreeError(
            f"labels from different trees: {a.tree_id} vs {b.tree_id}")
    best = None
    for (ca, da), (cb, db) in zip(a.entries, b.entries):
        if ca != cb:
            break
        s = da + db
        if best is None or s < best:
            best = s
    if best is None:
        raise TreeError("labels share no centroid ancestor")
    return best


# ---------------------------------------------------------------------------
# interval routing along heavy paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoutingTable:
    """Per-vertex routing state: own DFS interval, parent id, heavy child id."""
    vertex: int
    tin: int
    tout: int
    parent: int | None
    heavy: int | None


@dataclass(frozen=True)
class RoutingLabel:
    """Destination label: own tin plus the light edges on the root-to-v path,
    each as (parent, child, child_tin, child_tout), top-down."""
    tree_id: int
    vertex: int
    tin: int
    light: tuple[tuple[int, int, int, int], ...]

    def word_count(self) -> int:
        return 3 + 4 * len(self.light)


class TreeRouting:
    """Compact tree routing: O(1)-word tables, O(log n)-word labels.

    With a header (one cursor word) each hop is O(1); in strict mode (no
    header) a hop scans the destination label, O(log n).
    """

    def __init__(self, tree: Tree, tree_id: int = 0, root: int | None = None):
        self.tree = tree
        self.tree_id = tree_id
        self.root = tree.root_default if root is None else root
        _, _, parent, _, order = _rooted_children(tree, self.root)
        size = {v: 1 for v in tree.vertices}
        for v in reversed(order):
            p = parent[v]
            if p is not None:
                size[p] += size[v]
        heavy: dict[int, int | None] = {}
        for v in tree.vertices:
            kids = [nbr for nbr, _ in tree.adj[v] if parent.get(nbr) == v]
            heavy[v] = max(kids, key=lambda c: (size[c], -c)) if kids else None
        tin: dict[int, int] = {}
        tout: dict[int, int] = {}
        light_chain: dict[int, tuple] = {self.root: ()}
        clock = 0
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            v, closing = stack.pop()
            if closing:
                tout[v] = clock - 1
                continue
            tin[v] = clock
            clock += 1
            stack.append((v, True))
            kids = [nbr for nbr, _ in tree.adj[v] if parent.get(nbr) == v]
            # heavy child explored first so heavy paths get contiguous prefixes
            kids.sort(key=lambda c: (c != heavy[v], c), reverse=True)
            for c in kids:
                stack.append((c, False))
        # second pass: tin known for everyone, record light edges top-down
        for v in order:
            p = parent[v]
            if p is None:
                continue
            if heavy[p] == v:
                light_chain[v] = light_chain[p]
            else:
                light_chain[v] = light_chain[p] + ((p, v),)
        self.tables: dict[int, RoutingTable] = {
            v: RoutingTable(v, tin[v], tout[v], parent[v], heavy[v])
            for v in tree.vertices}
        self.labels: dict[int, RoutingLabel] = {}
        for v in tree.vertices:
            light = tuple((p, c, tin[c], tout[c]) for p, c in light_chain[v])
            self.labels[v] = RoutingLabel(tree_id, v, tin[v], light)

    def origin_header(self, u: int, label: RoutingLabel) -> tuple[int, int]:
        """Cursor = index of the first light edge on the way down from
        lca(u, dest); returns (cursor, ops_spent)."""
        t = self.tables[u]
        ops = 0
        cursor = len(label.light)
        for i, (_, _, ctin, ctout) in enumerate(label.light):
            ops += 1
            if not (ctin <= t.tin <= ctout):
                cursor = i
                break
        return cursor, ops

    def route_step(self, u: int, label: RoutingLabel, header: int | None,
                   strict: bool = False):
        """One hop toward label.vertex. Returns (next_vertex, header, ops).
        next_vertex is None when u is the destination."""
        if label.tree_id != self.tree_id:
            raise TreeError("label belongs to a different tree")
        t = self.tables[u]
        ops = 1
        if u == label.vertex:
            return None, header, ops
        if not (t.tin <= label.tin <= t.tout):
            return t.parent, header, ops
        if strict:
            for p, c, _, _ in label.light:
                ops += 1
                if p == u:
                    return c, header, ops
            return t.heavy, header, ops
        cursor = 0 if header is None else header
        if cursor < len(label.light):
            ops += 1
            p, c, _, _ = label.light[cursor]
            if p == u:
                return c, cursor + 1, ops
        return t.heavy, cursor, ops


@dataclass
class RouteTrace:
    vertices: list[int]
    weights: list[int]
    total: int
    per_hop_ops: list[int]
    header_words: int


def simulate_tree_route(routing: TreeRouting, u: int, v: int,
                        strict: bool = False) -> RouteTrace:
    label = routing.labels[v]
    if strict:
        header = None
        origin_ops = 0
    else:
        header, origin_ops = routing.origin_header(u, label)
    vertices = [u]
    weights: list[int] = []
    ops: list[int] = []
    cur = u
    first = True
    for _ in range(routing.tree.n + 2):
        nxt, header, hop_ops = routing.route_step(cur, label, header, strict)
        ops.append(hop_ops + (origin_ops if first else 0))
        first = False
        if nxt is None:
            break
        weights.append(routing.tree.edge_weight(cur, nxt))
        vertices.append(nxt)
        cur = nxt
    else:
        raise TreeError(f"route {u}->{v} did not terminate")
    return RouteTrace(vertices, weights, sum(weights), ops,
                      0 if strict else 1)


# ---------------------------------------------------------------------------
# 2-hop emulator from centroid ancestors
# ---------------------------------------------------------------------------

class TwoHopEmulator:
    """Star edges from every vertex to its centroid ancestors.

    At most n * (ceil(log2 n) + 1) edges; every query is answered exactly by a
    path of at most 2 emulator edges.
    """

    def __init__(self, tree: Tree, tree_id: int = 0):
        self.tree = tree
        self.tree_id = tree_id
        self.chains = centroid_chains(tree)
        edges = []
        for v in tree.vertices:
            for c, d in self.chains[v]:
                if c != v:
                    edges.append((min(v, c), max(v, c), d))
        self.edges: tuple[tuple[int, int, int], ...] = tuple(sorted(set(edges)))
        cap = tree.n * max_label_entries(tree.n)
        if len(self.edges) > cap:
            raise TreeError(
                f"emulator has {len(self.edges)} edges, cap {cap}")

    def query(self, u: int, v: int):
        """(exact tree distance, hop path as edge list with <= 2 edges)."""
        if u == v:
            return 0, []
        best = None
        for (ca, da), (cb, db) in zip(self.chains[u], self.chains[v]):
            if ca != cb:
                break
            if best is None or da + db < best[0]:
                best = (da + db, ca)
        if best is None:
            raise TreeError("vertices share no centroid ancestor")
        dist, hub = best
        if hub == u:
            return dist, [(u, v, dist)]
        if hub == v:
            return dist, [(u, v, dist)]
        du = dict(self.chains[u])[hub]
        dv = dict(self.chains[v])[hub]
        return dist, [(u, hub, du), (hub, v, dv)]
