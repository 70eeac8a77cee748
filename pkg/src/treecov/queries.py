"""Query structures built over covers: path reporting, distance oracles,
distance labeling, graph routing, and 2-hop metric routing.

Tree selection is always the direct scan over the trees shared by the two
query vertices (minimum estimate wins, ties to the smaller tree id), so query
time is proportional to the overlap. Every structure's estimates dominate the
graph distance; upper bounds hold on the structure's guarantee domain and are
recorded as exact Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .cover import Cover
from .graph import (Graph, UNREACHABLE, connected_components, induced_subgraph,
                    multi_source_shortest_paths, shortest_paths)
from .ramsey import FiniteMetric, Hst, derive_seed, metric_ramsey
from .treekit import (Tree, TreePathOracle, TreeRouting, TwoHopEmulator,
                      build_tree_labels, label_distance, simulate_tree_route)


class QueryError(ValueError):
    """Invalid structure request or query input."""


def _tree_members(cover: Cover) -> dict[int, list[int]]:
    """vertex -> sorted list of tree ids containing it."""
    members: dict[int, list[int]] = {}
    for tid, tr in enumerate(cover.trees):
        vs = tr.points if isinstance(tr, Hst) else tr.vertices
        for v in vs:
            members.setdefault(v, []).append(tid)
    return members


def _shared_trees(members: dict[int, list[int]], u: int, v: int) -> list[int]:
    a = members.get(u, ())
    b = members.get(v, ())
    i = j = 0
    out = []
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return out


# ---------------------------------------------------------------------------
# path reporting
# ---------------------------------------------------------------------------

class PathReportingStructure:
    """Distance + explicit-path queries against the best tree of a cover.

    kind "spanning" (underlying edges are graph edges) when the cover is
    spanning, otherwise "emulator". Reported paths always lie in the
    underlying edge set and sum exactly to the reported estimate.
    """

    def __init__(self, g: Graph, cover: Cover):
        if cover.kind == "hst":
            raise QueryError(
                "hst covers must be realized as trees before path reporting")
        self.kind = "spanning" if cover.kind == "spanning" else "emulator"
        self.bound = cover.bound
        self.trees: list[Tree] = list(cover.trees)
        self.oracles = [TreePathOracle(t) for t in self.trees]
        self.members = _tree_members(cover)
        edges = set()
        for t in self.trees:
            edges.update(t.edges)
        self.underlying_edges = tuple(sorted(edges))
        if self.kind == "spanning":
            for u, v, w in self.underlying_edges:
                if g.edge_weight(u, v) != w:
                    raise QueryError(
                        f"spanning cover edge ({u},{v},{w}) is not in the graph")

    def query_distance(self, u: int, v: int):
        if u == v:
            return 0
        best = None
        for tid in _shared_trees(self.members, u, v):
            d = self.oracles[tid].distance(u, v)
            if best is None or d < best[0]:
                best = (d, tid)
        return UNREACHABLE if best is None else best[0]

    def query_path(self, u: int, v: int):
        """(estimate, edge list) with the edges of the chosen tree's path;
        (UNREACHABLE, None) when no tree contains both endpoints."""
        if u == v:
            return 0, []
        best = None
        for tid in _shared_trees(self.members, u, v):
            d = self.oracles[tid].distance(u, v)
            if best is None or d < best[0]:
                best = (d, tid)
        if best is None:
            return UNREACHABLE, None
        d, tid = best
        seq, total = self.oracles[tid].path(u, v)
        tree = self.trees[tid]
        edges = [(x, y, tree.edge_weight(x, y)) for x, y in zip(seq, seq[1:])]
        if total != d or sum(w for _, _, w in edges) != d:
            raise QueryError("internal: path weight disagrees with estimate")
        return d, edges


# ---------------------------------------------------------------------------
# pairwise distance oracle
# ---------------------------------------------------------------------------

@dataclass
class _LevelRecord:
    hst: Hst  # over the level subset, original vertex ids
    nearest: dict[int, tuple[int, int]]  # v -> (anchor, distance at this level)
    alpha: Fraction


class PairwiseDistanceOracle:
    """Level-by-level oracle targeting a vertex set A.

    Each level extracts a Ramsey subset S of the surviving A inside the
    surviving graph and stores, per component: the subset HST (lca labels give
    the dominating ultrametric) and every vertex's nearest S anchor with its
    distance. The estimate d(u,s_u) + rho(s_u,s_v) + d(s_v,v), minimized over
    levels where u and v cohabit, dominates d_G always and is within
    (2*alpha+1)*d_G for pairs with an A vertex on a shortest path.
    """

    def __init__(self, g: Graph, a_ids: Iterable[int], k: int, seed: int):
        a_all = sorted(set(a_ids))
        if not a_all:
            raise QueryError("A must be non-empty")
        for a in a_all:
            if not 0 <= a < g.n:
                raise QueryError(f"A vertex {a} out of range")
        self.k = k
        self.seed = seed
        self._levels: list[dict[int, _LevelRecord]] = []
        alphas = [Fraction(1)]
        cur_g = g
        to_orig = tuple(range(g.n))
        a_cur = set(a_all)
        level = 0
        while a_cur:
            recs: dict[int, _LevelRecord] = {}
            removed: set[int] = set()
            for comp in connected_components(cur_g):
                a_here = [v for v in comp if to_orig[v] in a_cur]
                if not a_here:
                    continue
                rows = {a: shortest_paths(cur_g, a)[0] for a in a_here}
                metric_a = FiniteMetric.from_graph(cur_g, a_here, rows)
                out = metric_ramsey(
                    metric_a, k,
                    derive_seed(seed, "level", level, "comp",
                                to_orig[comp[0]]))
                alphas.append(out.distortion)
                dist_s, _, src_of = multi_source_shortest_paths(cur_g,
                                                                out.subset)
                mapping = {local: to_orig[local] for local in out.subset}
                rec = _LevelRecord(
                    out.hst.map_points(mapping),
                    {to_orig[v]: (to_orig[src_of[v]], dist_s[v])
                     for v in comp},
                    out.distortion)
                for v in comp:
                    recs[to_orig[v]] = rec
                removed.update(to_orig[s] for s in out.subset)
            self._levels.append(recs)
            a_cur -= removed
            if not a_cur:
                break
            keep = [i for i, ov in enumerate(to_orig) if ov not in removed]
            sub = induced_subgraph(cur_g, keep)
            cur_g = sub.graph
            to_orig = tuple(to_orig[p] for p in sub.to_parent)
            level += 1
        self.alpha = max(alphas)
        self.bound = 2 * self.alpha + 1

    @property
    def depth(self) -> int:
        return len(self._levels)

    def query(self, u: int, v: int):
        """Minimum level estimate; UNREACHABLE when u and v never share a
        component that carries target vertices."""
        if u == v:
            return 0
        best = None
        for recs in self._levels:
            ru = recs.get(u)
            if ru is None or recs.get(v) is not ru:
                continue
            su, du = ru.nearest[u]
            sv, dv = ru.nearest[v]
            est = du + ru.hst.ultra(su, sv) + dv
            if best is None or est < best:
                best = est
        return UNREACHABLE if best is None else best

    def stored_words(self) -> int:
        """Rough size audit: 3 words per (vertex, anchor, distance) entry plus
        2 per HST node."""
        total = 0
        seen: set[int] = set()
        for recs in self._levels:
            for rec in recs.values():
                if id(rec) in seen:
                    continue
                seen.add(id(rec))
                total += 3 * len(rec.nearest) + 2 * len(rec.hst.labels)
        return total


# ---------------------------------------------------------------------------
# separator distance oracle
# ---------------------------------------------------------------------------

@dataclass
class _OracleNode:
    pdo: PairwiseDistanceOracle
    local_of: dict[int, int]
    child_index: dict[int, int]
    children: list


class SeparatorDistanceOracle:
    """Recursion tree of pairwise oracles keyed by balanced separators.

    Query walks from the root while both endpoints stay in the same child
    component, taking the minimum separator-level estimate along the way. At
    the first node whose separator breaks a shortest u-v path the pairwise
    bound applies to the original distance, so overall stretch is
    (2*alpha+1) on all reachable pairs.
    """

    def __init__(self, g: Graph, k: int, seed: int, provider):
        self.k = k
        self.seed = seed
        self._comp_of: dict[int, int] = {}
        self._roots: list[_OracleNode] = []
        alphas = [Fraction(1)]

        def build(sub_g: Graph, to_orig: tuple[int, ...],
                  node_seed: int) -> _OracleNode:
            sep = provider.separator(sub_g, to_orig)
            pdo = PairwiseDistanceOracle(sub_g, sorted(sep.ids), k,
                                         derive_seed(node_seed, "sep"))
            alphas.append(pdo.alpha)
            child_index: dict[int, int] = {}
            children: list[_OracleNode] = []
            keep = [v for v in range(sub_g.n) if v not in sep]
            if keep:
                remains = induced_subgraph(sub_g, keep)
                for comp in connected_components(remains.graph):
                    inner = induced_subgraph(remains.graph, comp)
                    child_orig = tuple(to_orig[remains.to_parent[p]]
                                       for p in inner.to_parent)
                    for ov in child_orig:
                        child_index[ov] = len(children)
                    children.append(build(inner.graph, child_orig,
                                          derive_seed(node_seed, "child",
                                                      child_orig[0])))
            return _OracleNode(pdo, {ov: i for i, ov in enumerate(to_orig)},
                               child_index, children)

        for ci, comp in enumerate(connected_components(g)):
            sub = induced_subgraph(g, comp)
            for v in comp:
                self._comp_of[v] = ci
            self._roots.append(build(sub.graph, tuple(sub.to_parent),
                                     derive_seed(seed, "top", comp[0])))
        self.alpha = max(alphas)
        self.bound = 2 * self.alpha + 1

    def query(self, u: int, v: int):
        if u == v:
            return 0
        if self._comp_of[u] != self._comp_of[v]:
            return UNREACHABLE
        node = self._roots[self._comp_of[u]]
        best = None
        while True:
            est = node.pdo.query(node.local_of[u], node.local_of[v])
            if est is not UNREACHABLE and (best is None or est < best):
                best = est
            cu = node.child_index.get(u)
            cv = node.child_index.get(v)
            if cu is None or cv is None or cu != cv:
                break
            node = node.children[cu]
        return UNREACHABLE if best is None else best

    def stored_words(self) -> int:
        total = 0
        stack = list(self._roots)
        while stack:
            node = stack.pop()
            total += node.pdo.stored_words()
            stack.extend(node.children)
        return total


# ---------------------------------------------------------------------------
# distance labeling (spanning/metric via centroid labels, hst via lca labels)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HstLabel:
    """LCA label for one HST: centroid chain over HST nodes, each entry
    carrying the maximum node label on the leaf-to-centroid path."""
    tree_id: int
    vertex: int
    entries: tuple[tuple[int, int], ...]

    def word_count(self) -> int:
        return 2 + 2 * len(self.entries)


def build_hst_labels(hst: Hst, tree_id: int = 0) -> dict[int, HstLabel]:
    """Centroid decomposition of the HST's node tree. For leaves x, y the
    first shared entry's centroid lies on the x-y node path, where
    max(maxlabel(x->c), maxlabel(y->c)) equals the lca label exactly; every
    later shared entry only covers more nodes, so the min reproduces
    ultra(x, y)."""
    n = len(hst.labels)
    adj: list[list[int]] = [[] for _ in range(n)]
    for node in range(n):
        p = hst.parents[node]
        if p is not None:
            adj[node].append(p)
            adj[p].append(node)
    removed = [False] * n
    chains: dict[int, list[tuple[int, int]]] = {
        hst.leaf_node[pt]: [] for pt in hst.points}

    def component(start: int) -> list[int]:
        comp = [start]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen and not removed[y]:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        return comp

    def find_centroid(comp: list[int]) -> int:
        total = len(comp)
        comp_set = set(comp)
        root = comp[0]
        parent = {root: None}
        order = [root]
        stack = [root]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in comp_set and y not in parent:
                    parent[y] = x
                    order.append(y)
                    stack.append(y)
        size = dict.fromkeys(comp, 1)
        heaviest = dict.fromkeys(comp, 0)
        for x in reversed(order):
            p = parent[x]
            if p is not None:
                size[p] += size[x]
                heaviest[p] = max(heaviest[p], size[x])
        best = None
        for x in sorted(comp):
            part = max(heaviest[x], total - size[x])
            if best is None or part < best[0]:
                best = (part, x)
        return best[1]

    def decompose(comp: list[int]) -> None:
        c = find_centroid(comp)
        # running max of node labels from c outwards, endpoints included
        val = {c: hst.labels[c]}
        stack = [c]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not removed[y] and y not in val:
                    val[y] = max(val[x], hst.labels[y])
                    stack.append(y)
        for x in comp:
            if x in chains:
                chains[x].append((c, val[x]))
        removed[c] = True
        done = {c}
        for nbr in adj[c]:
            if removed[nbr] or nbr in done:
                continue
            sub = component(nbr)
            done.update(sub)
            decompose(sub)

    decompose(list(range(n)))
    labels = {}
    for pt in hst.points:
        node = hst.leaf_node[pt]
        labels[pt] = HstLabel(tree_id, pt, tuple(chains[node]))
    return labels


def hst_label_distance(a: HstLabel, b: HstLabel) -> int:
    if a.tree_id != b.tree_id:
        raise QueryError(
            f"labels from different trees: {a.tree_id} vs {b.tree_id}")
    if a.vertex == b.vertex:
        return 0
    best = None
    for (ca, va), (cb, vb) in zip(a.entries, b.entries):
        if ca != cb:
            break
        m = max(va, vb)
        if best is None or m < best:
            best = m
    if best is None:
        raise QueryError("labels share no centroid ancestor")
    return best


@dataclass(frozen=True)
class CoverLabel:
    build_id: int
    vertex: int
    entries: tuple  # (tree_id, TreeLabel | HstLabel), sorted by tree_id

    def word_count(self) -> int:
        return 2 + sum(payload.word_count() for _, payload in self.entries)


class CoverDistanceLabeling:
    """Per-vertex labels answering min-over-shared-trees distances without the
    structure itself: spanning/metric trees carry centroid distance labels,
    HSTs carry exact lca labels."""

    def __init__(self, cover: Cover):
        self.kind = cover.kind
        self.bound = cover.bound
        self.build_id = derive_seed(cover.seed, "labeling", cover.kind,
                                    cover.n, len(cover.trees))
        per_vertex: dict[int, list] = {}
        for tid, tr in enumerate(cover.trees):
            if isinstance(tr, Hst):
                labels = build_hst_labels(tr, tid)
            else:
                labels = build_tree_labels(tr, tid)
            for v, lab in labels.items():
                per_vertex.setdefault(v, []).append((tid, lab))
        self.labels = {
            v: CoverLabel(self.build_id, v, tuple(sorted(ent, key=lambda e: e[0])))
            for v, ent in per_vertex.items()}

    def label_of(self, v: int) -> CoverLabel:
        if v not in self.labels:
            raise QueryError(f"vertex {v} has no label")
        return self.labels[v]

    @staticmethod
    def query(la: CoverLabel, lb: CoverLabel):
        """(estimate, tree id) minimizing over shared trees; (UNREACHABLE,
        None) when the vertices share no tree."""
        if la.build_id != lb.build_id:
            raise QueryError("labels come from different builds")
        if la.vertex == lb.vertex:
            return 0, (la.entries[0][0] if la.entries else None)
        best = None
        i = j = 0
        while i < len(la.entries) and j < len(lb.entries):
            ta, pa = la.entries[i]
            tb, pb = lb.entries[j]
            if ta == tb:
                if isinstance(pa, HstLabel):
                    d = hst_label_distance(pa, pb)
                else:
                    d = label_distance(pa, pb)
                if best is None or d < best[0]:
                    best = (d, ta)
                i += 1
                j += 1
            elif ta < tb:
                i += 1
            else:
                j += 1
        if best is None:
            return UNREACHABLE, None
        return best

    def max_label_words(self) -> int:
        return max((lab.word_count() for lab in self.labels.values()),
                   default=0)


# ---------------------------------------------------------------------------
# graph routing
# ---------------------------------------------------------------------------

@dataclass
class GraphRouteResult:
    tree_id: int
    vertices: list[int]
    weights: list[int]
    total: int
    per_hop_ops: list[int]
    selection_ops: int
    header_words: int  # tree id + cursor


class GraphRoutingScheme:
    """Routing over a spanning cover: the origin selects the best shared tree
    from the two distance labels, writes a 2-word header (tree id, cursor),
    and every later hop is O(1) table work in the selected tree."""

    def __init__(self, g: Graph, cover: Cover):
        if cover.kind != "spanning":
            raise QueryError("graph routing needs a spanning cover")
        for tr in cover.trees:
            for u, v, w in tr.edges:
                if g.edge_weight(u, v) != w:
                    raise QueryError(
                        f"cover edge ({u},{v},{w}) is not a graph edge")
        self.labeling = CoverDistanceLabeling(cover)
        self.routers = [TreeRouting(tr, tree_id=tid)
                        for tid, tr in enumerate(cover.trees)]
        self.members = _tree_members(cover)

    def label_words(self, v: int) -> int:
        total = self.labeling.label_of(v).word_count()
        for tid in self.members.get(v, ()):
            total += self.routers[tid].labels[v].word_count()
        return total

    def table_words(self, v: int) -> int:
        return 4 * len(self.members.get(v, ()))

    def route(self, u: int, v: int) -> GraphRouteResult | None:
        """Simulate u -> v; None when no tree contains both."""
        la = self.labeling.label_of(u)
        lb = self.labeling.label_of(v)
        est, tid = CoverDistanceLabeling.query(la, lb)
        selection_ops = len(la.entries) + len(lb.entries)
        if est is UNREACHABLE:
            return None
        if u == v:
            return GraphRouteResult(tid, [u], [], 0, [], selection_ops, 2)
        trace = simulate_tree_route(self.routers[tid], u, v, strict=False)
        if trace.total != est:
            raise QueryError("internal: route weight differs from selection")
        return GraphRouteResult(tid, trace.vertices, trace.weights,
                                trace.total, trace.per_hop_ops,
                                selection_ops, 2)


# ---------------------------------------------------------------------------
# 2-hop metric routing
# ---------------------------------------------------------------------------

@dataclass
class MetricRouteResult:
    tree_id: int
    edges: list[tuple[int, int, int]]  # at most 2 overlay edges
    total: int
    header_words: int  # tree id + hub + destination


class MetricRoutingOverlay:
    """Union of per-tree 2-hop emulators over a full metric cover. Routes use
    at most 2 overlay edges and realize the selected tree's distance."""

    def __init__(self, cover: Cover, metric: FiniteMetric | None = None):
        if cover.kind != "metric":
            raise QueryError("metric routing needs a metric cover")
        if not cover.full:
            raise QueryError("metric routing needs a full cover")
        if metric is not None:
            pts = set(metric.points)
            for tr in cover.trees:
                if set(tr.vertices) != pts:
                    raise QueryError("cover trees do not span the metric")
        self.labeling = CoverDistanceLabeling(cover)
        self.emulators = [TwoHopEmulator(tr, tree_id=tid)
                          for tid, tr in enumerate(cover.trees)]
        edges = set()
        for emu in self.emulators:
            edges.update(emu.edges)
        self.overlay_edges = tuple(sorted(edges))

    def overlay_size(self) -> int:
        return len(self.overlay_edges)

    def route(self, u: int, v: int) -> MetricRouteResult:
        est, tid = CoverDistanceLabeling.query(self.labeling.label_of(u),
                                               self.labeling.label_of(v))
        if est is UNREACHABLE:
            raise QueryError(f"no tree contains both {u} and {v}")
        if u == v:
            return MetricRouteResult(tid, [], 0, 3)
        dist, hops = self.emulators[tid].query(u, v)
        if dist != est or len(hops) > 2:
            raise QueryError("internal: 2-hop route disagrees with selection")
        return MetricRouteResult(tid, hops, dist, 3)


# ---------------------------------------------------------------------------
# low-hop path reporting
# ---------------------------------------------------------------------------

class LowHopPathReporting:
    """Path reporting whose answers are overlay paths of at most 2 edges
    (centroid-hub paths inside the selected tree's emulator)."""

    def __init__(self, g: Graph, cover: Cover, hop_bound: int = 2):
        if hop_bound != 2:
            raise QueryError("only hop bound 2 is supported")
        if cover.kind == "hst":
            raise QueryError(
                "hst covers must be realized as trees before path reporting")
        self.bound = cover.bound
        self.emulators = [TwoHopEmulator(tr, tree_id=tid)
                          for tid, tr in enumerate(cover.trees)]
        self.members = _tree_members(cover)
        edges = set()
        for emu in self.emulators:
            edges.update(emu.edges)
        self.underlying_edges = tuple(sorted(edges))

    def query(self, u: int, v: int):
        """(estimate, overlay edge list with <= 2 edges); (UNREACHABLE, None)
        when no tree contains both endpoints."""
        if u == v:
            return 0, []
        best = None
        for tid in _shared_trees(self.members, u, v):
            dist, hops = self.emulators[tid].query(u, v)
            if best is None or dist < best[0]:
                best = (dist, hops)
        if best is None:
            return UNREACHABLE, None
        return best


# ---------------------------------------------------------------------------
# serialization helpers (labels/tables/headers with word counts)
# ---------------------------------------------------------------------------

def cover_label_to_json_obj(label: CoverLabel) -> dict:
    entries = []
    for tid, payload in label.entries:
        if isinstance(payload, HstLabel):
            entries.append({"tree": tid, "type": "hst-lca",
                            "entries": [list(e) for e in payload.entries]})
        else:
            entries.append({"tree": tid, "type": "centroid",
                            "entries": [list(e) for e in payload.entries]})
    return {"vertex": label.vertex, "build_id": label.build_id,
            "words": label.word_count(), "trees": entries}


def routing_label_to_json_obj(scheme: GraphRoutingScheme, v: int) -> dict:
    trees = []
    for tid in scheme.members.get(v, ()):
        lab = scheme.routers[tid].labels[v]
        trees.append({"tree": tid, "tin": lab.tin,
                      "light": [list(e) for e in lab.light],
                      "words": lab.word_count()})
    return {"vertex": v, "words": scheme.label_words(v), "trees": trees}
