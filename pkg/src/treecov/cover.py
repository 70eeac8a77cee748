"""Tree covers for weighted graphs.

Three kinds of cover, all sharing one contract: every tree's distance (or lca
label, for HST covers) dominates the graph distance on every reachable pair,
and on the cover's guarantee domain some tree comes within the recorded
stretch bound.

  spanning  trees are subgraphs of g
  metric    trees may use any integer weights over subsets of V
  hst       hierarchically separated trees; distance = label of the lca

Construction is by repeated Ramsey subset extraction: a pairwise collection
peels subsets off a target set A level by level, and the separator recursion
wraps that around balanced separators. Stretch bounds recorded in a Cover are
measured/certified values, not aspirations; verify_* functions below check
them exhaustively against exact shortest paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .graph import (Graph, UNREACHABLE, all_pairs_distances,
                    connected_components, diameter_bound, induced_subgraph,
                    is_connected)
from .ramsey import (Hst, derive_seed, glue_hsts, ramsey_tree_pair,
                     spanning_ramsey_forest, um_to_tree)
from .treekit import (Tree, tree_distance_matrix, tree_from_json_obj,
                      tree_to_json_obj)

KINDS = ("spanning", "metric", "hst")


class CoverError(ValueError):
    """Invalid cover request or a self-check failure during construction."""


def map_tree(tree: Tree, to_orig) -> Tree:
    """Relabel a tree's vertices through a local-to-original mapping."""
    return Tree((to_orig[v] for v in tree.vertices),
                [(to_orig[u], to_orig[v], w) for u, v, w in tree.edges])


@dataclass
class Cover:
    kind: str
    full: bool
    k: int
    seed: int
    n: int
    trees: list  # Tree for spanning/metric, Hst for hst
    bound: Fraction  # certified stretch bound on the guarantee domain
    guarantee: str  # "all-pairs" | "a-shortest-path-pairs"
    alpha: Fraction  # largest subset distortion met during construction
    trace: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.trees)

    @property
    def total_size(self) -> int:
        total = 0
        for t in self.trees:
            total += len(t.points) if isinstance(t, Hst) else t.n
        return total

    @property
    def average_overlap(self) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return Fraction(self.total_size, self.n)


# ---------------------------------------------------------------------------
# pairwise collections (guarantee: pairs with an A vertex on a shortest path)
# ---------------------------------------------------------------------------

def _attach_missing_tree(tree: Tree, all_vertices, sentinel: int) -> Tree:
    """Sentinel-weight star edges from the tree's smallest vertex to every
    vertex of `all_vertices` the tree misses."""
    have = set(tree.vertices)
    missing = [v for v in all_vertices if v not in have]
    if not missing:
        return tree
    hub = tree.vertices[0]
    edges = list(tree.edges) + [(hub, v, sentinel) for v in missing]
    return Tree(list(tree.vertices) + missing, edges)


def _attach_missing_hst(hst: Hst, all_vertices, sentinel: int) -> Hst:
    have = set(hst.points)
    missing = [v for v in all_vertices if v not in have]
    if not missing:
        return hst
    return glue_hsts([hst], missing, sentinel)


def extend_forest_to_spanning_tree(g: Graph, forest_trees: list[Tree]) -> Tree:
    """Complete a forest of g-edges into a spanning tree of g by adding the
    cheapest non-cycle edges in (weight, u, v) order. g must be connected."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges: list[tuple[int, int, int]] = []
    for t in forest_trees:
        for u, v, w in t.edges:
            if not g.has_edge(u, v) or g.edge_weight(u, v) != w:
                raise CoverError(f"forest edge ({u},{v},{w}) is not a g edge")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise CoverError("forest trees overlap or contain a cycle")
            parent[ru] = rv
            edges.append((u, v, w))
    for u, v, w in sorted(g.edges, key=lambda e: (e[2], e[0], e[1])):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            edges.append((u, v, w))
    if len(edges) != g.n - 1:
        raise CoverError("graph is not connected; cannot span it")
    return Tree(range(g.n), edges)


def pairwise_tree_collection(g: Graph, a_ids: Iterable[int], k: int, seed: int,
                             kind: str, full: bool = False,
                             sentinel: int | None = None,
                             forest_strategy: str = "hst-realization") -> Cover:
    """Level-by-level cover of the target set A.

    Each level runs Ramsey extraction on the surviving part of A inside the
    surviving graph, emits that level's tree(s), and deletes the extracted
    subset from both. Guarantee domain: pairs (x, y) with some A vertex on a
    shortest x-y path; the first level that removes a vertex of that path
    still contains the whole path, so the level bound applies to d_G itself.
    """
    if kind not in KINDS:
        raise CoverError(f"unknown cover kind {kind!r}")
    a_all = sorted(set(a_ids))
    if not a_all:
        raise CoverError("A must be non-empty")
    for a in a_all:
        if not 0 <= a < g.n:
            raise CoverError(f"A vertex {a} out of range")
    if kind == "spanning" and full and not is_connected(g):
        raise CoverError("full spanning covers need a connected graph")
    if sentinel is None:
        sentinel = diameter_bound(g)
    t = len(a_all)
    cur_g = g
    to_orig = tuple(range(g.n))
    a_cur = list(a_all)
    trees: list = []
    level_sizes: list[int] = []
    subsets: list[list[int]] = []
    alphas = [Fraction(1)]
    stretches: list[Fraction] = []
    level = 0
    while a_cur:
        lseed = derive_seed(seed, "level", level)
        local_of = {v: i for i, v in enumerate(to_orig)}
        a_local = sorted(local_of[v] for v in a_cur)
        if kind == "spanning":
            forest = spanning_ramsey_forest(cur_g, a_local, k, lseed,
                                            forest_strategy)
            s_orig = {to_orig[s] for s in forest.subset}
            level_trees = [map_tree(tr, to_orig) for tr in forest.trees]
            if full:
                ext = extend_forest_to_spanning_tree(g, level_trees)
                trees.append(ext)
                level_sizes.append(ext.n)
            else:
                trees.extend(level_trees)
                level_sizes.append(sum(tr.n for tr in level_trees))
            alphas.append(forest.distortion)
            if forest.measured_stretch is not None:
                stretches.append(forest.measured_stretch)
        else:
            pair = ramsey_tree_pair(cur_g, a_local, k, lseed,
                                    glue_sentinel=sentinel)
            s_orig = {to_orig[s] for s in pair.subset}
            if kind == "metric":
                tr = map_tree(pair.point_tree, to_orig)
                if full:
                    tr = _attach_missing_tree(tr, range(g.n), sentinel)
                trees.append(tr)
                level_sizes.append(tr.n)
            else:
                h = pair.hst_tree.map_points(
                    {i: v for i, v in enumerate(to_orig)})
                if full:
                    h = _attach_missing_hst(h, range(g.n), sentinel)
                trees.append(h)
                level_sizes.append(len(h.points))
            alphas.append(pair.distortion)
        subsets.append(sorted(s_orig))
        a_cur = [v for v in a_cur if v not in s_orig]
        level += 1
        if not a_cur:
            break
        keep_local = [i for i, v in enumerate(to_orig) if v not in s_orig]
        sub = induced_subgraph(cur_g, keep_local)
        cur_g = sub.graph
        to_orig = tuple(to_orig[p] for p in sub.to_parent)
    alpha = max(alphas)
    bound = _kind_bound(kind, alpha, stretches)
    trace = {"a": a_all, "t": t, "depth": level, "level_sizes": level_sizes,
             "subsets": subsets,
             "stretches": [str(s) for s in stretches]}
    return Cover(kind, full, k, seed, g.n, trees, bound,
                 "a-shortest-path-pairs", alpha, trace)


def _kind_bound(kind: str, alpha: Fraction,
                stretches: list[Fraction]) -> Fraction:
    if kind == "spanning":
        return max(stretches) if stretches else Fraction(1)
    if kind == "metric":
        return 16 * alpha + 1
    return 6 * alpha


# ---------------------------------------------------------------------------
# separator recursion (guarantee: all reachable pairs)
# ---------------------------------------------------------------------------

def separator_recursion_cover(g: Graph, k: int, seed: int, provider,
                              kind: str, full: bool = False,
                              forest_strategy: str = "hst-realization") -> Cover:
    """Cover of all pairs: take a balanced separator A, build the pairwise
    collection for A, recurse into the components of g - A, and (for full
    covers) glue children's trees index-by-index so the tree count stays the
    max over children rather than the sum.

    Every pair is handled at the first recursion node whose separator meets
    one of its shortest paths (the path is still intact there), so the
    pairwise bounds carry over to original distances unchanged.
    """
    if kind not in KINDS:
        raise CoverError(f"unknown cover kind {kind!r}")
    if g.n == 0:
        raise CoverError("empty graph")
    if kind == "spanning" and full and not is_connected(g):
        raise CoverError("full spanning covers need a connected graph")
    sentinel = diameter_bound(g)
    alphas = [Fraction(1)]
    stretches: list[Fraction] = []
    nodes_trace: list[dict] = []

    def rec(sub_g: Graph, to_orig: tuple[int, ...], node_seed: int) -> list:
        if sub_g.n == 1:
            v = to_orig[0]
            return [Hst.single_leaf(v)] if kind == "hst" else [Tree([v], [])]
        sep = provider.separator(sub_g, to_orig)
        a_local = sorted(sep.ids)
        coll = pairwise_tree_collection(
            sub_g, a_local, k, derive_seed(node_seed, "sep"), kind,
            full=full, sentinel=sentinel, forest_strategy=forest_strategy)
        alphas.append(coll.alpha)
        stretches.extend(Fraction(s) for s in coll.trace["stretches"])
        nodes_trace.append({"n": sub_g.n, "t": len(a_local),
                            "depth": coll.trace["depth"],
                            "level_sizes": coll.trace["level_sizes"],
                            "stretches": coll.trace["stretches"]})
        if kind == "hst":
            mapping = {i: v for i, v in enumerate(to_orig)}
            own = [h.map_points(mapping) for h in coll.trees]
        else:
            own = [map_tree(tr, to_orig) for tr in coll.trees]
        keep = [v for v in range(sub_g.n) if v not in sep]
        child_lists: list[list] = []
        if keep:
            remains = induced_subgraph(sub_g, keep)
            for comp in connected_components(remains.graph):
                inner = induced_subgraph(remains.graph, comp)
                child_orig = tuple(to_orig[remains.to_parent[p]]
                                   for p in inner.to_parent)
                child_lists.append(rec(inner.graph, child_orig,
                                       derive_seed(node_seed, "child",
                                                   child_orig[0])))
        if not full:
            return own + [tr for lst in child_lists for tr in lst]
        width = max((len(lst) for lst in child_lists), default=0)
        glued: list = []
        for j in range(width):
            parts = [lst[j] for lst in child_lists if j < len(lst)]
            glued.append(_glue_full(parts, to_orig, sentinel, kind, sub_g))
        return own + glued

    comps = connected_components(g)
    all_trees: list = []
    if len(comps) == 1:
        all_trees = rec(g, tuple(range(g.n)), seed)
    else:
        per_comp: list[list] = []
        for comp in comps:
            sub = induced_subgraph(g, comp)
            per_comp.append(rec(sub.graph, tuple(sub.to_parent),
                                derive_seed(seed, "top", comp[0])))
        if not full:
            all_trees = [tr for lst in per_comp for tr in lst]
        else:
            width = max(len(lst) for lst in per_comp)
            for j in range(width):
                parts = [lst[j] for lst in per_comp if j < len(lst)]
                all_trees.append(_glue_full(parts, range(g.n), sentinel,
                                            kind, g))
    alpha = max(alphas)
    bound = _kind_bound(kind, alpha, stretches)
    trace = {"nodes": nodes_trace, "sentinel": sentinel,
             "stretches": [str(s) for s in stretches]}
    return Cover(kind, full, k, seed, g.n, all_trees, bound, "all-pairs",
                 alpha, trace)


def _glue_full(parts: list, all_vertices, sentinel: int, kind: str,
               node_g: Graph):
    """Combine vertex-disjoint full trees of sibling components into one tree
    covering `all_vertices` (original ids)."""
    if kind == "hst":
        hst = parts[0] if len(parts) == 1 else glue_hsts(parts, [], sentinel)
        return _attach_missing_hst(hst, all_vertices, sentinel)
    if kind == "metric":
        if len(parts) == 1:
            return _attach_missing_tree(parts[0], all_vertices, sentinel)
        hub = parts[0].vertices[0]
        vertices: list[int] = []
        edges: list[tuple[int, int, int]] = []
        for i, part in enumerate(parts):
            vertices.extend(part.vertices)
            edges.extend(part.edges)
            if i > 0:
                edges.append((hub, part.vertices[0], sentinel))
        return _attach_missing_tree(Tree(vertices, edges), all_vertices,
                                    sentinel)
    # spanning: union the child forests, then complete over this node's graph
    local_of = {v: i for i, v in enumerate(all_vertices)}
    forest_local = [map_tree(part, local_of) for part in parts]
    ext = extend_forest_to_spanning_tree(node_g, forest_local)
    inv = {i: v for v, i in local_of.items()}
    return map_tree(ext, inv)


# ---------------------------------------------------------------------------
# general-graph spanning cover (A = V at every node)
# ---------------------------------------------------------------------------

def ramsey_cover_general(g: Graph, k: int, seed: int,
                         forest_strategy: str = "hst-realization") -> Cover:
    """Spanning tree cover with no separator structure: at every node the
    whole surviving vertex set plays the target role, the extracted subset is
    deleted, and the recursion walks the remaining components."""
    if g.n == 0:
        raise CoverError("empty graph")
    alphas = [Fraction(1)]
    stretches: list[Fraction] = []
    nodes_trace: list[dict] = []
    trees: list[Tree] = []

    def rec(sub_g: Graph, to_orig: tuple[int, ...], node_seed: int) -> None:
        if sub_g.n == 1:
            trees.append(Tree([to_orig[0]], []))
            return
        forest = spanning_ramsey_forest(sub_g, range(sub_g.n), k,
                                        derive_seed(node_seed, "forest"),
                                        forest_strategy)
        trees.extend(map_tree(tr, to_orig) for tr in forest.trees)
        alphas.append(forest.distortion)
        if forest.measured_stretch is not None:
            stretches.append(forest.measured_stretch)
        nodes_trace.append({"n": sub_g.n, "t": sub_g.n,
                            "s": len(forest.subset),
                            "stretch": None if forest.measured_stretch is None
                            else str(forest.measured_stretch)})
        s_set = set(forest.subset)
        keep = [v for v in range(sub_g.n) if v not in s_set]
        if not keep:
            return
        remains = induced_subgraph(sub_g, keep)
        for comp in connected_components(remains.graph):
            inner = induced_subgraph(remains.graph, comp)
            child_orig = tuple(to_orig[remains.to_parent[p]]
                               for p in inner.to_parent)
            rec(inner.graph, child_orig,
                derive_seed(node_seed, "child", child_orig[0]))

    rec(g, tuple(range(g.n)), seed)
    alpha = max(alphas)
    bound = max(stretches) if stretches else Fraction(1)
    trace = {"nodes": nodes_trace, "stretches": [str(s) for s in stretches]}
    return Cover("spanning", False, k, seed, g.n, trees, bound, "all-pairs",
                 alpha, trace)


# ---------------------------------------------------------------------------
# hst -> metric cover
# ---------------------------------------------------------------------------

def hst_cover_to_tree_cover(cover: Cover) -> Cover:
    """Realize every HST as a plain tree on its points; distances blow up by
    at most 8 (verified per tree), so the bound multiplies by 8."""
    if cover.kind != "hst":
        raise CoverError("input must be an hst cover")
    trees = [um_to_tree(h.to_ultrametric()) for h in cover.trees]
    return Cover("metric", cover.full, cover.k, cover.seed, cover.n, trees,
                 cover.bound * 8, cover.guarantee, cover.alpha,
                 dict(cover.trace, realized_from="hst"))


# ---------------------------------------------------------------------------
# exhaustive verification
# ---------------------------------------------------------------------------

def graph_distance_array(g: Graph) -> np.ndarray:
    """All-pairs distances as int64, -1 where unreachable."""
    dm = all_pairs_distances(g)
    out = np.full((g.n, g.n), -1, dtype=np.int64)
    for u in range(g.n):
        row = dm.rows[u]
        for v in range(g.n):
            d = row[v]
            if d is not UNREACHABLE:
                out[u, v] = d
    return out


def _tree_dist_entries(tree_or_hst):
    """(vertex ids, pairwise distance matrix) for either tree flavor."""
    if isinstance(tree_or_hst, Hst):
        pts = tree_or_hst.points
        return pts, tree_or_hst.label_matrix(pts)
    return tree_distance_matrix(tree_or_hst)


def verify_noncontraction(g: Graph, cover: Cover) -> dict:
    """Check d_T >= d_G for every tree and every reachable pair."""
    dg = graph_distance_array(g)
    for ti, tr in enumerate(cover.trees):
        ids, mat = _tree_dist_entries(tr)
        idx = np.asarray(ids, dtype=np.int64)
        sub = dg[np.ix_(idx, idx)]
        mask = sub >= 0
        bad = mask & (mat < sub)
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            return {"ok": False, "tree": ti,
                    "pair": (int(idx[i]), int(idx[j])),
                    "tree_distance": int(mat[i, j]),
                    "graph_distance": int(sub[i, j])}
    return {"ok": True}


def pair_predicate_array(g: Graph, a_ids: Iterable[int],
                         dg: np.ndarray | None = None) -> np.ndarray:
    """Boolean matrix of pairs having some A vertex on a shortest path."""
    if dg is None:
        dg = graph_distance_array(g)
    n = g.n
    mask = np.zeros((n, n), dtype=bool)
    for a in sorted(set(a_ids)):
        col = dg[:, a]
        ok = (col >= 0)
        through = col[:, None] + col[None, :]
        mask |= ok[:, None] & ok[None, :] & (dg >= 0) & (through == dg)
    return mask


def best_distance_array(cover: Cover, n: int) -> np.ndarray:
    """Min over cover trees of the tree distance, int64, -1 where no tree
    contains the pair."""
    best = np.full((n, n), -1, dtype=np.int64)
    for tr in cover.trees:
        ids, mat = _tree_dist_entries(tr)
        idx = np.asarray(ids, dtype=np.int64)
        block = best[np.ix_(idx, idx)]
        seen = block >= 0
        block = np.where(seen & (block <= mat), block, mat)
        best[np.ix_(idx, idx)] = block
    return best


def measure_cover_stretch(g: Graph, cover: Cover,
                          pairs: np.ndarray | None = None) -> dict:
    """Max over pairs of (best tree distance) / d_G, restricted to `pairs`
    (default: all reachable pairs are measured). Pairs at graph distance 0
    only check for a 0-distance tree.

    Returns measured stretch as a Fraction plus the worst witness, and flags
    any in-domain pair no tree covers.
    """
    dg = graph_distance_array(g)
    n = g.n
    best = best_distance_array(cover, n)
    if pairs is None:
        pairs = dg >= 0
    pairs = np.array(pairs, dtype=bool, copy=True)
    np.fill_diagonal(pairs, False)
    missing = []
    num, den = 0, 1
    witness = None
    zero_bad = None
    for u in range(n):
        for v in range(u + 1, n):
            if not pairs[u, v]:
                continue
            b = int(best[u, v])
            d = int(dg[u, v])
            if b < 0:
                missing.append((u, v))
                continue
            if d == 0:
                if b != 0 and zero_bad is None:
                    zero_bad = (u, v, b)
                continue
            if b * den > num * d:
                num, den = b, d
                witness = (u, v, b, d)
    stretch = Fraction(num, den) if witness else Fraction(1)
    return {"ok": not missing and zero_bad is None,
            "stretch": stretch, "witness": witness,
            "missing_pairs": missing, "zero_distance_violation": zero_bad}


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def cover_to_json_obj(cover: Cover) -> dict:
    trees = []
    for tr in cover.trees:
        if isinstance(tr, Hst):
            trees.append({"type": "hst", **tr.to_json_obj()})
        else:
            trees.append({"type": "tree", **tree_to_json_obj(tr)})
    return {"format": "treecov-cover", "version": 1,
            "kind": cover.kind, "full": cover.full, "k": cover.k,
            "seed": cover.seed, "n": cover.n,
            "bound": [cover.bound.numerator, cover.bound.denominator],
            "alpha": [cover.alpha.numerator, cover.alpha.denominator],
            "guarantee": cover.guarantee, "trees": trees,
            "trace": cover.trace}


def cover_from_json_obj(obj: dict) -> Cover:
    if obj.get("format") != "treecov-cover":
        raise CoverError("not a cover object")
    trees = []
    for item in obj["trees"]:
        if item["type"] == "hst":
            trees.append(Hst.from_json_obj(item))
        else:
            trees.append(tree_from_json_obj(item))
    return Cover(obj["kind"], obj["full"], obj["k"], obj["seed"], obj["n"],
                 trees, Fraction(*obj["bound"]), obj["guarantee"],
                 Fraction(*obj["alpha"]), obj.get("trace", {}))
