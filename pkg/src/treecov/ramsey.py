"""Ramsey subset extraction and the ultrametric / HST machinery around it.

The central primitive takes a finite integer metric and a parameter k >= 1 and
returns a subset S with |S|^k >= |A|^(k-1) together with a dominating
ultrametric on S whose distortion is measured exactly (a Fraction) rather than
promised a priori. Randomized hierarchical partitions drive the primary path;
a deterministic greedy carve is the fallback and the k = 1 path.

Everything downstream (extension to the whole space, HST realization as a
plain tree, tree pairs and spanning forests) self-verifies its bounds on every
call, exactly, using integer arithmetic.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .graph import (Graph, UNREACHABLE, connected_components, diameter_bound,
                    shortest_paths, multi_source_shortest_paths, walk_to_root)
from .treekit import EulerLca, Tree, TreePathOracle, tree_distance_matrix

_INT64_SAFE = 1 << 62


class MetricError(ValueError):
    """Bad finite metric input or parameters."""


class UltrametricError(ValueError):
    """Values violate the strong triangle inequality (with witness)."""


class ExtensionError(RuntimeError):
    """Ultrametric extension failed its mandatory exhaustive bound check."""


class ConversionError(RuntimeError):
    """HST-to-tree conversion failed its mandatory [rho, 8*rho] check."""


def derive_seed(seed: int, *salts) -> int:
    """Stable child seed from (seed, salts); used for per-component and
    per-level randomness so parallel and serial builds agree bit-for-bit."""
    digest = hashlib.sha256(repr((seed,) + salts).encode()).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << 63) - 1)


# ---------------------------------------------------------------------------
# finite metrics
# ---------------------------------------------------------------------------

class FiniteMetric:
    """Exact integer metric on an explicit point set (point ids are ints)."""

    __slots__ = ("points", "index", "rows")

    def __init__(self, points: Iterable[int], rows: list[list[int]]):
        self.points: tuple[int, ...] = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise MetricError("duplicate points")
        self.index = {p: i for i, p in enumerate(self.points)}
        p = len(self.points)
        if len(rows) != p or any(len(r) != p for r in rows):
            raise MetricError("distance matrix shape mismatch")
        for i in range(p):
            if rows[i][i] != 0:
                raise MetricError(f"nonzero self distance at {self.points[i]}")
            for j in range(i + 1, p):
                d = rows[i][j]
                if not isinstance(d, int) or isinstance(d, bool) or d < 0:
                    raise MetricError(f"bad distance {d!r}")
                if rows[j][i] != d:
                    raise MetricError("asymmetric distance matrix")
        self.rows = rows

    def __len__(self) -> int:
        return len(self.points)

    def d(self, x: int, y: int) -> int:
        return self.rows[self.index[x]][self.index[y]]

    def max_distance(self) -> int:
        return max((max(r) for r in self.rows), default=0)

    def as_numpy(self) -> np.ndarray:
        if self.max_distance() >= _INT64_SAFE // 16:
            raise MetricError("distances too large for vectorized path")
        return np.asarray(self.rows, dtype=np.int64)

    @classmethod
    def from_graph(cls, g: Graph, points: Iterable[int],
                   dist_rows: dict[int, list] | None = None) -> "FiniteMetric":
        """Graph metric restricted to `points`; raises if any pair is
        unreachable (callers split by component first)."""
        pts = tuple(points)
        rows = []
        for u in pts:
            full = dist_rows[u] if dist_rows is not None else shortest_paths(g, u)[0]
            row = []
            for v in pts:
                d = full[v]
                if d is UNREACHABLE:
                    raise MetricError(f"pair ({u},{v}) is unreachable")
                row.append(d)
            rows.append(row)
        return cls(pts, rows)


class Ultrametric:
    """Pairwise ultrametric values over a point set (exact ints)."""

    __slots__ = ("points", "_vals")

    def __init__(self, points: Iterable[int], values: dict[tuple[int, int], int]):
        self.points: tuple[int, ...] = tuple(sorted(set(points)))
        self._vals = {}
        pset = set(self.points)
        for (a, b), v in values.items():
            if a not in pset or b not in pset or a == b:
                raise UltrametricError(f"bad pair ({a},{b})")
            if not isinstance(v, int) or v < 0:
                raise UltrametricError(f"bad value {v!r}")
            self._vals[(a, b) if a < b else (b, a)] = v
        expect = len(self.points) * (len(self.points) - 1) // 2
        if len(self._vals) != expect:
            raise UltrametricError(
                f"{len(self._vals)} pair values, expected {expect}")

    def value(self, x: int, y: int) -> int:
        if x == y:
            return 0
        return self._vals[(x, y) if x < y else (y, x)]

    def items(self):
        return self._vals.items()

    def scaled(self, factor: int) -> "Ultrametric":
        return Ultrametric(self.points,
                           {k: v * factor for k, v in self._vals.items()})


# ---------------------------------------------------------------------------
# HSTs
# ---------------------------------------------------------------------------

class Hst:
    """Hierarchically well-separated tree in canonical form.

    Dense node ids; leaves carry points and label 0; labels never increase on
    the way down; no internal node has exactly one child. The induced
    ultrametric is label(lca(leaf_x, leaf_y)).
    """

    __slots__ = ("labels", "parents", "children", "leaf_point", "leaf_node",
                 "root", "_lca")

    def __init__(self, labels: list[int], parents: list[int | None],
                 leaf_point: list[int | None]):
        n = len(labels)
        if not (len(parents) == len(leaf_point) == n) or n == 0:
            raise UltrametricError("malformed HST arrays")
        roots = [i for i in range(n) if parents[i] is None]
        if len(roots) != 1:
            raise UltrametricError(f"{len(roots)} roots")
        self.root = roots[0]
        children: list[list[int]] = [[] for _ in range(n)]
        for i in range(n):
            p = parents[i]
            if p is not None:
                if not 0 <= p < n:
                    raise UltrametricError(f"bad parent {p}")
                children[p].append(i)
        self.labels = list(labels)
        self.parents = list(parents)
        self.children = [sorted(c) for c in children]
        self.leaf_point = list(leaf_point)
        self.leaf_node: dict[int, int] = {}
        for i, pt in enumerate(self.leaf_point):
            if pt is not None:
                if pt in self.leaf_node:
                    raise UltrametricError(f"point {pt} on two leaves")
                self.leaf_node[pt] = i
        self._lca = None
        self.validate()

    def validate(self) -> None:
        for i in range(len(self.labels)):
            p = self.parents[i]
            if p is not None and self.labels[i] > self.labels[p]:
                raise UltrametricError(
                    f"label of node {i} exceeds its parent's")
            if self.children[i]:
                if self.leaf_point[i] is not None:
                    raise UltrametricError(f"internal node {i} carries a point")
                if len(self.children[i]) == 1:
                    raise UltrametricError(
                        f"non-canonical: node {i} has one child")
            else:
                if self.leaf_point[i] is None:
                    raise UltrametricError(f"leaf {i} carries no point")
                if self.labels[i] != 0:
                    raise UltrametricError(f"leaf {i} has label {self.labels[i]}")

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(sorted(self.leaf_node))

    def _oracle(self) -> EulerLca:
        if self._lca is None:
            self._lca = EulerLca(len(self.labels), self.root, self.children)
        return self._lca

    def lca_node(self, x: int, y: int) -> int:
        return self._oracle().lca(self.leaf_node[x], self.leaf_node[y])

    def ultra(self, x: int, y: int) -> int:
        if x == y:
            return 0
        return self.labels[self.lca_node(x, y)]

    def to_ultrametric(self) -> Ultrametric:
        pts = self.points
        vals = {}
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                vals[(x, y)] = self.ultra(x, y)
        return Ultrametric(pts, vals)

    def label_matrix(self, points: tuple[int, ...]):
        """Vectorized lca labels for the given point order (verification)."""
        if max(self.labels, default=0) >= _INT64_SAFE:
            raise UltrametricError("labels too large for vectorized path")
        nodes = np.asarray([self.leaf_node[p] for p in points], dtype=np.int64)
        lcas = self._oracle().lca_grid(nodes)
        lab = np.asarray(self.labels, dtype=np.int64)
        return lab[lcas]

    def map_points(self, mapping: dict[int, int]) -> "Hst":
        leaf_point = [None if p is None else mapping[p] for p in self.leaf_point]
        return Hst(self.labels, self.parents, leaf_point)

    def to_json_obj(self) -> dict:
        return {"labels": list(self.labels),
                "parents": [-1 if p is None else p for p in self.parents],
                "leaf_point": [None if p is None else p
                               for p in self.leaf_point]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Hst":
        parents = [None if p == -1 else p for p in obj["parents"]]
        return cls(list(obj["labels"]), parents, list(obj["leaf_point"]))

    @classmethod
    def single_leaf(cls, point: int) -> "Hst":
        return cls([0], [None], [point])


def hst_from_ultrametric(um: Ultrametric) -> Hst:
    """Union-find construction; verifies afterwards that lca labels reproduce
    the input values exactly (which is a full strong-triangle check)."""
    pts = um.points
    p = len(pts)
    if p == 0:
        raise UltrametricError("empty point set")
    if p == 1:
        return Hst.single_leaf(pts[0])
    labels: list[int] = [0] * p
    parents: list[int | None] = [None] * p
    leaf_point: list[int | None] = list(pts)
    pos = {pt: i for i, pt in enumerate(pts)}
    dsu = list(range(p))

    def find(x: int) -> int:
        while dsu[x] != x:
            dsu[x] = dsu[dsu[x]]
            x = dsu[x]
        return x

    top = list(range(p))  # dsu root -> current top node id
    by_value: dict[int, list[tuple[int, int]]] = {}
    for (a, b), v in um.items():
        by_value.setdefault(v, []).append((pos[a], pos[b]))
    for v in sorted(by_value):
        groups: dict[int, set[int]] = {}
        for a, b in sorted(by_value[v]):
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            tops = groups.pop(ra, {top[ra]}) | groups.pop(rb, {top[rb]})
            dsu[ra] = rb
            groups[find(rb)] = tops
        for root, tops in sorted(groups.items()):
            node = len(labels)
            labels.append(v)
            parents.append(None)
            leaf_point.append(None)
            for t in sorted(tops):
                parents[t] = node
            top[root] = node
    roots = {top[find(i)] for i in range(p)}
    if len(roots) != 1:
        raise UltrametricError("values do not merge to one root")
    hst = Hst(labels, parents, leaf_point)
    for (a, b), v in um.items():
        got = hst.ultra(a, b)
        if got != v:
            raise UltrametricError(
                f"strong triangle violated near ({a},{b}): "
                f"stored {v}, hierarchy forces {got}")
    return hst


def glue_hsts(parts: list[Hst], extra_points: list[int], label: int) -> Hst:
    """Join HSTs (and bare points as label-0 leaves) under one new root whose
    label is max(label, part root labels) so monotonicity holds."""
    if len(parts) + len(extra_points) == 1 and not extra_points:
        return parts[0]
    labels: list[int] = []
    parents: list[int | None] = []
    leaf_point: list[int | None] = []
    part_roots = []
    for part in parts:
        off = len(labels)
        labels.extend(part.labels)
        leaf_point.extend(part.leaf_point)
        parents.extend(None if q is None else q + off for q in part.parents)
        part_roots.append(part.root + off)
    root = len(labels)
    top_label = max([label] + [labels[r] for r in part_roots])
    labels.append(top_label)
    parents.append(None)
    leaf_point.append(None)
    for r in part_roots:
        parents[r] = root
    for pt in extra_points:
        labels.append(0)
        parents.append(root)
        leaf_point.append(pt)
    return Hst(labels, parents, leaf_point)


# ---------------------------------------------------------------------------
# ramsey subset extraction
# ---------------------------------------------------------------------------

@dataclass
class RamseyOutcome:
    subset: tuple[int, ...]
    um: Ultrametric
    hst: Hst
    distortion: Fraction
    attempts: int
    used_fallback: bool


def _rho_from_levels(levels: list[np.ndarray], scales: list[int]) -> np.ndarray:
    """Pairwise ultrametric values of a nested partition hierarchy: the scale
    of the last level where the pair still shares a cluster."""
    arr = np.stack(levels)
    diff = arr[:, :, None] != arr[:, None, :]
    any_diff = diff.any(axis=0)
    first = diff.argmax(axis=0)
    scale_arr = np.asarray(scales, dtype=np.int64)
    prev = np.maximum(first - 1, 0)
    return np.where(any_diff, scale_arr[prev], 0)


def _random_hierarchy(dist: np.ndarray, rng: random.Random, k: int):
    """One randomized nested partition; returns (levels, scales, padded)."""
    p = dist.shape[0]
    delta = int(dist.max())
    levels = [np.zeros(p, dtype=np.int64)]
    scales = [delta]
    padded = np.ones(p, dtype=bool)
    scale = delta
    while scale > 0:
        scale //= 2
        pad = scale // (8 * k)
        lo, hi = scale // 4, scale // 2
        radius = rng.randint(lo, hi) if hi > lo else lo
        perm = list(range(p))
        rng.shuffle(perm)
        perm_arr = np.asarray(perm, dtype=np.int64)
        prev = levels[-1]
        elig = (dist[perm_arr] <= radius) & (prev[perm_arr][:, None] == prev[None, :])
        owner = elig.argmax(axis=0)  # first eligible in permutation order
        codes = prev * np.int64(p) + owner
        _, new = np.unique(codes, return_inverse=True)
        close = dist <= pad
        same = new[:, None] == new[None, :]
        padded &= ~np.any(close & ~same, axis=1)
        levels.append(new.astype(np.int64))
        scales.append(scale)
    return levels, scales, padded


def _carve_values(dist: np.ndarray) -> np.ndarray:
    """Deterministic greedy ball-carving hierarchy; dominating ultrametric
    values for every pair (used for k=1 and as the randomized fallback)."""
    p = dist.shape[0]
    rho = np.zeros((p, p), dtype=np.int64)

    def rec(idx: list[int]) -> None:
        if len(idx) <= 1:
            return
        sub = dist[np.ix_(idx, idx)]
        delta = int(sub.max())
        if delta == 0:
            return
        unassigned = list(idx)
        clusters: list[list[int]] = []
        while unassigned:
            pivot = unassigned[0]
            ball = [x for x in unassigned if dist[pivot, x] <= delta // 4]
            ball_set = set(ball)
            unassigned = [x for x in unassigned if x not in ball_set]
            clusters.append(ball)
        if len(clusters) > 1:
            cid = np.empty(len(idx), dtype=np.int64)
            lookup = {}
            for ci, cl in enumerate(clusters):
                for x in cl:
                    lookup[x] = ci
            for i, x in enumerate(idx):
                cid[i] = lookup[x]
            cross = cid[:, None] != cid[None, :]
            block = rho[np.ix_(idx, idx)]
            block[cross] = delta
            rho[np.ix_(idx, idx)] = block
        for cl in clusters:
            rec(cl)

    rec(list(range(p)))
    return rho


def _distortion(rho: np.ndarray, dist: np.ndarray, idx: list[int]) -> Fraction:
    """Exact max rho/d over the given positions (pairs with d > 0)."""
    best_num, best_den = 1, 1
    for i, a in enumerate(idx):
        for b in idx[i + 1:]:
            d = int(dist[a, b])
            if d <= 0:
                continue
            r = int(rho[a, b])
            if r * best_den > best_num * d:
                best_num, best_den = r, d
    return Fraction(best_num, best_den)


def _um_from_rho(points: tuple[int, ...], rho: np.ndarray,
                 idx: list[int]) -> Ultrametric:
    vals = {}
    for i, a in enumerate(idx):
        for j in range(i + 1, len(idx)):
            b = idx[j]
            vals[(points[a], points[b])] = int(rho[a, b])
    return Ultrametric([points[i] for i in idx], vals)


def metric_ramsey(metric: FiniteMetric, k: int, seed: int) -> RamseyOutcome:
    """Subset S with |S|^k >= |A|^(k-1), a dominating ultrametric on S (as an
    HST) and its exact measured distortion.

    k = 1 keeps every point (deterministic carve hierarchy). k >= 2 runs up to
    64 randomized hierarchical partitions keeping padded points, then falls
    back to the deterministic carve (which keeps every point).
    """
    if not isinstance(k, int) or k < 1:
        raise MetricError(f"k must be a positive integer, got {k!r}")
    p = len(metric)
    if p == 0:
        raise MetricError("empty metric")
    points = metric.points
    if p == 1:
        return RamseyOutcome((points[0],), Ultrametric(points, {}),
                             Hst.single_leaf(points[0]), Fraction(1), 0, False)
    dist = metric.as_numpy()
    all_idx = list(range(p))

    def finish(rho, idx, attempts, fallback):
        if len(idx) ** k < p ** (k - 1):
            raise MetricError(
                f"internal: subset of {len(idx)} misses the cardinality "
                f"guarantee for {p} points at k={k}")
        um = _um_from_rho(points, rho, idx)
        hst = hst_from_ultrametric(um)
        alpha = _distortion(rho, dist, idx)
        # domination is structural; verify exactly anyway (cheap)
        for i, a in enumerate(idx):
            for b in idx[i + 1:]:
                if rho[a, b] < dist[a, b]:
                    raise MetricError(
                        f"internal: hierarchy fails to dominate at "
                        f"({points[a]},{points[b]})")
        return RamseyOutcome(tuple(points[i] for i in idx), um, hst,
                             alpha, attempts, fallback)

    if int(dist.max()) == 0 or k == 1:
        return finish(_carve_values(dist), all_idx, 0, False)

    for attempt in range(1, 65):
        rng = random.Random(derive_seed(seed, "ramsey-attempt", attempt))
        levels, scales, padded = _random_hierarchy(dist, rng, k)
        kept = [i for i in all_idx if padded[i]]
        if kept and len(kept) ** k >= p ** (k - 1):
            rho = _rho_from_levels(levels, scales)
            return finish(rho, kept, attempt, False)
    return finish(_carve_values(dist), all_idx, 64, True)


# ---------------------------------------------------------------------------
# extension to a superset
# ---------------------------------------------------------------------------

@dataclass
class ExtensionResult:
    um: Ultrametric
    nearest: dict[int, tuple[int, int]]  # x -> (anchor point, distance)


def extend_ultrametric(metric: FiniteMetric, base_points: Iterable[int],
                       base_um: Ultrametric, alpha: Fraction) -> ExtensionResult:
    """Extend a dominating ultrametric from Y to the whole point set.

    rho~(x, y) = max(3*rho(s_x, s_y), 3*d(x, s_x), 3*d(y, s_y)) with s_x the
    nearest base point (ties to the smaller id). Verified exhaustively before
    returning: d <= rho~ everywhere and rho~ <= 6*alpha*d whenever one side is
    a base point. alpha must certify rho on Y (rho <= alpha*d).
    """
    base = tuple(sorted(set(base_points)))
    if not base:
        raise MetricError("empty base point set")
    pset = set(metric.points)
    for y in base:
        if y not in pset:
            raise MetricError(f"base point {y} not in metric")
    if set(base_um.points) != set(base):
        raise MetricError("ultrametric points differ from base set")
    if alpha < 1:
        raise MetricError(f"alpha must be >= 1, got {alpha}")
    nearest: dict[int, tuple[int, int]] = {}
    for x in metric.points:
        best = min((metric.d(x, y), y) for y in base)
        nearest[x] = (best[1], best[0])
    pts = tuple(sorted(metric.points))
    vals: dict[tuple[int, int], int] = {}
    for i, x in enumerate(pts):
        sx, dx = nearest[x]
        for y in pts[i + 1:]:
            sy, dy = nearest[y]
            vals[(x, y)] = max(3 * base_um.value(sx, sy), 3 * dx, 3 * dy)
    um = Ultrametric(pts, vals)
    # mandatory exhaustive post-verification of both bounds
    num, den = alpha.numerator, alpha.denominator
    base_set = set(base)
    for (x, y), v in vals.items():
        d = metric.d(x, y)
        if v < d:
            raise ExtensionError(
                f"domination fails at ({x},{y}): value {v} < distance {d}")
        if (x in base_set or y in base_set) and v * den > 6 * num * d:
            raise ExtensionError(
                f"upper bound fails at ({x},{y}): {v} > 6*{alpha}*{d}")
    return ExtensionResult(um, nearest)


# ---------------------------------------------------------------------------
# ultrametric -> plain tree on the points
# ---------------------------------------------------------------------------

def _pow2_up(v: int) -> int:
    return 0 if v == 0 else 1 << (v - 1).bit_length()


def um_to_tree(um: Ultrametric) -> Tree:
    """Steiner-free tree on the points with rho <= d_T <= 8*rho, exactly.

    Values are rounded up to powers of two (< factor 2), the rounded HST then
    has strictly decreasing labels down every path, and connecting each child
    representative to the node representative (min leaf id) with edge weight =
    node label makes climbs geometric: d_T <= 4 * rounded <= 8 * rho, while
    every cross path still crosses one full-label edge, so d_T >= rho.
    Verified exhaustively on every call.
    """
    pts = um.points
    if len(pts) == 1:
        return Tree(pts, [])
    rounded = Ultrametric(pts, {k: _pow2_up(v) for k, v in um.items()})
    hst = hst_from_ultrametric(rounded)
    n_nodes = len(hst.labels)
    rep: list[int | None] = [None] * n_nodes
    order = sorted(range(n_nodes),
                   key=lambda i: -_hst_depth(hst, i))
    for node in order:
        if not hst.children[node]:
            rep[node] = hst.leaf_point[node]
        else:
            rep[node] = min(rep[c] for c in hst.children[node])
    edges = []
    for node in range(n_nodes):
        for c in hst.children[node]:
            if rep[c] != rep[node]:
                edges.append((rep[node], rep[c], hst.labels[node]))
    tree = Tree(pts, edges)
    verify_tree_against_ultrametric(tree, um)
    return tree


def _hst_depth(hst: Hst, node: int) -> int:
    d = 0
    while hst.parents[node] is not None:
        node = hst.parents[node]
        d += 1
    return d


def verify_tree_against_ultrametric(tree: Tree, um: Ultrametric) -> None:
    """Exhaustive rho <= d_T <= 8*rho check; raises ConversionError."""
    ids, mat = tree_distance_matrix(tree)
    pos = {v: i for i, v in enumerate(ids)}
    for (a, b), v in um.items():
        dt = int(mat[pos[a], pos[b]])
        if not v <= dt <= 8 * v:
            raise ConversionError(
                f"tree distance {dt} outside [{v}, {8 * v}] at ({a},{b})")


# ---------------------------------------------------------------------------
# tree pair (HST over everything + plain tree over everything)
# ---------------------------------------------------------------------------

@dataclass
class RamseyTreePair:
    subset: tuple[int, ...]
    distortion: Fraction
    hst_tree: Hst
    point_tree: Tree
    nearest: dict[int, tuple[int, int] | None]
    glue_sentinel: int | None
    trace: dict = field(default_factory=dict)


def _component_rows(g: Graph, comp: tuple[int, ...]) -> dict[int, list]:
    return {v: shortest_paths(g, v)[0] for v in comp}


def ramsey_tree_pair(g: Graph, a_ids: Iterable[int], k: int, seed: int,
                     glue_sentinel: int | None = None) -> RamseyTreePair:
    """Ramsey subset S of A plus two structures over all of V: an HST whose
    lca labels dominate d_G (and are <= 6*alpha*d_G against S), and a plain
    tree dominating d_G with distance <= (16*alpha + 1)*d_G against S.

    Components without A vertices are glued in with sentinel-weight edges.
    When g is an induced subgraph of something larger, pass the enclosing
    graph's diameter bound as glue_sentinel so cross-component tree distances
    still dominate distances of the enclosing graph.
    """
    a_sorted = tuple(sorted(set(a_ids)))
    if not a_sorted:
        raise MetricError("A must be non-empty")
    for a in a_sorted:
        if not 0 <= a < g.n:
            raise MetricError(f"A vertex {a} out of range")
    comps = connected_components(g)
    sentinel: int | None = None
    if len(comps) > 1:
        sentinel = glue_sentinel if glue_sentinel is not None else diameter_bound(g)
    subset: list[int] = []
    alphas: list[Fraction] = []
    hst_parts: list[Hst] = []
    loose_points: list[int] = []
    tree_edges: list[tuple[int, int, int]] = []
    anchors: list[int] = []  # min S id per A-component
    nearest: dict[int, tuple[int, int] | None] = {}
    trace: dict = {"components": []}
    a_set = set(a_sorted)
    for comp in comps:
        a_here = [v for v in comp if v in a_set]
        if not a_here:
            loose_points.extend(comp)
            for v in comp:
                nearest[v] = None
            continue
        rows = _component_rows(g, comp)
        metric_a = FiniteMetric.from_graph(g, a_here, rows)
        out = metric_ramsey(metric_a, k, derive_seed(seed, "comp", comp[0]))
        metric_c = FiniteMetric.from_graph(g, comp, rows)
        ext = extend_ultrametric(metric_c, out.subset, out.um, out.distortion)
        hst_parts.append(hst_from_ultrametric(ext.um))
        s_set = set(out.subset)
        core = um_to_tree(out.um)
        tree_edges.extend(core.edges)
        for v in comp:
            if v in s_set:
                nearest[v] = (v, 0)
            else:
                sv, dv = ext.nearest[v]
                nearest[v] = (sv, dv)
                tree_edges.append((v, sv, dv))
        subset.extend(out.subset)
        alphas.append(out.distortion)
        anchors.append(min(out.subset))
        trace["components"].append({
            "vertices": len(comp), "a": len(a_here), "s": len(out.subset),
            "alpha": str(out.distortion), "attempts": out.attempts,
            "fallback": out.used_fallback})
    if not anchors:
        raise MetricError("A misses every component")
    hub = anchors[0]
    for other in anchors[1:]:
        tree_edges.append((hub, other, sentinel))
    for v in loose_points:
        tree_edges.append((hub, v, sentinel))
    point_tree = Tree(range(g.n), tree_edges)
    if len(hst_parts) == 1 and not loose_points:
        hst_tree = hst_parts[0]
    else:
        hst_tree = glue_hsts(hst_parts, loose_points, sentinel)
    return RamseyTreePair(tuple(sorted(subset)), max(alphas), hst_tree,
                          point_tree, nearest, sentinel, trace)


# ---------------------------------------------------------------------------
# spanning forest realization
# ---------------------------------------------------------------------------

@dataclass
class RamseyForest:
    subset: tuple[int, ...]
    trees: list[Tree]  # one spanning tree per component of g
    distortion: Fraction
    measured_stretch: Fraction | None  # max d_F/d_G over u in S, v reachable
    trace: dict = field(default_factory=dict)


def _spt_tree(g: Graph, comp: tuple[int, ...], root: int) -> Tree:
    _, parent = shortest_paths(g, root)
    edges = [(v, parent[v], g.edge_weight(v, parent[v]))
             for v in comp if parent[v] is not None]
    return Tree(comp, edges)


def _hst_reps(hst: Hst) -> dict[int, int]:
    rep: dict[int, int] = {}
    order = sorted(range(len(hst.labels)), key=lambda i: -_hst_depth(hst, i))
    for node in order:
        if not hst.children[node]:
            rep[node] = hst.leaf_point[node]
        else:
            rep[node] = min(rep[c] for c in hst.children[node])
    return rep


def spanning_ramsey_forest(g: Graph, a_ids: Iterable[int], k: int, seed: int,
                           strategy: str = "hst-realization") -> RamseyForest:
    """Spanning forest (edges of g, one tree per component) whose stretch
    against pairs (u in S, v) is measured exactly.

    "hst-realization": union of shortest paths between HST representatives
    plus nearest-anchor paths for uncovered vertices, then the shortest-path
    forest of that union rooted at the top representative. "spt-star" is the
    plain baseline: one shortest-path tree per component.
    """
    if strategy not in ("hst-realization", "spt-star"):
        raise MetricError(f"unknown forest strategy {strategy!r}")
    a_sorted = tuple(sorted(set(a_ids)))
    if not a_sorted:
        raise MetricError("A must be non-empty")
    a_set = set(a_sorted)
    comps = connected_components(g)
    trees: list[Tree] = []
    subset: list[int] = []
    alphas: list[Fraction] = [Fraction(1)]
    best_num, best_den = 0, 1
    has_ratio = False
    trace: dict = {"components": [], "strategy": strategy}
    for comp in comps:
        a_here = [v for v in comp if v in a_set]
        if not a_here:
            trees.append(_spt_tree(g, comp, comp[0]))
            continue
        rows = {a: shortest_paths(g, a)[0] for a in a_here}
        metric_a = FiniteMetric.from_graph(g, a_here, rows)
        out = metric_ramsey(metric_a, k, derive_seed(seed, "comp", comp[0]))
        subset.extend(out.subset)
        alphas.append(out.distortion)
        s_sorted = tuple(sorted(out.subset))
        if strategy == "spt-star":
            root = min(s_sorted)
            tree = _spt_tree(g, comp, root)
        else:
            tree = _realize_hst_forest(g, comp, out.hst, s_sorted)
        trees.append(tree)
        oracle = TreePathOracle(tree)
        for u in s_sorted:
            row = rows.get(u)
            if row is None:
                row = shortest_paths(g, u)[0]
                rows[u] = row
            for v in comp:
                dg = row[v]
                if dg is UNREACHABLE or dg == 0:
                    continue
                df = oracle.distance(u, v)
                if df * best_den > best_num * dg:
                    best_num, best_den = df, dg
                    has_ratio = True
        trace["components"].append({
            "vertices": len(comp), "a": len(a_here), "s": len(out.subset),
            "alpha": str(out.distortion), "fallback": out.used_fallback})
    measured = Fraction(best_num, best_den) if has_ratio else None
    return RamseyForest(tuple(sorted(subset)), trees, max(alphas),
                        measured, trace)


def _realize_hst_forest(g: Graph, comp: tuple[int, ...], hst: Hst,
                        s_sorted: tuple[int, ...]) -> Tree:
    rep = _hst_reps(hst)
    covered: set[int] = set(s_sorted)
    union_adj: dict[int, dict[int, int]] = {v: {} for v in comp}

    def add_edge(u: int, v: int) -> None:
        w = g.edge_weight(u, v)
        union_adj[u][v] = w
        union_adj[v][u] = w

    sp_cache: dict[int, tuple[list, list]] = {}

    def add_path(src: int, dst: int) -> None:
        if src == dst:
            return
        if src not in sp_cache:
            sp_cache[src] = shortest_paths(g, src)
        _, parent = sp_cache[src]
        path = walk_to_root(parent, dst)
        for x, y in zip(path, path[1:]):
            add_edge(x, y)
            covered.add(x)
            covered.add(y)

    for node in range(len(hst.labels)):
        for c in hst.children[node]:
            if rep[c] != rep[node]:
                add_path(rep[node], rep[c])
    dist_s, parent_s, _ = multi_source_shortest_paths(g, s_sorted)
    for v in comp:
        if v not in covered:
            path = walk_to_root(parent_s, v)
            for x, y in zip(path, path[1:]):
                add_edge(x, y)
                covered.add(x)
                covered.add(y)
            covered.add(v)
    # shortest-path forest of the union, rooted at the top representative
    root = rep[hst.root]
    par: dict[int, int | None] = {}
    done: set[int] = set()
    heap = [(0, root, -1)]
    while heap:
        d, v, pv = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        par[v] = pv if pv >= 0 else None
        for nbr, w in sorted(union_adj[v].items()):
            if nbr not in done:
                heapq.heappush(heap, (d + w, nbr, v))
    if len(done) != len(comp):
        raise MetricError("internal: realization union is not connected")
    edges = [(v, par[v], g.edge_weight(v, par[v]))
             for v in comp if par[v] is not None]
    return Tree(comp, edges)
