"""Exact-weight undirected graphs and shortest-path plumbing.

Vertices are dense integer ids 0..n-1. Edge weights are non-negative integers
bounded by MAX_WEIGHT; float inputs must be scaled by a declared factor at load
time (the factor is recorded in the graph metadata). Distances between
disconnected vertices are the dedicated UNREACHABLE sentinel, never a large
finite stand-in, so exactness checks across components stay honest.
"""

from __future__ import annotations

import heapq
import json
from decimal import Decimal, ROUND_HALF_UP
from typing import Iterable, Iterator

MAX_WEIGHT = 1 << 40


class GraphError(ValueError):
    """Structural problem with a graph (bad ids, weights, duplicate edges)."""


class FormatError(GraphError):
    """Malformed graph text / JSON input."""


class _Unreachable:
    """Singleton sentinel for 'no path'. Falsy, compares only to itself."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNREACHABLE"

    def __bool__(self) -> bool:
        return False


UNREACHABLE = _Unreachable()


class VertexSet:
    """Immutable vertex set: sorted id tuple plus a bitmask for O(1) membership."""

    __slots__ = ("ids", "_mask")

    def __init__(self, ids: Iterable[int]):
        self.ids: tuple[int, ...] = tuple(sorted(set(ids)))
        mask = 0
        for v in self.ids:
            if v < 0:
                raise GraphError(f"negative vertex id {v}")
            mask |= 1 << v
        self._mask = mask

    def __contains__(self, v: int) -> bool:
        return v >= 0 and (self._mask >> v) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and self._mask == other._mask

    def __hash__(self) -> int:
        return hash(self._mask)

    def __repr__(self) -> str:
        return f"VertexSet({list(self.ids)})"

    def union(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.ids + other.ids)

    def difference(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(v for v in self.ids if v not in other)

    def intersection(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(v for v in self.ids if v in other)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self._mask & other._mask == 0


def _check_weight(w) -> int:
    if isinstance(w, bool) or not isinstance(w, int):
        raise GraphError(f"edge weight {w!r} is not an integer")
    if w < 0:
        raise GraphError(f"negative edge weight {w}")
    if w > MAX_WEIGHT:
        raise GraphError(f"edge weight {w} exceeds MAX_WEIGHT={MAX_WEIGHT}")
    return w


class Graph:
    """Immutable undirected weighted graph.

    Edges are stored normalized (u < v) and sorted; parallel edges are rejected
    by default or collapsed to the minimum weight with dedupe="min". Self loops
    are always rejected.
    """

    __slots__ = ("n", "edges", "adj", "meta", "_weight_of")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]],
                 meta: dict | None = None, dedupe: str = "reject"):
        if n < 0:
            raise GraphError(f"vertex count {n} is negative")
        if dedupe not in ("reject", "min"):
            raise GraphError(f"unknown dedupe policy {dedupe!r}")
        self.n = n
        seen: dict[tuple[int, int], int] = {}
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self loop at vertex {u}")
            _check_weight(w)
            key = (u, v) if u < v else (v, u)
            if key in seen:
                if dedupe == "reject":
                    raise GraphError(f"duplicate edge {key}")
                seen[key] = min(seen[key], w)
            else:
                seen[key] = w
        self.edges: tuple[tuple[int, int, int], ...] = tuple(
            (u, v, seen[(u, v)]) for (u, v) in sorted(seen))
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        self.adj: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(a)) for a in adj)
        self.meta = dict(meta or {})
        self._weight_of = {(u, v): w for u, v, w in self.edges}

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[tuple[int, int], ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._weight_of

    def edge_weight(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        if key not in self._weight_of:
            raise GraphError(f"no edge {key}")
        return self._weight_of[key]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def shortest_paths(g: Graph, source: int):
    """Dijkstra from one source. Returns (dist, parent) lists; unreachable
    entries are UNREACHABLE / None-parent. Deterministic for equal keys."""
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range")
    dist: list = [UNREACHABLE] * g.n
    parent: list = [None] * g.n
    _dijkstra_into(g, [(0, source, source, None)], dist, parent)
    return dist, parent


def _dijkstra_into(g, heap, dist, parent, src_of=None):
    # heap entries: (d, tiebreak, vertex, parent_vertex); the tiebreak keeps
    # pops deterministic when distances collide (smaller source id wins for
    # multi-source, smaller vertex id otherwise).
    heapq.heapify(heap)
    done = [False] * g.n
    while heap:
        d, tb, v, pv = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        dist[v] = d
        parent[v] = pv
        if src_of is not None:
            src_of[v] = tb
        for nbr, w in g.adj[v]:
            if not done[nbr]:
                heapq.heappush(
                    heap, (d + w, tb if src_of is not None else nbr, nbr, v))


def multi_source_shortest_paths(g: Graph, sources: Iterable[int]):
    """Dijkstra from a set of sources at distance 0.

    Returns (dist, parent, src_of): src_of[v] is the source v was claimed by;
    ties go to the smaller source id. Unreached entries are UNREACHABLE/None.
    """
    srcs = sorted(set(sources))
    for s in srcs:
        if not 0 <= s < g.n:
            raise GraphError(f"source {s} out of range")
    dist: list = [UNREACHABLE] * g.n
    parent: list = [None] * g.n
    src_of: list = [None] * g.n
    heap = [(0, s, s, None) for s in srcs]
    _dijkstra_into(g, heap, dist, parent, src_of)
    return dist, parent, src_of


def walk_to_root(parent: list, v: int) -> list[int]:
    """Follow parent pointers from v to its root; returns the vertex list."""
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


class DistanceMatrix:
    """All-pairs exact distances; rows hold ints or UNREACHABLE."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: list[list]):
        self.n = len(rows)
        self.rows = rows

    def get(self, u: int, v: int):
        return self.rows[u][v]

    def reachable(self, u: int, v: int) -> bool:
        return self.rows[u][v] is not UNREACHABLE

    def max_finite(self) -> int:
        best = 0
        for row in self.rows:
            for d in row:
                if d is not UNREACHABLE and d > best:
                    best = d
        return best


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    rows = []
    for s in range(g.n):
        dist, _ = shortest_paths(g, s)
        rows.append(dist)
    return DistanceMatrix(rows)


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Components as sorted vertex tuples, ordered by minimum vertex id."""
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for nbr, _ in g.adj[v]:
                if not seen[nbr]:
                    seen[nbr] = True
                    stack.append(nbr)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


class Subgraph:
    """Induced subgraph with the id mapping back to the parent graph."""

    __slots__ = ("graph", "to_parent", "from_parent")

    def __init__(self, graph: Graph, to_parent: tuple[int, ...]):
        self.graph = graph
        self.to_parent = to_parent
        self.from_parent = {p: i for i, p in enumerate(to_parent)}


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Subgraph:
    ids = tuple(sorted(set(vertices)))
    for v in ids:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range")
    index = {p: i for i, p in enumerate(ids)}
    edges = [(index[u], index[v], w) for u, v, w in g.edges
             if u in index and v in index]
    return Subgraph(Graph(len(ids), edges, meta=g.meta), ids)


def diameter_bound(g: Graph) -> int:
    """A finite value strictly larger than every finite distance in g."""
    return 1 + sum(w for _, _, w in g.edges)


# ---------------------------------------------------------------------------
# serialization: edge-list text and a JSON mirror
# ---------------------------------------------------------------------------

def _scale_weight(token: str, scale) -> int:
    if scale is None:
        raise FormatError(
            f"float weight {token!r} requires a declared scale factor")
    scaled = (Decimal(token) * Decimal(scale)).quantize(
        Decimal(1), rounding=ROUND_HALF_UP)
    return int(scaled)


def load_graph_text(text: str, dedupe: str = "reject",
                    scale: int | None = None) -> Graph:
    """Parse the edge-list format.

    Lines: 'c <comment>', one 'p <n> <m>' header, then 'e <u> <v> <w>' with
    0-based endpoints. Weights may be floats only when a scale is declared;
    integer weights are multiplied by the scale too so ratios are preserved.
    """
    n = None
    declared_m = None
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(parts) != 3:
                raise FormatError(f"line {lineno}: header needs 'p <n> <m>'")
            n, declared_m = int(parts[1]), int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise FormatError(f"line {lineno}: edge before header")
            if len(parts) != 4:
                raise FormatError(f"line {lineno}: edge needs 'e <u> <v> <w>'")
            u, v = int(parts[1]), int(parts[2])
            token = parts[3]
            try:
                if scale is not None:
                    w = _scale_weight(token, scale)
                elif "." in token or "e" in token.lower():
                    w = _scale_weight(token, scale)  # raises: needs scale
                else:
                    w = int(token)
            except FormatError:
                raise
            except (ValueError, ArithmeticError) as exc:
                raise FormatError(f"line {lineno}: bad weight {token!r}") from exc
            edges.append((u, v, w))
        else:
            raise FormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise FormatError("missing 'p <n> <m>' header")
    if declared_m is not None and declared_m != len(edges):
        raise FormatError(
            f"header declares {declared_m} edges, found {len(edges)}")
    meta = {}
    if scale is not None:
        meta["weight_scale"] = scale
    try:
        return Graph(n, edges, meta=meta, dedupe=dedupe)
    except GraphError as exc:
        raise GraphError(f"invalid graph: {exc}") from exc


def dump_graph_text(g: Graph) -> str:
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"e {u} {v} {w}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def graph_to_json_obj(g: Graph) -> dict:
    return {
        "format": "treecov-graph",
        "n": g.n,
        "edges": [[u, v, w] for u, v, w in g.edges],
        "meta": dict(g.meta),
    }


def graph_from_json_obj(obj: dict, dedupe: str = "reject") -> Graph:
    if not isinstance(obj, dict) or obj.get("format") != "treecov-graph":
        raise FormatError("not a treecov-graph JSON object")
    try:
        n = obj["n"]
        edges = [(int(u), int(v), int(w)) for u, v, w in obj["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed graph JSON: {exc}") from exc
    return Graph(n, edges, meta=obj.get("meta") or {}, dedupe=dedupe)


def load_graph_json(text: str, dedupe: str = "reject") -> Graph:
    return graph_from_json_obj(json.loads(text), dedupe=dedupe)


def dump_graph_json(g: Graph) -> str:
    return json.dumps(graph_to_json_obj(g), sort_keys=True,
                      separators=(",", ":")) + "\n"
