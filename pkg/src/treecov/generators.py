"""Deterministic graph generators for the supported instance families.

Every generator consumes a single integer seed through one random.Random
stream in a fixed order, so a (family, params, seed) triple always produces
the same graph bytes.
"""

from __future__ import annotations

import random

from .graph import Graph, GraphError
from .separator import TreeDecomposition
from .graph import VertexSet


def _weight(rng: random.Random, max_weight: int) -> int:
    if max_weight < 1:
        raise GraphError(f"max weight must be >= 1, got {max_weight}")
    return 1 if max_weight == 1 else rng.randint(1, max_weight)


def grid_graph(rows: int, cols: int, seed: int = 0,
               max_weight: int = 1) -> Graph:
    """rows x cols grid; vertex (r, c) is r*cols + c."""
    if rows < 1 or cols < 1:
        raise GraphError("grid needs positive dimensions")
    rng = random.Random(seed)
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, _weight(rng, max_weight)))
            if r + 1 < rows:
                edges.append((v, v + cols, _weight(rng, max_weight)))
    return Graph(rows * cols, edges)


def random_tree(n: int, seed: int = 0, max_weight: int = 1) -> Graph:
    """Uniform random recursive tree: vertex v attaches to a uniform earlier
    vertex."""
    if n < 1:
        raise GraphError("tree needs at least one vertex")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        parent = rng.randrange(v)
        edges.append((parent, v, _weight(rng, max_weight)))
    return Graph(n, edges)


def gnp_graph(n: int, p: float, seed: int = 0, max_weight: int = 1) -> Graph:
    """Erdos-Renyi G(n, p); may be disconnected."""
    if n < 1 or not 0.0 <= p <= 1.0:
        raise GraphError("bad G(n,p) parameters")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, _weight(rng, max_weight)))
    return Graph(n, edges)


def partial_k_tree(n: int, k: int, seed: int = 0, max_weight: int = 1,
                   keep_prob: float = 0.7) -> tuple[Graph, TreeDecomposition]:
    """Random k-tree thinned to a connected partial k-tree, plus its width-k
    tree decomposition (which stays valid for the subgraph).

    The k-tree grows by repeatedly picking an existing bag, dropping one of
    its members, and attaching a fresh vertex to the remaining k-clique. One
    clique edge per new vertex is always kept so the graph stays connected;
    the others survive with probability keep_prob.
    """
    if n < 1 or k < 1:
        raise GraphError("partial k-tree needs n >= 1, k >= 1")
    rng = random.Random(seed)
    base = min(n, k + 1)
    bags: list[tuple[int, ...]] = [tuple(range(base))]
    bag_tree: list[tuple[int, int]] = []
    kept: set[tuple[int, int]] = set()
    for i in range(base):
        for j in range(i + 1, base):
            # spine edges hold the base clique together
            if j == i + 1 or rng.random() < keep_prob:
                kept.add((i, j))
    for v in range(base, n):
        parent_idx = rng.randrange(len(bags))
        parent_bag = bags[parent_idx]
        drop = rng.randrange(len(parent_bag))
        clique = tuple(x for pos, x in enumerate(parent_bag) if pos != drop)
        bags.append(tuple(sorted(clique + (v,))))
        bag_tree.append((parent_idx, len(bags) - 1))
        anchor = clique[rng.randrange(len(clique))]
        for u in clique:
            if u == anchor or rng.random() < keep_prob:
                kept.add((min(u, v), max(u, v)))
    edges = [(u, v, _weight(rng, max_weight)) for u, v in sorted(kept)]
    td = TreeDecomposition(tuple(VertexSet(b) for b in bags),
                           tuple(bag_tree))
    return Graph(n, edges), td
