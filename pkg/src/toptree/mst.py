"""Incremental minimum spanning forest on top trees, compared with Kruskal."""

from __future__ import annotations

from dataclasses import dataclass

from .dynops import ExposeStrategy, TopTree
from .oracle import kruskal
from .rng import XorShift64Star


def random_graph(seed: int, n_vertices: int, n_edges: int) -> list[tuple[int, int, int]]:
    """``n_edges`` random non-loop edges with distinct integer weights ``1..n_edges`` in random order."""
    if n_vertices < 2 and n_edges:
        raise ValueError("edges need at least two vertices")
    rng = XorShift64Star.from_seed(seed)
    weights = list(range(1, n_edges + 1))
    rng.shuffle(weights)
    edges = []
    for w in weights:
        u = rng.below(n_vertices)
        v = rng.below(n_vertices - 1)
        if v >= u:
            v += 1
        edges.append((u, v, w))
    return edges


@dataclass
class MstResult:
    toptree_total: float
    kruskal_total: float
    links: int = 0
    swaps: int = 0
    rejected: int = 0

    @property
    def ok(self) -> bool:
        return self.toptree_total == self.kruskal_total


def incremental_mst(tree: TopTree, edges) -> MstResult:
    """Insert edges one at a time, keeping a minimum spanning forest in ``tree``.

    A new edge closing a cycle replaces the heaviest edge on that cycle when
    it is lighter than it, and is dropped otherwise.
    """
    result = MstResult(0, 0)
    total = 0
    for u, v, w in edges:
        while tree.num_vertices <= max(u, v):
            tree.add_vertex()
        pm = tree.path_max(u, v)
        if pm is None:
            tree.link(u, v, w)
            total += w
            result.links += 1
        elif w < pm[0]:
            tree.cut(pm[1])
            tree.link(u, v, w)
            total += w - pm[0]
            result.swaps += 1
        else:
            result.rejected += 1
    result.toptree_total = total
    return result


def mst_demo(
    seed: int,
    n_vertices: int,
    n_edges: int,
    strategy: ExposeStrategy | str = ExposeStrategy.FULL_SPLAY,
    ledger: bool = False,
) -> MstResult:
    edges = random_graph(seed, n_vertices, n_edges)
    tree = TopTree(strategy=strategy, ledger=ledger)
    for _ in range(n_vertices):
        tree.add_vertex()
    result = incremental_mst(tree, edges)
    result.kruskal_total = kruskal(edges, n_vertices)
    return result
