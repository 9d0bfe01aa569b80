import random

import pytest

from toptree.dynops import TopTree
from toptree.oracle import NaiveForest, validate
from toptree.topnodes import subtree


def make_tree(n, edges=(), **options):
    """A top tree on ``n`` vertices with the given ``(u, v, w)`` edges linked in order."""
    t = TopTree(**options)
    for _ in range(n):
        t.add_vertex()
    for u, v, w in edges:
        t.link(u, v, w)
    return t


def random_forest_edges(rnd, n, m):
    """Up to ``m`` random forest edges on ``n`` vertices, distinct weights."""
    nf = NaiveForest()
    for _ in range(n):
        nf.add_vertex()
    out = []
    tries = 0
    while len(out) < m and tries < 20 * m + 20:
        tries += 1
        u, v = rnd.randrange(n), rnd.randrange(n)
        if u != v and not nf.connected(u, v):
            w = float(len(out) + 1)
            nf.link(u, v, w, len(out))
            out.append((u, v, w))
    rnd.shuffle(out)
    return out


def random_tree(seed, n=12, m=None, exposed=0, **options):
    """A random forest top tree (plus a few splays from random exposes/deexposes)."""
    rnd = random.Random(seed)
    m = n - 1 if m is None else m
    t = make_tree(n, random_forest_edges(rnd, n, m), **options)
    for _ in range(rnd.randrange(4)):  # stir the shape a bit
        v = rnd.randrange(n)
        t.expose(v)
        t.deexpose(v)
    if exposed:
        _expose_some(t, rnd, exposed)
    return t


def _expose_some(t, rnd, k):
    n = t.num_vertices
    order = list(range(n))
    rnd.shuffle(order)
    done = 0
    for v in order:
        root = t._tree_root(v)
        count = root.nb if root is not None else int(t.forest.exposed[v])
        if not t.forest.exposed[v] and count < 2:
            t.expose(v)
            done += 1
            if done == k:
                return


def all_nodes(t):
    return [n for root in t.roots() for n in subtree(root)]


def assert_valid(t):
    report = validate(t)
    assert report.ok, str(report)


@pytest.fixture
def path4():
    """Path 0-1-2-3 with weights 1, 9, 4."""
    return make_tree(4, [(0, 1, 1.0), (1, 2, 9.0), (2, 3, 4.0)], ledger=True)
