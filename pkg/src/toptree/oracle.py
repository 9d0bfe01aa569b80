"""Brute-force reference answers and the whole-structure validator.

Nothing here is fast and nothing here mutates a live top tree: the validator
reads flip bits instead of pushing them and rebuilds its own materialised view.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .topnodes import (
    MISSING,
    has_left_boundary,
    has_middle_boundary,
    has_right_boundary,
)
from .splay import lg
from .summaries import compute_summary


class NaiveForest:
    """Adjacency-set forest answering every query by traversal."""

    def __init__(self) -> None:
        self.adj: list[dict[int, int]] = []  # vertex -> {neighbour: edge id}
        self.exposed: list[bool] = []
        self.edges: dict[int, tuple[int, int, float]] = {}

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    def add_vertex(self) -> int:
        self.adj.append({})
        self.exposed.append(False)
        return len(self.adj) - 1

    def link(self, u: int, v: int, weight: float, edge: int) -> None:
        self.adj[u][v] = edge
        self.adj[v][u] = edge
        self.edges[edge] = (u, v, weight)

    def cut(self, edge: int) -> None:
        u, v, _ = self.edges.pop(edge)
        del self.adj[u][v]
        del self.adj[v][u]

    def find_edge(self, u: int, v: int) -> int | None:
        return self.adj[u].get(v)

    def component(self, v: int) -> list[int]:
        seen = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for v in range(len(self.adj)):
            if v not in seen:
                comp = self.component(v)
                seen.update(comp)
                out.append(comp)
        return out

    def connected(self, u: int, v: int) -> bool:
        return u == v or v in self.component(u)

    def path_edges(self, u: int, v: int) -> list[int] | None:
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for y, e in self.adj[x].items():
                if y not in prev:
                    prev[y] = (x, e)
                    queue.append(y)
        if v not in prev:
            return None
        out = []
        while prev[v] is not None:
            v, e = prev[v]
            out.append(e)
        return out

    def path_max(self, u: int, v: int) -> float | None:
        """Heaviest weight on the u-v path; ``-inf`` for ``u == v``, ``None`` if disconnected."""
        path = self.path_edges(u, v)
        if path is None:
            return None
        return max((self.edges[e][2] for e in path), default=-math.inf)

    def exposed_in_component(self, v: int) -> list[int]:
        return [w for w in self.component(v) if self.exposed[w]]


def naive_connected(forest: NaiveForest, u: int, v: int) -> bool:
    return forest.connected(u, v)


def naive_path_max(forest: NaiveForest, u: int, v: int):
    return forest.path_max(u, v)


def naive_components(forest: NaiveForest) -> list[list[int]]:
    return forest.components()


def naive_boundary_vertices(forest, edges) -> set[int]:
    """Boundary vertices of the cluster made of ``edges`` in a :class:`~toptree.forest.Forest`.

    A vertex is a boundary vertex if it touches the cluster and is exposed or
    touches an edge outside it.  Raises ``ValueError`` for an empty or
    disconnected edge set.
    """
    edges = list(edges)
    if not edges:
        raise ValueError("empty cluster")
    ends = forest.ends
    inside: dict[int, int] = {}
    adj: dict[int, list[int]] = {}
    for e in edges:
        a, b = ends[e]
        inside[a] = inside.get(a, 0) + 1
        inside[b] = inside.get(b, 0) + 1
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = ends[edges[0]][0]
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(inside):
        raise ValueError(f"cluster of {len(edges)} edges is disconnected")
    exposed, head, nxt = forest.exposed, forest.head, forest.nxt
    out = set()
    for w, k in inside.items():
        if exposed[w]:
            out.add(w)
            continue
        rec = head[w]
        deg = 0
        while rec != -1 and deg <= k:
            deg += 1
            rec = nxt[rec]
        if deg > k:
            out.add(w)
    return out


def naive_consuming_node(tree, v: int):
    """Lowest common ancestor of the leaves of all edges at ``v``, by explicit walks."""
    edges = list(tree.forest.incident_edges(v))
    if not edges:
        return None
    paths = []
    for e in edges:
        path = []
        node = tree.leaves[e]
        while node is not None:
            path.append(node)
            node = node.parent
        paths.append(path[::-1])
    lca = None
    for level in zip(*paths):
        if all(n is level[0] for n in level):
            lca = level[0]
        else:
            break
    return lca


def kruskal(edges, num_vertices: int | None = None) -> float:
    """Total weight of a minimum spanning forest; ties broken by edge index."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = 0
    order = sorted(range(len(edges)), key=lambda i: (edges[i][2], i))
    for i in order:
        u, v, w = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            total += w
    return total


# -- validation ---------------------------------------------------------------


@dataclass
class Violation:
    invariant: str
    node: int | None
    detail: str

    def __str__(self) -> str:
        node = "-" if self.node is None else self.node
        return f"VIOLATION {self.invariant} node={node} {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, invariant: str, node, detail: str) -> None:
        self.violations.append(Violation(invariant, node, detail))

    def lines(self) -> list[str]:
        return [str(v) for v in self.violations] if self.violations else ["ok"]

    def __str__(self) -> str:
        return "\n".join(self.lines())


class _View:
    """Materialised copy of one top-tree node, in the absolute (root) frame."""

    __slots__ = ("node", "left", "right", "edges", "inside", "boundary", "central", "pos", "anc_parity")

    def __init__(self, node):
        self.node = node
        self.left = self.right = None
        self.edges = 0
        self.inside: dict[int, int] = {}
        self.boundary: set[int] = set()
        self.central = None
        self.pos = (None, None, None)  # left, middle, right boundary vertex
        self.anc_parity = False

    @property
    def leftmost(self):
        return self.pos[0] if self.pos[0] is not None else self.pos[1]

    @property
    def rightmost(self):
        return self.pos[2] if self.pos[2] is not None else self.pos[1]


def _check_forest(forest, report: ValidationReport) -> dict[int, int]:
    degree = {}
    seen_records: dict[int, int] = {}
    for v in range(forest.num_vertices):
        rec = forest.head[v]
        prev = -1
        deg = 0
        while rec != -1:
            e, side = rec >> 1, rec & 1
            ends = forest.ends[e] if 0 <= e < len(forest.ends) else None
            if ends is None or ends[side] != v:
                report.add("forest_adjacency", None, f"vertex {v} lists record {rec} that is not its own")
                break
            if forest.prv[rec] != prev:
                report.add("forest_adjacency", None, f"vertex {v}: broken back link at record {rec}")
            seen_records[rec] = seen_records.get(rec, 0) + 1
            deg += 1
            prev = rec
            rec = forest.nxt[rec]
            if deg > 2 * len(forest.ends) + 1:
                report.add("forest_adjacency", None, f"vertex {v}: cyclic incidence list")
                break
        degree[v] = deg
    for e in forest.edges():
        for side in (0, 1):
            if seen_records.get(2 * e + side, 0) != 1:
                report.add("forest_adjacency", None, f"edge {e} is not listed exactly once at endpoint side {side}")

    parent = list(range(forest.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in forest.edges():
        a, b = forest.ends[e]
        ra, rb = find(a), find(b)
        if ra == rb:
            report.add("forest_acyclic", None, f"edge {e} ({a},{b}) closes a cycle")
        else:
            parent[ra] = rb
    exposed_per_tree: dict[int, int] = {}
    for v in range(forest.num_vertices):
        if forest.exposed[v]:
            r = find(v)
            exposed_per_tree[r] = exposed_per_tree.get(r, 0) + 1
    for r, k in exposed_per_tree.items():
        if k > 2:
            report.add("exposure_limit", None, f"tree of vertex {r} has {k} exposed vertices")
    return degree


def validate(tree) -> ValidationReport:
    """Check every structural, boundary, orientation, ledger and summary invariant."""
    report = ValidationReport()
    forest = tree.forest
    degree = _check_forest(forest, report)

    # leaf <-> edge bijection, and the set of roots
    roots = {}
    for e in forest.edges():
        leaf = tree.leaves[e] if e < len(tree.leaves) else None
        if leaf is None or not leaf.alive or leaf.children is not None or leaf.edge != e:
            report.add("leaf_edge_bijection", None if leaf is None else leaf.uid, f"edge {e} has no live leaf")
            continue
        node, hops = leaf, 0
        while node.parent is not None and hops <= 4 * len(tree.leaves) + 4:
            node = node.parent
            hops += 1
        if node.parent is not None:
            report.add("structure", leaf.uid, "parent links contain a cycle")
            return report
        roots[node.uid] = node

    views = []
    visited: set[int] = set()
    leaf_edges: list[int] = []
    for root in roots.values():
        if not root.alive:
            report.add("structure", root.uid, "destroyed node reachable as root")
        _materialise(tree, root, degree, report, views, visited, leaf_edges)
    if sorted(leaf_edges) != sorted(forest.edges()):
        report.add("leaf_edge_bijection", None, "leaves reachable from the roots do not match the forest edges")

    if tree.ledger is not None:
        phi = math.fsum(lg(v.node.size) for v in views)
        if abs(phi - tree.ledger.phi) > 1e-9 * max(1.0, abs(phi)):
            report.add("potential", None, f"ledger phi {tree.ledger.phi!r} != recomputed {phi!r}")
    return report


def _materialise(tree, root, degree, report, views, visited, leaf_edges) -> None:
    forest = tree.forest
    spec = tree.spec
    order = []
    stack = [(root, None, False)]  # node, parent view, parity of proper ancestors
    made = {}
    while stack:
        node, parent_view, anc_parity = stack.pop()
        if node.uid in visited:
            report.add("structure", node.uid, "node reachable twice")
            continue
        visited.add(node.uid)
        view = _View(node)
        view.anc_parity = anc_parity
        made[node.uid] = view
        order.append(view)
        if not node.alive:
            report.add("structure", node.uid, "destroyed node is still linked")
        parity = anc_parity ^ node.flip
        if node.children is None:
            if node.edge < 0 or not forest.is_edge(node.edge):
                report.add("leaf_edge_bijection", node.uid, f"leaf for dead edge {node.edge}")
                continue
            leaf_edges.append(node.edge)
            continue
        if len(node.children) != 2 or any(c is None for c in node.children):
            report.add("structure", node.uid, "internal node without two children")
            continue
        for c in node.children:
            if c.parent is not node:
                report.add("structure", c.uid, f"child of {node.uid} has parent {getattr(c.parent, 'uid', None)}")
        first, second = (node.children[1], node.children[0]) if parity else (node.children[0], node.children[1])
        stack.append((second, view, parity))
        stack.append((first, view, parity))
    if report.violations and any(v.invariant == "structure" for v in report.violations):
        return

    counters_ok = {}
    for view in reversed(order):  # children before parents
        node = view.node
        parity = view.anc_parity ^ node.flip
        if node.children is None:
            a, b = forest.ends[node.edge]
            if parity:
                a, b = b, a
            view.edges = 1
            view.inside = {a: 1, b: 1}
        else:
            first, second = (node.children[1], node.children[0]) if parity else (node.children[0], node.children[1])
            left, right = made[first.uid], made[second.uid]
            view.left, view.right = left, right
            view.edges = left.edges + right.edges
            shared = set(left.inside) & set(right.inside)
            if len(shared) != 1:
                report.add("central_vertex", node.uid, f"children share {len(shared)} vertices")
                counters_ok[node.uid] = False
                continue
            view.central = next(iter(shared))
            inside = dict(left.inside)
            for w, k in right.inside.items():
                inside[w] = inside.get(w, 0) + k
            view.inside = inside
        view.boundary = {w for w, k in view.inside.items() if forest.exposed[w] or degree[w] > k}

        if node.size != view.edges:
            report.add("leaf_count", node.uid, f"size {node.size} but {view.edges} leaves")
        ok = True
        if len(view.boundary) > 2:
            report.add("cluster_validity", node.uid, f"boundary {sorted(view.boundary)}")
            ok = False
        elif node.nb != len(view.boundary):
            report.add("boundary_count", node.uid, f"counter {node.nb} but boundary {sorted(view.boundary)}")
            ok = False
        counters_ok[node.uid] = ok

        # positions in the absolute frame
        if node.children is None:
            a, b = forest.ends[node.edge]
            if parity:
                a, b = b, a
            view.pos = (a if a in view.boundary else None, None, b if b in view.boundary else None)
        else:
            c = view.central
            lpos = [w for w in view.boundary if w != c and w in view.left.inside]
            rpos = [w for w in view.boundary if w != c and w in view.right.inside]
            view.pos = (lpos[0] if lpos else None, c if c in view.boundary else None, rpos[0] if rpos else None)
            if view.left.rightmost != c or view.right.leftmost != c:
                report.add(
                    "orientation",
                    node.uid,
                    f"central {c}, left child rightmost {view.left.rightmost}, right child leftmost {view.right.leftmost}",
                )

    for view in order:
        node = view.node
        if node.uid not in counters_ok or not counters_ok[node.uid]:
            continue
        if node.children is not None and not all(counters_ok.get(c.uid, False) for c in node.children):
            continue
        left, middle, right = (has_left_boundary(forest, node), has_middle_boundary(node), has_right_boundary(forest, node))
        if view.anc_parity:
            left, right = right, left
        expected = tuple(p is not None for p in view.pos)
        if (left, middle, right) != expected or left + middle + right != node.nb:
            report.add("boundary_position", node.uid, f"predicates {(left, middle, right)} but positions {view.pos}")

    if spec is not None:
        fresh = {}
        for view in reversed(order):
            node = view.node
            if node.uid not in counters_ok or not counters_ok[node.uid]:
                continue
            kids = None
            if node.children is not None:
                if any(c.uid not in fresh for c in node.children):
                    continue
                kids = (fresh[node.children[0].uid], fresh[node.children[1].uid])
            try:
                value = compute_summary(spec, forest, node, kids)
            except Exception as exc:  # a broken orientation can make merge fail
                value = exc
            fresh[node.uid] = value
            if node.summary is MISSING:
                report.add("summary", node.uid, "summary missing after an external operation")
            elif node.summary != value:
                report.add("summary", node.uid, f"stored {node.summary!r} != recomputed {value!r}")
    views.extend(order)


def serialize(tree) -> tuple:
    """Exact snapshot of every live node reachable from an edge, plus the forest flags."""
    out = []
    for root in sorted(tree.roots(), key=lambda n: n.uid):
        stack = [root]
        while stack:
            n = stack.pop()
            kids = None if n.children is None else tuple(c.uid for c in n.children)
            out.append((n.uid, None if n.parent is None else n.parent.uid, kids, n.edge, n.nb, n.flip, n.size, repr(n.summary)))
            if n.children is not None:
                stack.extend(n.children)
    return tuple(out), tuple(tree.forest.exposed)
