"""Splay-based top trees over a dynamic forest.

External operations are :meth:`TopTree.expose`, :meth:`TopTree.deexpose`,
:meth:`TopTree.link` and :meth:`TopTree.cut`.  Each checks its preconditions
before touching anything, then rebuilds the summaries it invalidated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import PreconditionError, StaleHandleError, TopTreeError
from .forest import Forest
from .topnodes import (
    MISSING,
    Node,
    child_index,
    has_left_boundary,
    has_middle_boundary,
    has_right_boundary,
    push_flip,
    sibling,
    toggle_flip,
)
from .rotate import rotate_up
from .splay import SLACK, PotentialLedger, depth_and_root, full_splay, lg, semi_splay
from .summaries import PathMax, SummarySpec, invalidate_root_path, query_path_max, rebuild_dirty


class ExposeStrategy(enum.Enum):
    FULL_SPLAY = "full"
    SEMI_SPLAY_ONLY = "semi"


@dataclass
class Stats:
    rotations: int = 0
    steps: int = 0  # nodes visited by walks, loops and splay steps
    rebuilds: int = 0
    validity_checks: int = 0

    @property
    def work(self) -> int:
        return self.rotations + self.steps + self.rebuilds


_DEFAULT = object()


class TopTree:
    def __init__(
        self,
        strategy: ExposeStrategy = ExposeStrategy.FULL_SPLAY,
        summary: SummarySpec | None = _DEFAULT,
        ledger: bool = False,
        debug: bool = False,
    ) -> None:
        self.forest = Forest()
        self.strategy = ExposeStrategy(strategy)
        self.spec = PathMax() if summary is _DEFAULT else summary
        self.ledger = PotentialLedger() if ledger else None
        self.debug = debug
        self.stats = Stats()
        self.leaves: list[Node | None] = []  # indexed by edge id
        self.dirty: list[Node] = []
        self.trace: list[str] | None = None  # set to a list to log prepare_expose cases
        self._next_uid = 0

    # -- plumbing ---------------------------------------------------------

    def _new_node(self, edge: int = -1, children: list[Node] | None = None) -> Node:
        node = Node(self._next_uid, edge, children)
        self._next_uid += 1
        if self.spec is not None:
            self.dirty.append(node)
        return node

    def _destroy(self, node: Node) -> None:
        node.alive = False
        node.parent = None
        node.children = None
        if self.ledger is not None:
            self.ledger.remove(node.size)

    def _finish(self) -> None:
        if self.dirty:
            self.stats.rebuilds += rebuild_dirty(self)

    def _vertex(self, v: int) -> None:
        if not (0 <= v < self.forest.num_vertices):
            raise StaleHandleError(f"unknown vertex {v}")

    def _walk_to_root(self, node: Node) -> Node:
        steps = 0
        while node.parent is not None:
            node = node.parent
            steps += 1
        self.stats.steps += steps
        return node

    def _tree_root(self, v: int) -> Node | None:
        """Root of the top tree of ``v`` by a plain walk (no restructuring)."""
        e = self.forest.any_incident_edge(v)
        if e is None:
            return None
        return self._walk_to_root(self.leaves[e])

    def _exposed_count(self, v: int, root: Node | None) -> int:
        # the root cluster's boundary vertices are exactly the exposed vertices of its tree
        if root is None:
            return int(self.forest.exposed[v])
        return root.nb

    def add_vertex(self) -> int:
        return self.forest.add_vertex()

    @property
    def num_vertices(self) -> int:
        return self.forest.num_vertices

    def leaf(self, e: int) -> Node:
        if not self.forest.is_edge(e):
            raise StaleHandleError(f"unknown or deleted edge {e}")
        return self.leaves[e]

    def roots(self) -> list[Node]:
        seen = {}
        for e in self.forest.edges():
            node = self.leaves[e]
            while node.parent is not None:
                node = node.parent
            seen[node.uid] = node
        return list(seen.values())

    # -- consuming node -----------------------------------------------------

    def find_consuming_node(self, v: int) -> Node | None:
        """Lowest common ancestor of the leaves of all edges incident to ``v``.

        Semi-splays an incident edge first, which pays for the walk.
        """
        self._vertex(v)
        f = self.forest
        e = f.any_incident_edge(v)
        if e is None:
            return None
        node = self.leaves[e]
        semi_splay(self, node)
        if not f.degree_at_least_two(v):
            return node

        a, b = f.ends[e]
        is_left = (v == a) != node.flip
        is_middle = False
        is_right = (v == b) != node.flip
        last_middle_node = None
        steps = 0
        while node.parent is not None:
            steps += 1
            parent = node.parent
            is_left_child = parent.children[0] is node
            if is_left_child:
                is_middle = is_right or (is_middle and not has_right_boundary(f, node))
            else:
                is_middle = is_left or (is_middle and not has_left_boundary(f, node))
            is_left = (is_left_child != parent.flip) and not is_middle
            is_right = (is_left_child == parent.flip) and not is_middle
            node = parent
            if is_middle:
                if not has_middle_boundary(node):
                    # only reachable when v is not exposed
                    self.stats.steps += steps
                    return node
                last_middle_node = node
        # only reachable when v is exposed
        self.stats.steps += steps
        return last_middle_node

    # -- expose / deexpose --------------------------------------------------

    def expose(self, v: int) -> Node | None:
        self._vertex(v)
        f = self.forest
        if f.exposed[v]:
            raise PreconditionError(f"vertex {v} is already exposed")
        root = self._tree_root(v)
        if root is not None and root.nb >= 2:
            raise PreconditionError(f"the tree of vertex {v} already has two exposed vertices")
        result = self._expose(v)
        self._finish()
        return result

    def _expose(self, v: int) -> Node | None:
        if self.strategy is ExposeStrategy.FULL_SPLAY:
            return self._expose_full(v)
        return self._expose_semi(v)

    def _expose_full(self, v: int) -> Node | None:
        node = self.find_consuming_node(v)
        if node is None:
            self.forest.exposed[v] = True
            return None

        ledger = self.ledger
        if ledger is not None:
            phi0 = ledger.phi
        spec = self.spec
        # rotate up until the consuming node is a point cluster
        while node.nb == 2:
            parent = node.parent
            push_flip(spec, node)
            node_idx = child_index(node)
            rotate_up(self, node.children[node_idx])
            node = parent
        if ledger is not None:
            n = max(self.forest.num_vertices, 2)
            ledger.check("expose.path_loop_potential", ledger.phi - phi0 <= math.log2(n) + SLACK,
                         f"dphi={ledger.phi - phi0:.6g}")
        if self.debug:
            self._assert_consuming(v, node, "expose rotation loop")

        full_splay(self, node)

        if ledger is not None:
            d = depth_and_root(node)[0]
            ledger.check("expose.consuming_depth", d <= 1, f"consuming node depth {d}")
            ledger.check("expose.consuming_not_middle", not has_middle_boundary(node),
                         f"consuming node {node.uid} has a middle boundary vertex")
        invalidate_root_path(self, node)
        root = None
        while node is not None:
            root = node
            root.nb += 1
            node = root.parent
        self.forest.exposed[v] = True
        return root

    def _expose_semi(self, v: int) -> Node | None:
        consuming = self.find_consuming_node(v)
        if consuming is None:
            self.forest.exposed[v] = True
            return None
        consuming = self.prepare_expose(consuming)
        if self.debug:
            self._assert_consuming(v, consuming, "prepare_expose")
        root = self.expose_prepared(consuming)
        self.forest.exposed[v] = True
        return root

    def prepare_expose(self, consuming_node: Node) -> Node:
        """Rotate until no ancestor of the consuming node is a path cluster; returns the new consuming node."""
        ledger = self.ledger
        if ledger is not None:
            phi0 = ledger.phi
        spec = self.spec
        node = consuming_node
        steps = 0
        while node.parent is not None:
            steps += 1
            parent = node.parent
            if node.nb != 2:
                node = parent
                continue
            push_flip(spec, parent)
            push_flip(spec, node)

            sib = sibling(node)
            sibling_idx = 0 if parent.children[0] is sib else 1
            same_side_child = node.children[sibling_idx]
            if same_side_child.nb == 2 or sib.nb != 2:
                # cases (a), (b), (c), (d)
                other_side_child = node.children[1 - sibling_idx]
                rotate_up(self, other_side_child)
                if node is consuming_node:
                    # cases (a), (b)
                    consuming_node = parent
                    if self.trace is not None:
                        self.trace.append("ab")
                elif self.trace is not None:
                    self.trace.append("cd")
                node = parent
            else:
                uncle = sibling(parent)
                gparent = parent.parent
                uncle_idx = 0 if gparent.children[0] is uncle else 1
                if sibling_idx == uncle_idx:
                    # case (e)
                    rotate_up(self, node)
                    if self.trace is not None:
                        self.trace.append("e")
                else:
                    # case (f); case (d) follows on the next iteration
                    rotate_up(self, sib)
                    if self.trace is not None:
                        self.trace.append("f")
        self.stats.steps += steps
        if ledger is not None:
            n = max(self.forest.num_vertices, 2)
            ledger.check("prepare_expose.potential", ledger.phi - phi0 <= 2 * math.log2(n) + SLACK,
                         f"dphi={ledger.phi - phi0:.6g}")
        return consuming_node

    def expose_prepared(self, consuming_node: Node) -> Node:
        """Count the new exposed vertex on the consuming node and its ancestors; returns the root."""
        invalidate_root_path(self, consuming_node)
        spec = self.spec
        from_left = False
        from_right = False
        node = consuming_node
        steps = 0
        while True:
            steps += 1
            node.nb += 1
            parent = node.parent
            if parent is None:
                self.stats.steps += steps
                return node
            is_left_child_of_parent = parent.children[0] is node
            is_right_child_of_parent = not is_left_child_of_parent
            if (is_left_child_of_parent and from_right) or (is_right_child_of_parent and from_left):
                toggle_flip(spec, node)
            from_left = is_left_child_of_parent != parent.flip
            from_right = is_right_child_of_parent != parent.flip
            node = parent

    def deexpose(self, v: int) -> Node | None:
        self._vertex(v)
        if not self.forest.exposed[v]:
            raise PreconditionError(f"vertex {v} is not exposed")
        result = self._deexpose(v)
        self._finish()
        return result

    def _deexpose(self, v: int) -> Node | None:
        node = self.find_consuming_node(v)
        if node is not None:
            invalidate_root_path(self, node)
        root = None
        steps = 0
        while node is not None:
            steps += 1
            root = node
            root.nb -= 1
            node = root.parent
        self.stats.steps += steps
        self.forest.exposed[v] = False
        return root

    def _assert_consuming(self, v: int, node: Node, where: str) -> None:
        from .oracle import naive_consuming_node

        expected = naive_consuming_node(self, v)
        if expected is not node:
            raise TopTreeError(f"{where}: tracked node {node.uid} is not the consuming node of {v}")

    # -- link / cut ---------------------------------------------------------

    def link(self, u: int, v: int, weight: float = 0.0) -> Node:
        self._vertex(u)
        self._vertex(v)
        if u == v:
            raise PreconditionError(f"cannot link vertex {u} to itself")
        ru = self._tree_root(u)
        rv = self._tree_root(v)
        if ru is not None and ru is rv:
            raise PreconditionError(f"vertices {u} and {v} are already connected")
        if self._exposed_count(u, ru) or self._exposed_count(v, rv):
            raise PreconditionError(f"link({u}, {v}) needs trees without exposed vertices")

        f = self.forest
        spec = self.spec
        tu = self._expose(u)
        if tu is not None and has_left_boundary(f, tu):
            toggle_flip(spec, tu)
        f.exposed[u] = False
        tv = self._expose(v)
        if tv is not None and has_right_boundary(f, tv):
            toggle_flip(spec, tv)
        f.exposed[v] = False

        ledger = self.ledger
        if ledger is not None:
            phi0 = ledger.phi
        e = f.insert_edge(u, v, weight)
        t = self._new_node(edge=e)
        self.leaves.append(t)
        t.nb = (tu is not None) + (tv is not None)
        if ledger is not None:
            ledger.add(1)
        if tu is not None:
            t = self._join(tu, t)
            t.nb = int(tv is not None)
        if tv is not None:
            t = self._join(t, tv)
            t.nb = 0
        if ledger is not None:
            n = max(f.num_vertices, 2)
            ledger.check("link.potential", ledger.phi - phi0 <= 2 * math.log2(n) + SLACK,
                         f"dphi={ledger.phi - phi0:.6g}")
        self._finish()
        return t

    def _join(self, left: Node, right: Node) -> Node:
        node = self._new_node(children=[left, right])
        left.parent = node
        right.parent = node
        node.size = left.size + right.size
        if self.ledger is not None:
            self.ledger.add(node.size)
        return node

    def delete_all_ancestors(self, node: Node) -> None:
        """Destroy ``node`` and its ancestors; their other children become roots."""
        ledger = self.ledger
        if ledger is not None:
            phi0 = ledger.phi
        path = []
        while node is not None:
            path.append(node)
            node = node.parent
        for child, parent in zip(path, path[1:]):
            other = parent.children[1] if parent.children[0] is child else parent.children[0]
            other.parent = None
        for n in path:
            self._destroy(n)
        if ledger is not None:
            ledger.check("delete_all_ancestors.potential", ledger.phi - phi0 <= SLACK,
                         f"dphi={ledger.phi - phi0:.6g}")

    def cut(self, e: int) -> tuple[Node | None, Node | None]:
        f = self.forest
        if not f.is_edge(e):
            raise StaleHandleError(f"unknown or deleted edge {e}")
        leaf = self.leaves[e]
        if self._walk_to_root(leaf).nb != 0:
            raise PreconditionError(f"cut({e}) needs a tree without exposed vertices")
        u, v = f.ends[e]
        full_splay(self, leaf)
        d = depth_and_root(leaf)[0]
        if d > 2:
            raise TopTreeError(f"full splay left edge {e} at depth {d}")
        self.delete_all_ancestors(leaf)
        self.leaves[e] = None
        f.delete_edge(e)
        f.exposed[u] = True
        f.exposed[v] = True
        tu = self._deexpose(u)
        tv = self._deexpose(v)
        self._finish()
        return tu, tv

    # -- queries -------------------------------------------------------------

    def find_root(self, v: int) -> Node | None:
        """Root of the top tree containing ``v`` (``None`` if isolated); semi-splays first."""
        self._vertex(v)
        e = self.forest.any_incident_edge(v)
        if e is None:
            return None
        leaf = self.leaves[e]
        semi_splay(self, leaf)
        root = self._walk_to_root(leaf)
        self._finish()
        return root

    def connected(self, u: int, v: int) -> bool:
        if u == v:
            self._vertex(u)
            return True
        ru = self.find_root(u)
        return ru is not None and ru is self.find_root(v)

    def path_max(self, u: int, v: int):
        """``(weight, edge)`` of the heaviest edge on the u-v path, or ``None`` if disconnected.

        Temporarily exposes whichever of ``u`` and ``v`` is not exposed yet;
        no other vertex of their trees may be exposed.  ``u == v`` gives
        ``(-inf, None)``, the neutral element.
        """
        self._vertex(u)
        self._vertex(v)
        if u == v:
            return (-math.inf, None)
        f = self.forest
        ru = self._tree_root(u)
        rv = self._tree_root(v)
        if ru is None or ru is not rv:
            return None
        if ru.nb != f.exposed[u] + f.exposed[v]:
            raise PreconditionError(f"path query {u}-{v}: another vertex of the tree is exposed")
        if not isinstance(self.spec, PathMax):
            raise PreconditionError("path queries need the PathMax summary")
        added = [w for w in (u, v) if not f.exposed[w]]
        root = None
        for w in added:
            root = self._expose(w)
        self._finish()
        if root is None:
            root = self._tree_root(u)
        result = query_path_max(root)
        for w in reversed(added):
            self._deexpose(w)
        self._finish()
        return result

    def edge_between(self, u: int, v: int) -> int | None:
        self._vertex(u)
        self._vertex(v)
        return self.forest.find_edge(u, v)

    def potential(self) -> float:
        if self.ledger is None:
            raise TopTreeError("potential ledger is disabled")
        return self.ledger.phi
