"""Per-cluster user data, computed bottom-up.

A summary describes its cluster in the orientation the parent sees, so the
node's own flip bit is already applied.  Toggling a flip bit therefore means
reversing the stored summary, and ``push_flip`` never invalidates anything.

Structural changes invalidate the root path of every touched node (the
invalid set stays closed under taking parents), and the tree rebuilds all
invalid nodes eagerly at the end of each external operation.
"""

from __future__ import annotations

from .errors import PreconditionError
from .topnodes import MISSING, Node, has_middle_boundary


class SummarySpec:
    """Extension point.

    ``merge`` gets the two child summaries in the parent's stored order, plus the
    cluster kinds of parent and children and whether the central vertex is a
    boundary vertex of the parent.
    """

    symmetric = False  # reverse() is the identity

    def from_edge(self, edge, weight, left, right, left_is_boundary, right_is_boundary):
        raise NotImplementedError

    def merge(self, left, right, parent_is_path, left_is_path, right_is_path, middle):
        raise NotImplementedError

    def reverse(self, summary):
        return summary


class PathMax(SummarySpec):
    """Heaviest edge on the path between the two boundary vertices.

    Stored as ``(weight, edge)`` for path clusters and ``None`` for point clusters.
    """

    symmetric = True

    def from_edge(self, edge, weight, left, right, left_is_boundary, right_is_boundary):
        if left_is_boundary and right_is_boundary:
            return (weight, edge)
        return None

    def merge(self, left, right, parent_is_path, left_is_path, right_is_path, middle):
        if not parent_is_path:
            return None
        if left_is_path and right_is_path:
            return left if left > right else right
        return left if left_is_path else right


class EdgeCount(SummarySpec):
    symmetric = True

    def from_edge(self, edge, weight, left, right, left_is_boundary, right_is_boundary):
        return 1

    def merge(self, left, right, parent_is_path, left_is_path, right_is_path, middle):
        return left + right


class BoundaryLabels(SummarySpec):
    """Boundary vertices in left-to-right order; a debugging aid that is not mirror-symmetric."""

    def from_edge(self, edge, weight, left, right, left_is_boundary, right_is_boundary):
        out = ()
        if left_is_boundary:
            out += (left,)
        if right_is_boundary:
            out += (right,)
        return out

    def merge(self, left, right, parent_is_path, left_is_path, right_is_path, middle):
        # the orientation invariant puts the central vertex last on the left, first on the right
        central = left[-1]
        return left[:-1] + ((central,) if middle else ()) + right[1:]

    def reverse(self, summary):
        return summary[::-1]


def compute_summary(spec: SummarySpec, forest, node: Node, child_summaries=None):
    """Summary of ``node`` from its children's summaries (or from its edge).

    ``child_summaries`` overrides the stored ones; the validator uses it to
    recompute from scratch without touching the live tree.
    """
    if node.children is None:
        e = node.edge
        a, b = forest.ends[e]
        s = spec.from_edge(
            e,
            forest.weight[e],
            a,
            b,
            forest.exposed[a] or forest.degree_at_least_two(a),
            forest.exposed[b] or forest.degree_at_least_two(b),
        )
    else:
        c0, c1 = node.children
        s0, s1 = (c0.summary, c1.summary) if child_summaries is None else child_summaries
        s = spec.merge(s0, s1, node.nb == 2, c0.nb == 2, c1.nb == 2, has_middle_boundary(node))
    if node.flip and not spec.symmetric:
        s = spec.reverse(s)
    return s


def invalidate_root_path(tree, node: Node) -> None:
    if tree.spec is None or node.summary is MISSING:
        return
    # every marked node is recorded: the chain start may die before the rebuild
    dirty = tree.dirty
    while node is not None and node.summary is not MISSING:
        node.summary = MISSING
        dirty.append(node)
        node = node.parent


def rebuild_root_path(tree, node: Node) -> int:
    """Recompute every invalid summary in the top tree containing ``node``; returns the count."""
    spec = tree.spec
    if spec is None or node.summary is not MISSING or not node.alive:
        return 0
    while node.parent is not None:
        node = node.parent
    forest = tree.forest
    count = 0
    stack = [(node, False)]
    while stack:
        n, ready = stack.pop()
        if ready:
            n.summary = compute_summary(spec, forest, n)
            count += 1
            continue
        stack.append((n, True))
        if n.children is not None:
            for c in n.children:
                if c.summary is MISSING:
                    stack.append((c, False))
    return count


def rebuild_dirty(tree) -> int:
    if tree.spec is None:
        return 0
    count = 0
    for node in tree.dirty:
        count += rebuild_root_path(tree, node)
    tree.dirty.clear()
    return count


def query_path_max(root: Node):
    """``(weight, edge)`` of the heaviest edge between the two exposed vertices."""
    if root is None or root.nb != 2:
        raise PreconditionError("path-max query needs a path-cluster root (two exposed vertices)")
    if root.summary is MISSING or root.summary is None:
        raise PreconditionError("root summary is not available")
    return root.summary
