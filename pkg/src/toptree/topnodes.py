"""Top-tree nodes and the constant-time local queries on them.

Children are addressed as ``children[b]`` with a boolean ``b``; ``children[0]``
is the left child when the node's flip bit is clear.  A set flip bit means the
subtree is mirrored relative to its parent.  Leaves keep their flip bit for
good: the endpoint order of an edge is fixed in the forest, so leaf predicates
index the endpoints through the bit instead of swapping anything.
"""

from __future__ import annotations

from typing import Iterator

from .errors import StaleHandleError, TopTreeError
from .forest import Forest

MISSING = object()  # summary slot marker: no valid summary stored


class Node:
    __slots__ = ("uid", "parent", "children", "edge", "nb", "flip", "size", "summary", "alive")

    def __init__(self, uid: int, edge: int = -1, children: list[Node] | None = None) -> None:
        self.uid = uid
        self.parent: Node | None = None
        self.children = children
        self.edge = edge
        self.nb = 0
        self.flip = False
        self.size = 1
        self.summary = MISSING
        self.alive = True

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    def __repr__(self) -> str:
        if self.children is None:
            return f"<leaf {self.uid} e={self.edge} nb={self.nb}{' F' if self.flip else ''}>"
        return f"<node {self.uid} nb={self.nb} s={self.size}{' F' if self.flip else ''}>"


def check_live(node: Node) -> None:
    if not node.alive:
        raise StaleHandleError(f"node {node.uid} has been destroyed")


def is_path(node: Node) -> bool:
    return node.nb == 2


def is_point(node: Node) -> bool:
    return node.nb != 2


def sibling(node: Node) -> Node:
    parent = node.parent
    if parent is None:
        raise TopTreeError(f"node {node.uid} is a root and has no sibling")
    c = parent.children
    return c[1] if c[0] is node else c[0]


def child_index(node: Node) -> int:
    """Index of ``node`` in its parent's stored children (parent flip ignored)."""
    return 0 if node.parent.children[0] is node else 1


def toggle_flip(spec, node: Node) -> None:
    node.flip = not node.flip
    if spec is not None and not spec.symmetric and node.summary is not MISSING:
        node.summary = spec.reverse(node.summary)


def push_flip(spec, node: Node) -> None:
    """Clear the flip bit of an internal node by swapping and flipping its children."""
    if node.flip and node.children is not None:
        c = node.children
        c[0], c[1] = c[1], c[0]
        toggle_flip(spec, c[0])
        toggle_flip(spec, c[1])
        node.flip = False


def _endpoint_is_boundary(forest: Forest, w: int) -> bool:
    return forest.exposed[w] or forest.degree_at_least_two(w)


def has_left_boundary(forest: Forest, node: Node) -> bool:
    if node.children is None:
        return _endpoint_is_boundary(forest, forest.ends[node.edge][node.flip])
    return node.children[node.flip].nb == 2


def has_right_boundary(forest: Forest, node: Node) -> bool:
    if node.children is None:
        return _endpoint_is_boundary(forest, forest.ends[node.edge][not node.flip])
    return node.children[not node.flip].nb == 2


def has_middle_boundary(node: Node) -> bool:
    if node.children is None or node.nb == 0:
        return False
    c = node.children
    return node.nb - (c[0].nb == 2) - (c[1].nb == 2) != 0


def root_of(node: Node) -> Node:
    while node.parent is not None:
        node = node.parent
    return node


def depth(node: Node) -> int:
    d = 0
    while node.parent is not None:
        node = node.parent
        d += 1
    return d


def ancestors(node: Node) -> Iterator[Node]:
    """``node`` followed by every proper ancestor, bottom-up."""
    while node is not None:
        yield node
        node = node.parent


def subtree(node: Node) -> Iterator[Node]:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if n.children is not None:
            stack.append(n.children[1])
            stack.append(n.children[0])


def leaves(node: Node) -> Iterator[Node]:
    for n in subtree(node):
        if n.children is None:
            yield n


def materialize_flips(spec, root: Node) -> None:
    """Push every internal flip bit down to the leaves.

    Leaf bits are kept, since they index the endpoint order.
    """
    stack = [root]
    while stack:
        n = stack.pop()
        if n.children is not None:
            push_flip(spec, n)
            stack.extend(n.children)


def oriented_leaves(root: Node) -> list[tuple[int, bool]]:
    """Left-to-right ``(edge, reversed)`` list of a subtree, read through the flip bits.

    ``root``'s own flip bit is applied, so this is the order seen from its parent.
    """
    out = []
    stack = [(root, False)]
    while stack:
        n, parity = stack.pop()
        parity ^= n.flip
        if n.children is None:
            out.append((n.edge, parity))
        else:
            first, second = (n.children[1], n.children[0]) if parity else (n.children[0], n.children[1])
            stack.append((second, parity))
            stack.append((first, parity))
    return out
