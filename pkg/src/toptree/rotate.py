"""The restricted rotation of top trees.

``rotate_up(node)`` exchanges ``node`` with its parent's sibling.  It is only
legal when ``sibling(node) | sibling(parent(node))`` is a valid cluster; callers
guarantee that through the two lemma predicates below, and debug trees
re-check it by brute force over the underlying forest.
"""

from __future__ import annotations

from .errors import InvalidRotationError, TopTreeError
from .topnodes import Node, has_middle_boundary, push_flip, toggle_flip
from .summaries import invalidate_root_path


def rotate_up(tree, node: Node) -> None:
    parent = node.parent
    if parent is None or parent.parent is None:
        raise TopTreeError(f"rotate_up needs a grandparent (node {node.uid})")
    grandparent = parent.parent
    sibling = parent.children[1] if parent.children[0] is node else parent.children[0]
    uncle = grandparent.children[1] if grandparent.children[0] is parent else grandparent.children[0]

    if tree.debug:
        check_rotation_validity(tree, sibling, uncle)
    spec = tree.spec
    if spec is not None:
        invalidate_root_path(tree, parent)

    push_flip(spec, grandparent)
    push_flip(spec, parent)

    uncle_is_left_child = grandparent.children[0] is uncle
    sibling_is_left_child = parent.children[0] is sibling
    to_same_side = uncle_is_left_child == sibling_is_left_child
    sibling_is_path = sibling.nb == 2
    uncle_is_path = uncle.nb == 2
    gp_is_path = grandparent.nb == 2

    if to_same_side and sibling_is_path:
        # rotation on a path
        gp_middle = has_middle_boundary(grandparent)
        new_parent_is_path = gp_middle or uncle_is_path
        flip_new_parent = False
        flip_grandparent = False
        if gp_middle and not gp_is_path:
            ggp = grandparent.parent
            if ggp is not None:
                gp_is_left_child = ggp.children[0] is grandparent
                flip_grandparent = gp_is_left_child == uncle_is_left_child
    elif not to_same_side:
        # rotation on a star, sibling and uncle on opposite sides
        new_parent_is_path = sibling_is_path or uncle_is_path
        flip_new_parent = sibling_is_path
        flip_grandparent = sibling_is_path
        toggle_flip(spec, node)
    else:
        # rotation on a star, sibling and uncle on the same side
        new_parent_is_path = uncle_is_path
        flip_new_parent = False
        flip_grandparent = False
        toggle_flip(spec, sibling)

    parent.children[uncle_is_left_child] = sibling
    parent.children[not uncle_is_left_child] = uncle
    parent.flip = flip_new_parent
    parent.nb = 2 if new_parent_is_path else 1

    grandparent.children[uncle_is_left_child] = node
    grandparent.children[not uncle_is_left_child] = parent
    grandparent.flip = flip_grandparent

    node.parent = grandparent
    uncle.parent = parent

    old_size = parent.size
    parent.size = sibling.size + uncle.size
    ledger = tree.ledger
    if ledger is not None:
        ledger.resize(old_size, parent.size)
    tree.stats.rotations += 1


def check_point_rotate_precondition(node: Node) -> bool:
    """``node`` and its grandparent are both point clusters."""
    return node.nb != 2 and node.parent.parent.nb != 2


def check_path_rotate_precondition(spec, node: Node) -> bool:
    """The parent is a path cluster and ``node`` hangs off to the same side as it.

    Pushes the flip bits of the parent and grandparent, which does not change
    the represented tree.
    """
    parent = node.parent
    grandparent = parent.parent
    if parent.nb != 2:
        return False
    push_flip(spec, grandparent)
    push_flip(spec, parent)
    return (parent.children[0] is node) == (grandparent.children[0] is parent)


def check_rotation_validity(tree, a: Node, b: Node) -> None:
    """Brute-force check that the union of clusters ``a`` and ``b`` is a valid cluster."""
    from .oracle import naive_boundary_vertices

    edges = []
    stack = [a, b]
    while stack:
        n = stack.pop()
        if n.children is None:
            edges.append(n.edge)
        else:
            stack.extend(n.children)
    tree.stats.validity_checks += 1
    try:
        boundary = naive_boundary_vertices(tree.forest, edges)
    except ValueError as exc:
        raise InvalidRotationError(f"rotation would build a disconnected cluster: {exc}") from None
    if len(boundary) > 2:
        raise InvalidRotationError(
            f"rotation would build a cluster with boundary {sorted(boundary)} "
            f"(clusters {a.uid} and {b.uid})"
        )
