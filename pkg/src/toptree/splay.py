"""Semi-splay steps, semi-splay and full splay, with an optional potential ledger.

The ledger tracks ``phi = sum(log2(size(x)))`` over every node of every top tree,
where ``size`` is the number of leaves below ``x``.  When a tree carries a
ledger, every splay call is checked against its depth and potential bounds and
failures are recorded instead of raised, so a whole workload can be audited.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import InvalidRotationError
from .topnodes import Node, push_flip
from .rotate import check_path_rotate_precondition, check_point_rotate_precondition, rotate_up

SLACK = 1e-6

_LOG2 = [0.0, 0.0]


def lg(k: int) -> float:
    """log2 of a positive leaf count, memoised."""
    try:
        return _LOG2[k]
    except IndexError:
        _LOG2.extend(math.log2(i) for i in range(len(_LOG2), 2 * k + 2))
        return _LOG2[k]


@dataclass
class LemmaViolation:
    site: str
    detail: str

    def __str__(self) -> str:
        return f"{self.site}: {self.detail}"


@dataclass
class PotentialLedger:
    phi: float = 0.0
    checks: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)
    max_full_splay_depth: int = 0

    def add(self, size: int) -> None:
        self.phi += lg(size)

    def remove(self, size: int) -> None:
        self.phi -= lg(size)

    def resize(self, old: int, new: int) -> None:
        self.phi += lg(new) - lg(old)

    def check(self, site: str, ok: bool, detail: str = "") -> bool:
        self.checks[site] += 1
        if not ok:
            self.violations.append(LemmaViolation(site, detail))
        return ok


def rank(node: Node) -> float:
    return lg(node.size)


def depth_and_root(node: Node) -> tuple[int, Node]:
    d = 0
    while node.parent is not None:
        node = node.parent
        d += 1
    return d, node


def recompute_potential(roots) -> float:
    return math.fsum(lg(n.size) for root in roots for n in _walk(root))


def _walk(root: Node):
    stack = [root]
    while stack:
        n = stack.pop()
        yield n
        if n.children is not None:
            stack.extend(n.children)


def _sanctioned(tree, node: Node) -> None:
    if not (check_point_rotate_precondition(node) or check_path_rotate_precondition(tree.spec, node)):
        raise InvalidRotationError(f"semi-splay step chose a rotation no lemma allows (node {node.uid})")


def semi_splay_step(tree, node: Node) -> Node | None:
    """One or two rotations that reduce the depth of ``node`` by one.

    Returns the root of the changed subtree, or ``None`` (tree untouched) when
    no pattern matches on the root path.
    """
    spec = tree.spec
    stats = tree.stats
    debug = tree.debug
    while True:
        stats.steps += 1
        parent = node.parent
        if parent is None:
            return None
        gparent = parent.parent
        if gparent is None:
            return None

        if node.nb != 2 and gparent.nb != 2:
            if debug:
                _sanctioned(tree, node)
            rotate_up(tree, node)
            return gparent

        ggparent = gparent.parent
        if ggparent is None:
            return None
        if parent.nb == 2 and (gparent.nb == 2 or ggparent.nb != 2):
            push_flip(spec, gparent)
            push_flip(spec, parent)

            node_is_left = parent.children[0] is node
            parent_is_left = gparent.children[0] is parent
            gparent_is_left = ggparent.children[0] is gparent
            if node_is_left == parent_is_left:
                if debug:
                    _sanctioned(tree, node)
                rotate_up(tree, node)
                return gparent
            if parent_is_left == gparent_is_left:
                if debug:
                    _sanctioned(tree, parent)
                rotate_up(tree, parent)
                return ggparent
            # node_is_left == gparent_is_left here
            sib = parent.children[1] if node_is_left else parent.children[0]
            if debug:
                _sanctioned(tree, sib)
            rotate_up(tree, sib)  # swaps sibling(node) and sibling(parent)
            if debug:
                _sanctioned(tree, parent)
            rotate_up(tree, parent)  # parent is still node.parent here
            return ggparent
        node = parent


def semi_splay(tree, node: Node) -> None:
    ledger = tree.ledger
    if ledger is not None:
        d0, root = depth_and_root(node)
        bound = 5 * (8 / 25 + lg(root.size) - lg(node.size)) - 0.4 * d0
        phi0 = ledger.phi
    top = node
    while top is not None:
        top = semi_splay_step(tree, top)
    if ledger is not None:
        d1 = depth_and_root(node)[0]
        ledger.check("semi_splay.depth", d1 <= math.ceil(4 * d0 / 5), f"depth {d0} -> {d1}")
        dphi = ledger.phi - phi0
        ledger.check("semi_splay.potential", dphi <= bound + SLACK, f"dphi={dphi:.6g} bound={bound:.6g} depth={d0}")


def full_splay_depth_bound(node_is_point: bool, root_is_point: bool) -> int:
    if node_is_point and root_is_point:
        return 1
    if root_is_point:
        return 2
    if node_is_point:
        return 3
    return 4


def full_splay(tree, node: Node) -> None:
    ledger = tree.ledger
    if ledger is not None:
        d0, root = depth_and_root(node)
        bound = 9 * (1 + lg(root.size) - lg(node.size)) - d0
        phi0 = ledger.phi
    while True:
        top = semi_splay_step(tree, node)
        if top is None:
            break
        semi_splay_step(tree, top)
    if ledger is not None:
        d1, root = depth_and_root(node)
        limit = full_splay_depth_bound(node.nb != 2, root.nb != 2)
        ledger.max_full_splay_depth = max(ledger.max_full_splay_depth, d1)
        ledger.check("full_splay.depth", d1 <= limit, f"depth {d0} -> {d1}, limit {limit}")
        dphi = ledger.phi - phi0
        ledger.check("full_splay.potential", dphi <= bound + SLACK, f"dphi={dphi:.6g} bound={bound:.6g} depth={d0}")
