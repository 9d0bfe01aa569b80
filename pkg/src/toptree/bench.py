"""Structural-work benchmark with lemma auditing, plus a matched-workload strategy comparison.

Work is counted, not timed: rotations plus nodes visited (walks and splay
steps) plus summary rebuilds.  Wall time is reported alongside.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field

from .dynops import ExposeStrategy, TopTree
from .fuzz import generate
from .rng import XorShift64Star


@dataclass
class BenchRow:
    n: int
    ops: int
    work: int
    rotations: int
    steps: int
    rebuilds: int
    wall: float
    max_full_splay_depth: int = 0
    lemma_checks: Counter = field(default_factory=Counter)
    lemma_violations: list = field(default_factory=list)

    @property
    def work_per_op(self) -> float:
        return self.work / self.ops

    @property
    def normalized(self) -> float:
        return self.work_per_op / math.log2(self.n)


@dataclass
class BenchResult:
    strategy: str
    rows: list = field(default_factory=list)

    @property
    def spread(self) -> float:
        """max / min of work per op over log2 n across sizes."""
        vals = [r.normalized for r in self.rows]
        return max(vals) / min(vals)

    @property
    def violations(self) -> list:
        return [v for r in self.rows for v in r.lemma_violations]

    def table(self) -> str:
        head = f"{'n':>6} {'ops':>8} {'work/op':>10} {'work/op/lg n':>13} {'rot/op':>8} {'max depth':>9} {'wall s':>8}"
        lines = [f"strategy {self.strategy}", head]
        for r in self.rows:
            lines.append(
                f"{r.n:>6} {r.ops:>8} {r.work_per_op:>10.6g} {r.normalized:>13.6g} "
                f"{r.rotations / r.ops:>8.4g} {r.max_full_splay_depth:>9} {r.wall:>8.3g}"
            )
        lines.append(f"spread of work/op/lg n across sizes: {self.spread:.6g}")
        return "\n".join(lines)


def workload_step(tree: TopTree, rng: XorShift64Star, live: list, where: dict) -> None:
    """One random step: a cut (20%), a connectivity query (20%) or an edge insertion
    that keeps a minimum spanning forest (60%)."""
    n = tree.num_vertices
    r = rng.below(10)
    if r < 2 and live:
        e = live[rng.below(len(live))]
        _forget(live, where, e)
        tree.cut(e)
        return
    u = rng.below(n)
    v = rng.below(n - 1)
    if v >= u:
        v += 1
    if r < 4:
        tree.connected(u, v)
        return
    w = rng.random()
    pm = tree.path_max(u, v)
    if pm is not None:
        if w >= pm[0]:
            return
        _forget(live, where, pm[1])
        tree.cut(pm[1])
    tree.link(u, v, w)
    e = tree.edge_between(u, v)
    where[e] = len(live)
    live.append(e)


def _forget(live: list, where: dict, e: int) -> None:
    i = where.pop(e)
    last = live.pop()
    if last != e:
        live[i] = last
        where[last] = i


def bench_size(n: int, ops: int, strategy, seed: int = 0, ledger: bool = True, samples=None) -> BenchRow:
    tree = TopTree(strategy=strategy, ledger=ledger)
    for _ in range(n):
        tree.add_vertex()
    rng = XorShift64Star.from_seed(seed * 1_000_003 + n)
    live: list[int] = []
    where: dict[int, int] = {}
    stats = tree.stats
    start = time.perf_counter()
    for i in range(ops):
        before = stats.work
        workload_step(tree, rng, live, where)
        if samples is not None:
            samples.write(f"{n},{i},{stats.work - before}\n")
    wall = time.perf_counter() - start
    row = BenchRow(n, ops, stats.work, stats.rotations, stats.steps, stats.rebuilds, wall)
    if tree.ledger is not None:
        row.max_full_splay_depth = tree.ledger.max_full_splay_depth
        row.lemma_checks = tree.ledger.checks
        row.lemma_violations = list(tree.ledger.violations)
    return row


def bench(sizes, ops: int, strategy=ExposeStrategy.FULL_SPLAY, seed: int = 0, ledger: bool = True, samples=None) -> BenchResult:
    strategy = ExposeStrategy(strategy)
    if any(n < 2 for n in sizes):
        raise ValueError("bench sizes must be at least 2")
    result = BenchResult(strategy.value)
    for n in sizes:
        result.rows.append(bench_size(n, ops, strategy, seed, ledger, samples))
    return result


@dataclass
class StrategyComparison:
    exposes: int = 0
    semi_not_worse: int = 0
    full_rotations: int = 0
    semi_rotations: int = 0

    @property
    def fraction(self) -> float:
        return self.semi_not_worse / self.exposes if self.exposes else 1.0


def compare_strategies(seed: int, n_vertices: int, n_ops: int) -> StrategyComparison:
    """Replay one fuzz workload on both expose strategies and compare rotations per expose call."""
    trees = [TopTree(strategy=s) for s in (ExposeStrategy.FULL_SPLAY, ExposeStrategy.SEMI_SPLAY_ONLY)]
    out = StrategyComparison()
    for cmd in generate(seed, n_vertices, n_ops):
        if cmd.op == "expose":
            counts = []
            for t in trees:
                before = t.stats.rotations
                t.expose(*cmd.args)
                counts.append(t.stats.rotations - before)
            out.exposes += 1
            out.full_rotations += counts[0]
            out.semi_rotations += counts[1]
            out.semi_not_worse += counts[1] <= counts[0]
            continue
        for t in trees:
            _replay(t, cmd)
    return out


def _replay(t: TopTree, cmd) -> None:
    op, args = cmd.op, cmd.args
    if op == "addv":
        t.add_vertex()
    elif op == "link":
        t.link(*args)
    elif op == "cut":
        t.cut(t.edge_between(*args))
    elif op == "deexpose":
        t.deexpose(*args)
    elif op == "connected":
        t.connected(*args)
    elif op == "pathmax":
        t.path_max(*args)
