"""Deterministic random workloads checked against the naive forest, with failure minimisation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .dynops import ExposeStrategy, TopTree
from .oracle import NaiveForest
from .rng import XorShift64Star
from .script import Command, Session, format_script

MAX_WEIGHT = 1_000_000


def _random_weight(rng: XorShift64Star) -> float:
    return float(1 + rng.below(MAX_WEIGHT))


def next_command(rng: XorShift64Star, nf: NaiveForest) -> Command:
    """A legal external operation or query for the current oracle state.

    Operations that the exposure limits would forbid are replaced by the
    deexpose that unblocks them, which keeps links and cuts flowing.
    """
    n = nf.num_vertices
    r = rng.below(100)
    if r < 30:
        for _ in range(4):
            u, v = rng.below(n), rng.below(n)
            if u != v and not nf.connected(u, v):
                ex = nf.exposed_in_component(u) + nf.exposed_in_component(v)
                if ex:
                    return Command("deexpose", (rng.choice(ex),))
                return Command("link", (u, v, _random_weight(rng)))
        r = 80  # the forest is nearly spanning; ask something instead
    if r < 45 and nf.edges:
        u, v, _ = nf.edges[rng.choice(list(nf.edges))]
        ex = nf.exposed_in_component(u)
        if ex:
            return Command("deexpose", (rng.choice(ex),))
        return Command("cut", (u, v))
    if r < 62:
        v = rng.below(n)
        ex = nf.exposed_in_component(v)
        if nf.exposed[v] or len(ex) >= 2:
            return Command("deexpose", (v if nf.exposed[v] else rng.choice(ex),))
        return Command("expose", (v,))
    if r < 72:
        exposed = [v for v in range(n) if nf.exposed[v]]
        if exposed:
            return Command("deexpose", (rng.choice(exposed),))
        return Command("expose", (rng.below(n),))
    if r < 84:
        return Command("connected", (rng.below(n), rng.below(n)))
    u = rng.below(n)
    comp = nf.component(u)
    ex = [w for w in comp if nf.exposed[w]]
    if len(ex) == 2:
        u, v = ex if rng.below(2) else ex[::-1]
    elif len(ex) == 1:
        u, v = ex[0], rng.choice(comp)
    else:
        v = rng.choice(comp) if rng.below(10) < 7 else rng.below(n)
        if nf.exposed_in_component(v):
            v = u
    return Command("pathmax", (u, v))


def generate(seed: int, n_vertices: int, n_ops: int, validate_every: int = 0, session: Session | None = None):
    """Yield the commands of a fuzz workload; with ``session``, each one runs before the next is drawn."""
    rng = XorShift64Star.from_seed(seed)
    shadow = session.naive if session is not None else NaiveForest()
    line = 0
    for _ in range(n_vertices):
        line += 1
        cmd = Command("addv", (), line)
        if session is None:
            shadow.add_vertex()
        yield cmd
    for i in range(1, n_ops + 1):
        line += 1
        cmd = next_command(rng, shadow)
        cmd = Command(cmd.op, cmd.args, line)
        if session is None:
            _apply_to_oracle(shadow, cmd, edge=i)
        yield cmd
        if validate_every and i % validate_every == 0:
            line += 1
            yield Command("validate", (), line)


def _apply_to_oracle(nf: NaiveForest, cmd: Command, edge: int) -> None:
    if cmd.op == "link":
        u, v, w = cmd.args
        nf.link(u, v, w, edge)
    elif cmd.op == "cut":
        nf.cut(nf.find_edge(*cmd.args))
    elif cmd.op in ("expose", "deexpose"):
        nf.exposed[cmd.args[0]] = cmd.op == "expose"


@dataclass
class FuzzReport:
    seed: int
    n_vertices: int
    ops: int = 0
    queries: int = 0
    mismatches: int = 0
    violations: int = 0
    crashed: bool = False
    lemma_violations: list = field(default_factory=list)
    lemma_checks: Counter = field(default_factory=Counter)
    max_full_splay_depth: int = 0
    rotations: int = 0
    script: list = field(default_factory=list)
    output: list = field(default_factory=list)
    minimized: list | None = None

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.violations or self.crashed or self.lemma_violations)

    def transcript(self) -> str:
        return format_script(self.script) + "".join(f"{line}\n" for line in self.output)

    def summary(self) -> str:
        return (
            f"seed={self.seed} vertices={self.n_vertices} ops={self.ops} queries={self.queries} "
            f"mismatches={self.mismatches} violations={self.violations} "
            f"lemma_violations={len(self.lemma_violations)} max_full_splay_depth={self.max_full_splay_depth} "
            f"rotations={self.rotations}"
        )


def _make_tree(options: dict, tree_factory) -> TopTree:
    return tree_factory(**options) if tree_factory is not None else TopTree(**options)


def fuzz(
    seed: int,
    n_vertices: int,
    n_ops: int,
    validate_every: int = 0,
    strategy: ExposeStrategy | str = ExposeStrategy.FULL_SPLAY,
    ledger: bool = True,
    debug: bool = False,
    minimize: bool = True,
    tree_factory=None,
) -> FuzzReport:
    if n_vertices < 2:
        raise ValueError("fuzzing needs at least two vertices")
    options = dict(strategy=ExposeStrategy(strategy), ledger=ledger, debug=debug)
    session = Session(_make_tree(options, tree_factory))
    report = FuzzReport(seed, n_vertices)
    for cmd in generate(seed, n_vertices, n_ops, validate_every, session):
        report.script.append(cmd)
        session.execute(cmd)
        if cmd.op in ("connected", "pathmax"):
            report.queries += 1
        elif cmd.op not in ("addv", "validate"):
            report.ops += 1
        if session.failed:
            break
    tree = session.tree
    report.mismatches = session.mismatches
    report.violations = session.violations
    report.crashed = session.crashed
    report.output = session.output
    report.rotations = tree.stats.rotations
    if tree.ledger is not None:
        report.lemma_violations = [str(v) for v in tree.ledger.violations]
        report.lemma_checks = tree.ledger.checks
        report.max_full_splay_depth = tree.ledger.max_full_splay_depth
    if not report.ok and minimize:
        report.minimized = minimize_script(report.script, options, tree_factory)
    return report


def _fails(commands, options, tree_factory) -> int | None:
    """Index of the first command after which the run counts as failed, else ``None``."""
    session = Session(_make_tree(options, tree_factory))
    ledger = session.tree.ledger
    for i, cmd in enumerate(commands):
        session.execute(cmd)
        if session.failed or (ledger is not None and ledger.violations):
            return i
    return None


def minimize_script(commands, options: dict, tree_factory=None, max_runs: int = 2000) -> list[Command]:
    """Shortest failing prefix, then greedy chunk deletion (halving chunk sizes down to one)."""
    first = _fails(commands, options, tree_factory)
    if first is None:
        return list(commands)
    current = list(commands[: first + 1])
    runs = 1
    chunk = max(1, len(current) // 2)
    while chunk >= 1 and runs < max_runs:
        i = 0
        while i < len(current) and runs < max_runs:
            candidate = current[:i] + current[i + chunk :]
            runs += 1
            hit = _fails(candidate, options, tree_factory) if candidate else None
            if hit is not None:
                current = candidate[: hit + 1]
            else:
                i += chunk
        chunk //= 2
    return current
