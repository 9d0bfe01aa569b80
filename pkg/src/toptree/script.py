"""Line-oriented operation scripts and a runner that checks a top tree against the naive forest.

Grammar, one command per line (``;`` also separates commands, ``#`` starts a comment)::

    addv | link u v w | cut u v | expose v | deexpose v | connected u v | pathmax u v | validate
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dynops import TopTree
from .errors import TopTreeError
from .oracle import NaiveForest, validate

ARITY = {
    "addv": 0,
    "link": 3,
    "cut": 2,
    "expose": 1,
    "deexpose": 1,
    "connected": 2,
    "pathmax": 2,
    "validate": 0,
}


class ScriptError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Command:
    op: str
    args: tuple = ()
    line: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return " ".join([self.op, *(format_number(a) for a in self.args)])


def format_number(x) -> str:
    """Canonical script spelling: integral values without a fraction, others by repr."""
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return repr(x) if isinstance(x, float) else str(x)


def format_weight(w: float) -> str:
    return f"{w:.6g}"


def _vertex(tok: str, line: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ScriptError(line, f"expected a vertex number, got {tok!r}") from None
    if v < 0:
        raise ScriptError(line, f"negative vertex {v}")
    return v


def _weight(tok: str, line: int) -> float:
    try:
        w = float(tok)
    except ValueError:
        raise ScriptError(line, f"expected a weight, got {tok!r}") from None
    if not math.isfinite(w):
        raise ScriptError(line, f"weight must be finite, got {tok!r}")
    return w


def parse_command(text: str, line: int = 0) -> Command:
    toks = text.split()
    op = toks[0]
    if op not in ARITY:
        raise ScriptError(line, f"unknown command {op!r}")
    if len(toks) - 1 != ARITY[op]:
        raise ScriptError(line, f"{op} takes {ARITY[op]} argument(s), got {len(toks) - 1}")
    if op == "link":
        args = (_vertex(toks[1], line), _vertex(toks[2], line), _weight(toks[3], line))
    else:
        args = tuple(_vertex(t, line) for t in toks[1:])
    return Command(op, args, line)


def parse_script(text: str) -> list[Command]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        for part in body.split(";"):
            if part.strip():
                out.append(parse_command(part, lineno))
    return out


def format_script(commands) -> str:
    return "".join(f"{c}\n" for c in commands)


class Session:
    """Runs commands against a :class:`TopTree` and a :class:`NaiveForest` side by side.

    Invalid operations produce ``error`` lines (both structures must reject
    them); disagreements produce ``mismatch`` lines.  ``crashed`` is set when
    the tree raises something other than a precondition error, after which
    the session refuses further commands.
    """

    def __init__(self, tree: TopTree | None = None, **tree_options) -> None:
        self.tree = tree if tree is not None else TopTree(**tree_options)
        self.naive = NaiveForest()
        self.output: list[str] = []
        self.errors = 0
        self.mismatches = 0
        self.violations = 0
        self.crashed = False

    @property
    def failed(self) -> bool:
        """A real defect: disagreement with the oracle, a validator report or a crash."""
        return bool(self.mismatches or self.violations or self.crashed)

    @property
    def exit_code(self) -> int:
        return 1 if (self.failed or self.errors) else 0

    def _emit(self, text: str) -> None:
        self.output.append(text)

    def _mismatch(self, cmd: Command, detail: str) -> None:
        self.mismatches += 1
        self._emit(f"mismatch line {cmd.line}: {cmd}: {detail}")

    def _why_invalid(self, cmd: Command) -> str | None:
        """The oracle's view of the command's preconditions; ``None`` if it is legal."""
        nf = self.naive
        n = nf.num_vertices
        for v in cmd.args[:2] if cmd.op == "link" else cmd.args:
            if v >= n:
                return f"unknown vertex {v}"
        op = cmd.op
        if op == "link":
            u, v, _ = cmd.args
            if u == v:
                return f"cannot link vertex {u} to itself"
            if nf.connected(u, v):
                return f"vertices {u} and {v} are already connected"
            if nf.exposed_in_component(u) or nf.exposed_in_component(v):
                return "link needs trees without exposed vertices"
        elif op == "cut":
            u, v = cmd.args
            if nf.find_edge(u, v) is None:
                return f"no edge between {u} and {v}"
            if nf.exposed_in_component(u):
                return "cut needs a tree without exposed vertices"
        elif op == "expose":
            (v,) = cmd.args
            if nf.exposed[v]:
                return f"vertex {v} is already exposed"
            if len(nf.exposed_in_component(v)) >= 2:
                return f"the tree of vertex {v} already has two exposed vertices"
        elif op == "deexpose":
            (v,) = cmd.args
            if not nf.exposed[v]:
                return f"vertex {v} is not exposed"
        elif op == "pathmax":
            u, v = cmd.args
            if nf.connected(u, v) and not set(nf.exposed_in_component(u)) <= {u, v}:
                return f"path query {u}-{v}: another vertex of the tree is exposed"
        return None

    def execute(self, cmd: Command) -> None:
        if self.crashed:
            raise RuntimeError("session crashed earlier")
        reason = self._why_invalid(cmd)
        try:
            result = self._apply(cmd, legal=reason is None)
        except TopTreeError as exc:
            if reason is None:
                self._mismatch(cmd, f"tree rejected a legal command: {exc}")
            else:
                self.errors += 1
                self._emit(f"error line {cmd.line}: {exc}")
            return
        except Exception as exc:  # a defect in the structure, not in the script
            self.crashed = True
            self._mismatch(cmd, f"crash {type(exc).__name__}: {exc}")
            return
        if reason is not None:
            self._mismatch(cmd, f"tree accepted an illegal command ({reason})")
            return
        if result is not None:
            self._emit(result)

    def _apply(self, cmd: Command, legal: bool) -> str | None:
        t, nf = self.tree, self.naive
        op, args = cmd.op, cmd.args
        if op == "addv":
            a = t.add_vertex()
            b = nf.add_vertex()
            if a != b:
                raise RuntimeError(f"vertex numbering diverged ({a} vs {b})")
        elif op == "link":
            u, v, w = args
            t.link(u, v, w)
            nf.link(u, v, w, t.edge_between(u, v))
        elif op == "cut":
            u, v = args
            e = t.edge_between(u, v)
            if e is None:
                raise TopTreeError(f"no edge between {u} and {v}")
            t.cut(e)
            if legal:
                nf.cut(e)
        elif op == "expose":
            (v,) = args
            t.expose(v)
            nf.exposed[v] = True
        elif op == "deexpose":
            (v,) = args
            t.deexpose(v)
            nf.exposed[v] = False
        elif op == "connected":
            u, v = args
            got = t.connected(u, v)
            if legal and got != nf.connected(u, v):
                self._mismatch(cmd, f"tree says {got}")
            return f"connected {u} {v} {'true' if got else 'false'}"
        elif op == "pathmax":
            u, v = args
            got = t.path_max(u, v)
            got = None if got is None else got[0]
            if legal and got != nf.path_max(u, v):
                self._mismatch(cmd, f"tree says {got}, oracle says {nf.path_max(u, v)}")
            return f"pathmax {u} {v} {'disconnected' if got is None else format_weight(got)}"
        elif op == "validate":
            report = validate(t)
            self.violations += len(report.violations)
            return "\n".join(report.lines())
        return None

    def run(self, commands) -> "Session":
        for cmd in commands:
            self.execute(cmd)
            if self.crashed:
                break
        return self


def run_text(text: str, **tree_options) -> Session:
    return Session(**tree_options).run(parse_script(text))
