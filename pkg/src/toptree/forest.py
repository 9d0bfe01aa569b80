"""The underlying forest.

Each vertex keeps an intrusive doubly-linked list of incidence records, so an
edge can be unlinked from both endpoints in constant time.  Incidence record
``2*e + side`` belongs to edge ``e`` at endpoint ``ends[e][side]``.

Edge ids are never reused, which makes stale-handle detection exact.
"""

from __future__ import annotations

from typing import Iterator

from .errors import StaleHandleError, TopTreeError

NIL = -1


class Forest:
    def __init__(self) -> None:
        # per vertex
        self.head: list[int] = []
        self.exposed: list[bool] = []
        # per edge; ``None`` once deleted
        self.ends: list[tuple[int, int] | None] = []
        self.weight: list[float] = []
        # per incidence record
        self.nxt: list[int] = []
        self.prv: list[int] = []
        self.num_edges = 0

    @property
    def num_vertices(self) -> int:
        return len(self.head)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < len(self.head)):
            raise StaleHandleError(f"unknown vertex {v}")

    def _check_edge(self, e: int) -> None:
        if not (0 <= e < len(self.ends)) or self.ends[e] is None:
            raise StaleHandleError(f"unknown or deleted edge {e}")

    def add_vertex(self) -> int:
        self.head.append(NIL)
        self.exposed.append(False)
        return len(self.head) - 1

    def insert_edge(self, u: int, v: int, weight: float = 0.0) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise TopTreeError(f"self-loop at vertex {u}")
        e = len(self.ends)
        self.ends.append((u, v))
        self.weight.append(weight)
        self.nxt.extend((NIL, NIL))
        self.prv.extend((NIL, NIL))
        self._push(u, 2 * e)
        self._push(v, 2 * e + 1)
        self.num_edges += 1
        return e

    def _push(self, v: int, rec: int) -> None:
        old = self.head[v]
        self.nxt[rec] = old
        self.prv[rec] = NIL
        if old != NIL:
            self.prv[old] = rec
        self.head[v] = rec

    def _unlink(self, v: int, rec: int) -> None:
        n, p = self.nxt[rec], self.prv[rec]
        if p == NIL:
            self.head[v] = n
        else:
            self.nxt[p] = n
        if n != NIL:
            self.prv[n] = p
        self.nxt[rec] = self.prv[rec] = NIL

    def delete_edge(self, e: int) -> None:
        self._check_edge(e)
        u, v = self.ends[e]
        self._unlink(u, 2 * e)
        self._unlink(v, 2 * e + 1)
        self.ends[e] = None
        self.num_edges -= 1

    def any_incident_edge(self, v: int) -> int | None:
        self._check_vertex(v)
        rec = self.head[v]
        return None if rec == NIL else rec >> 1

    def degree_at_least_two(self, v: int) -> bool:
        rec = self.head[v]
        return rec != NIL and self.nxt[rec] != NIL

    def endpoints(self, e: int) -> tuple[int, int]:
        self._check_edge(e)
        return self.ends[e]

    def other_endpoint(self, e: int, v: int) -> int:
        a, b = self.endpoints(e)
        return b if v == a else a

    def set_exposed(self, v: int, flag: bool) -> None:
        self._check_vertex(v)
        self.exposed[v] = flag

    def is_exposed(self, v: int) -> bool:
        self._check_vertex(v)
        return self.exposed[v]

    def is_edge(self, e: int) -> bool:
        return 0 <= e < len(self.ends) and self.ends[e] is not None

    def incident_edges(self, v: int) -> Iterator[int]:
        self._check_vertex(v)
        rec = self.head[v]
        while rec != NIL:
            yield rec >> 1
            rec = self.nxt[rec]

    def edges(self) -> Iterator[int]:
        for e, ends in enumerate(self.ends):
            if ends is not None:
                yield e

    def find_edge(self, u: int, v: int) -> int | None:
        for e in self.incident_edges(u):
            if self.other_endpoint(e, u) == v:
                return e
        return None
