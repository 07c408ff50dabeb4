"""Dynamic simple graph with cyclic neighbor rings and per-node cursors.

Every neighbor list is a circular doubly-linked ring stored as two dicts
(successor and predecessor keyed by neighbor id), so insertion next to the
cursor and deletion of an arbitrary neighbor are both O(1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class GraphError(Exception):
    code = "graph-error"


class DuplicateEdge(GraphError):
    code = "duplicate-edge"


class SelfLoop(GraphError):
    code = "self-loop"


class MissingEdge(GraphError):
    code = "missing-edge"


class EmptyNeighborhood(GraphError):
    code = "empty-neighborhood"


class BadNode(GraphError):
    code = "bad-node"


INSERT = "+"
DELETE = "-"


def norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class UpdateEvent:
    kind: str
    u: int
    v: int

    @property
    def edge(self) -> tuple[int, int]:
        return norm(self.u, self.v)


@dataclass(frozen=True)
class StarUpdate:
    kind: str
    center: int
    leaves: tuple

    def __post_init__(self):
        if not self.leaves:
            raise ValueError("star update needs at least one leaf")
        if len(set(self.leaves)) != len(self.leaves):
            raise ValueError("star leaves must be distinct")
        if self.center in self.leaves:
            raise ValueError("star center cannot be its own leaf")

    def edges(self) -> list[tuple[int, int]]:
        return [norm(self.center, x) for x in self.leaves]


class Ring:
    """Circular doubly-linked list of distinct ints with a cursor."""

    __slots__ = ("nxt", "prv", "ptr")

    def __init__(self):
        self.nxt: dict[int, int] = {}
        self.prv: dict[int, int] = {}
        self.ptr: int | None = None

    def __len__(self):
        return len(self.nxt)

    def __contains__(self, x):
        return x in self.nxt

    def insert_before_ptr(self, x: int) -> None:
        if self.ptr is None:
            self.nxt[x] = x
            self.prv[x] = x
            self.ptr = x
            return
        p = self.ptr
        before = self.prv[p]
        self.nxt[before] = x
        self.prv[x] = before
        self.nxt[x] = p
        self.prv[p] = x

    def remove(self, x: int) -> None:
        nx = self.nxt.pop(x)
        pv = self.prv.pop(x)
        if nx == x:
            self.ptr = None
            return
        self.nxt[pv] = nx
        self.prv[nx] = pv
        if self.ptr == x:
            self.ptr = nx

    def advance(self) -> int:
        """Move the cursor one step and return the element it now addresses."""
        if self.ptr is None:
            raise EmptyNeighborhood("ring is empty")
        self.ptr = self.nxt[self.ptr]
        return self.ptr

    def __iter__(self) -> Iterator[int]:
        if self.ptr is None:
            return
        start = self.ptr
        x = start
        while True:
            yield x
            x = self.nxt[x]
            if x == start:
                return


class DynamicGraph:
    """Fixed node universe ``0..n-1``; edges come and go.

    ``ops`` counts elementary operations so per-update budgets can be
    checked without relying on wall-clock time.
    """

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("node count must be non-negative")
        self.n = n
        self.rings = [Ring() for _ in range(n)]
        self.m = 0
        self.ops = 0

    def _check(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise BadNode(f"node id out of range: ({u}, {v})")

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.rings[u]

    def degree(self, v: int) -> int:
        return len(self.rings[v])

    def neighbors(self, v: int) -> Iterator[int]:
        return iter(self.rings[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.rings[u]:
                if u < v:
                    yield (u, v)

    def insert_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if u == v:
            raise SelfLoop(f"self-loop at {u}")
        if v in self.rings[u]:
            raise DuplicateEdge(f"edge ({u}, {v}) already present")
        self.rings[u].insert_before_ptr(v)
        self.rings[v].insert_before_ptr(u)
        self.m += 1
        self.ops += 2

    def delete_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if u == v or v not in self.rings[u]:
            raise MissingEdge(f"edge ({u}, {v}) not present")
        self.rings[u].remove(v)
        self.rings[v].remove(u)
        self.m -= 1
        self.ops += 2

    def advance_cursor(self, v: int) -> int:
        self.ops += 1
        return self.rings[v].advance()

    def cursor(self, v: int) -> int | None:
        return self.rings[v].ptr

    def apply(self, ev: UpdateEvent) -> None:
        if ev.kind == INSERT:
            self.insert_edge(ev.u, ev.v)
        elif ev.kind == DELETE:
            self.delete_edge(ev.u, ev.v)
        else:
            raise ValueError(f"unknown event kind {ev.kind!r}")


class StreamFormatError(ValueError):
    pass


def parse_stream(lines: Iterable[str]) -> Iterator[UpdateEvent]:
    """Parse ``+ u v`` / ``- u v`` lines; ``#`` starts a comment line."""
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in (INSERT, DELETE):
            raise StreamFormatError(f"line {lineno}: expected '+ u v' or '- u v', got {raw!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise StreamFormatError(f"line {lineno}: node ids must be integers") from None
        if u < 0 or v < 0:
            raise StreamFormatError(f"line {lineno}: negative node id")
        yield UpdateEvent(parts[0], u, v)


def format_stream(events: Iterable[UpdateEvent]) -> str:
    return "".join(f"{e.kind} {e.u} {e.v}\n" for e in events)
