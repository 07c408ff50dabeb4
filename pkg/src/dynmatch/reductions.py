"""Graph reductions: degree sparsifier, bipartite doubling, weight folding.

``Sparsifier`` lets every node keep at most ``ceil(sqrt(m_hat)/eps)`` of its
edges; the sparse graph holds the edges both endpoints keep.

``DoubledView`` runs a bipartite matcher on two copies of the node set and
turns its output into a half-integral fractional matching whose support has
maximum degree two. ``PathCycleMatcher`` keeps a maximum matching of that
support.

``unfold_graph``/``refold_subgraph`` turn integer edge weights into parallel
copies of nodes and back.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .bipartite import BipartiteMatcher
from .graph import DELETE, INSERT, StreamFormatError, UpdateEvent, norm

Edge = tuple[int, int]


# -- degree sparsifier ---------------------------------------------------------------

class Sparsifier:
    """Per-node edge selection with a fixed capacity.

    An edge is selected by a node when the node has room at the time the edge
    arrives. When a selected edge goes away, the node promotes its most
    recently inserted non-selected edge. A node with at most ``cap`` edges
    therefore selects all of them.

    At most two sparse-graph events are emitted per input event. If a deletion
    makes two promoted edges eligible at once, the second one is owed and
    emitted with the next update; ``owed`` holds such edges.
    """

    MAX_EVENTS = 2

    def __init__(self, n: int, eps: float, m_hat: int):
        if not (0 < eps < 1):
            raise ValueError("eps must lie in (0, 1)")
        self.n = n
        self.eps = eps
        self.m_hat = max(1, m_hat)
        self.cap = math.ceil(math.sqrt(self.m_hat) / eps)
        self.sel: list[dict[Edge, None]] = [dict() for _ in range(n)]
        self.rest: list[dict[Edge, None]] = [dict() for _ in range(n)]
        self.sparse: set[Edge] = set()
        self.sdeg = [0] * n
        self.owed: OrderedDict[Edge, None] = OrderedDict()
        self.max_owed = 0
        self.ops = 0

    def selected_by_both(self, e: Edge) -> bool:
        u, v = e
        return e in self.sel[u] and e in self.sel[v]

    def _place(self, x: int, e: Edge) -> None:
        if len(self.sel[x]) < self.cap:
            self.sel[x][e] = None
        else:
            self.rest[x][e] = None

    def _unplace(self, x: int, e: Edge) -> Edge | None:
        """Drop ``e`` at ``x``; returns the promoted edge if both ends now keep it."""
        if e in self.rest[x]:
            del self.rest[x][e]
            return None
        del self.sel[x][e]
        if not self.rest[x]:
            return None
        f = next(reversed(self.rest[x]))
        del self.rest[x][f]
        self.sel[x][f] = None
        self.ops += 1
        return f if self.selected_by_both(f) else None

    def _emit(self, kind: str, e: Edge, out: list) -> None:
        if kind == INSERT:
            self.sparse.add(e)
            self.sdeg[e[0]] += 1
            self.sdeg[e[1]] += 1
        else:
            self.sparse.discard(e)
            self.sdeg[e[0]] -= 1
            self.sdeg[e[1]] -= 1
        out.append(UpdateEvent(kind, *e))

    def update(self, ev: UpdateEvent) -> list[UpdateEvent]:
        e = norm(ev.u, ev.v)
        out: list[UpdateEvent] = []
        fresh: list[Edge] = []
        self.ops += 2
        if ev.kind == INSERT:
            self._place(e[0], e)
            self._place(e[1], e)
            if self.selected_by_both(e):
                fresh.append(e)
        else:
            self.owed.pop(e, None)
            if e in self.sparse:
                self._emit(DELETE, e, out)
            for x in e:
                f = self._unplace(x, e)
                if f is not None:
                    fresh.append(f)
        for f in fresh:
            self.owed[f] = None
        while self.owed and len(out) < self.MAX_EVENTS:
            f, _ = self.owed.popitem(last=False)
            self._emit(INSERT, f, out)
        self.max_owed = max(self.max_owed, len(self.owed))
        return out

    def max_sparse_degree(self) -> int:
        return max(self.sdeg, default=0)


def sparsify_update(sv: Sparsifier, ev: UpdateEvent) -> list[UpdateEvent]:
    return sv.update(ev)


# -- degree-two support matcher -----------------------------------------------------

class PathCycleMatcher:
    """Maximum matching of a graph whose nodes have degree at most two.

    Each edge change recomputes the maximum matching of the one or two
    components it touches, keeping as many current matched edges as possible.
    """

    def __init__(self):
        self.nbr: dict[int, set[int]] = {}
        self.mate: dict[int, int] = {}
        self.ops = 0

    def edges(self) -> list[Edge]:
        return sorted({norm(u, v) for u, ns in self.nbr.items() for v in ns})

    def matching(self) -> list[Edge]:
        return sorted((u, v) for u, v in self.mate.items() if u < v)

    def _component(self, x: int) -> tuple[list[Edge], bool]:
        """Edges of x's component in walk order and whether it is a cycle."""
        if not self.nbr.get(x):
            return [], False
        # walk to one end (or around a cycle)
        start, prev = x, None
        cur = x
        while True:
            nxt = [y for y in self.nbr[cur] if y != prev]
            self.ops += 1
            if len(self.nbr[cur]) < 2 or not nxt:
                start = cur
                break
            prev, cur = cur, nxt[0]
            if cur == x:
                start = x
                break
        edges = []
        prev, cur = None, start
        while True:
            nxt = [y for y in sorted(self.nbr[cur]) if y != prev]
            if not nxt:
                break
            y = nxt[0]
            e = norm(cur, y)
            if edges and e == edges[0]:
                break
            edges.append(e)
            self.ops += 1
            prev, cur = cur, y
            if cur == start:
                return edges, True
        return edges, False

    def _best(self, edges: list[Edge], cycle: bool) -> set[Edge]:
        cur = {e for e in edges if self.mate.get(e[0]) == e[1]}
        L = len(edges)
        want = L // 2 if cycle else (L + 1) // 2
        if len(cur) == want:
            return cur
        options = []
        if cycle:
            for off in range(min(L, 2) if L % 2 == 0 else L):
                options.append({edges[(off + 2 * j) % L] for j in range(want)})
        else:
            options.append({edges[j] for j in range(0, L, 2)})
            if L % 2 == 0:
                options.append({edges[j] for j in range(1, L, 2)})
        return max(options, key=lambda o: (len(o), len(o & cur)))

    def _refit(self, nodes: Iterable[int]) -> list[tuple[str, int, int]]:
        out = []
        done: set[int] = set()
        for x in nodes:
            if x in done:
                continue
            edges, cycle = self._component(x)
            comp = {v for e in edges for v in e} | {x}
            done |= comp
            best = self._best(edges, cycle)
            for v in sorted(comp):
                w = self.mate.get(v)
                if w is not None and v < w and (v, w) not in best:
                    del self.mate[v]
                    del self.mate[w]
                    out.append((DELETE, v, w))
            for a, b in sorted(best):
                if self.mate.get(a) != b:
                    self.mate[a] = b
                    self.mate[b] = a
                    out.append((INSERT, a, b))
        return out

    def add(self, u: int, v: int) -> list[tuple[str, int, int]]:
        for x in (u, v):
            if len(self.nbr.get(x, ())) >= 2:
                raise ValueError(f"node {x} would exceed degree two")
        self.nbr.setdefault(u, set()).add(v)
        self.nbr.setdefault(v, set()).add(u)
        return self._refit((u,))

    def remove(self, u: int, v: int) -> list[tuple[str, int, int]]:
        self.nbr[u].discard(v)
        self.nbr[v].discard(u)
        out = []
        if self.mate.get(u) == v:
            del self.mate[u]
            del self.mate[v]
            out.append((DELETE, *norm(u, v)))
        for x in (u, v):
            if not self.nbr[x]:
                del self.nbr[x]
        return out + self._refit((u, v))


# -- bipartite doubling ---------------------------------------------------------------

class DoubledView:
    """General graph on ``n`` nodes matched through its bipartite double.

    Node v has copies ``v`` (left) and ``v + n`` (right); edge (u, v) becomes
    (u, v + n) and (v, u + n).
    """

    def __init__(self, n: int, eps: float, inner: BipartiteMatcher | None = None):
        self.n = n
        self.inner = inner if inner is not None else BipartiteMatcher(2 * n, eps)
        self.inner_m: set[Edge] = set()
        self.x: dict[Edge, Fraction] = {}
        self.support = PathCycleMatcher()
        self.adj: list[set[int]] = [set() for _ in range(n)]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def _orig(self, a: int, b: int) -> Edge:
        return norm(a % self.n, b % self.n)

    def copies(self, u: int, v: int) -> tuple[Edge, Edge]:
        return norm(u, v + self.n), norm(v, u + self.n)

    def value(self, u: int, v: int) -> Fraction:
        a, b = self.copies(u, v)
        return Fraction((a in self.inner_m) + (b in self.inner_m), 2)

    def fractional(self) -> dict[Edge, Fraction]:
        return dict(self.x)

    def update(self, ev: UpdateEvent) -> list[tuple[str, int, int]]:
        u, v = ev.u, ev.v
        if ev.kind == INSERT:
            self.adj[u].add(v)
            self.adj[v].add(u)
        else:
            self.adj[u].discard(v)
            self.adj[v].discard(u)
        touched: set[Edge] = set()
        for a, b in ((u, v + self.n), (v, u + self.n)):
            side = "low" if a < self.n else "high"
            for sign, p, q in self.inner.apply_edge_update(UpdateEvent(ev.kind, a, b), side):
                if sign == INSERT:
                    self.inner_m.add(norm(p, q))
                else:
                    self.inner_m.discard(norm(p, q))
                touched.add(self._orig(p, q))
        out = []
        # removals before additions keep the support degree at most two
        order = sorted(touched, key=lambda e: self.value(*e) > 0)
        for e in order:
            old = self.x.get(e, Fraction(0))
            new = self.value(*e)
            if new:
                self.x[e] = new
            else:
                self.x.pop(e, None)
            if old and not new:
                out += self.support.remove(*e)
            elif new and not old:
                out += self.support.add(*e)
        return out

    def matching(self) -> list[Edge]:
        return self.support.matching()


def doubling_update(dv: DoubledView, ev: UpdateEvent) -> list[tuple[str, int, int]]:
    return dv.update(ev)


# -- folding --------------------------------------------------------------------------

def parse_weighted(lines: Iterable[str]) -> list[tuple[int, int, int]]:
    """Lines ``u v w`` with integer ``w >= 1``; ``#`` starts a comment."""
    out = []
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise StreamFormatError(f"line {no}: expected 'u v w'")
        try:
            u, v, w = (int(p) for p in parts)
        except ValueError:
            raise StreamFormatError(f"line {no}: non-integer field") from None
        if w < 1:
            raise StreamFormatError(f"line {no}: weight must be a positive integer")
        out.append((u, v, w))
    return out


@dataclass
class FoldedGraph:
    source: list[tuple[int, int, int]]
    copy_id: dict[tuple[int, int], int] = field(default_factory=dict)
    copy_of: list[tuple[int, int]] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    origin: dict[Edge, tuple[int, int, int]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.copy_of)


def _check_weight(w) -> None:
    if isinstance(w, bool) or not isinstance(w, int) or w < 1:
        raise ValueError(f"weight {w!r} is not a positive integer")


def unfold_graph(wedges: Iterable[tuple[int, int, int]]) -> FoldedGraph:
    """Node u becomes copies u^1..u^W(u) where W(u) is its heaviest edge; an
    edge (u, v) of weight w becomes (u^i, v^(w-i+1)) for i = 1..w."""
    src = []
    seen = set()
    top: dict[int, int] = {}
    for u, v, w in wedges:
        _check_weight(w)
        if u == v:
            raise ValueError(f"self-loop at {u}")
        if norm(u, v) in seen:
            raise ValueError(f"duplicate edge {norm(u, v)}")
        seen.add(norm(u, v))
        src.append((u, v, w))
        top[u] = max(top.get(u, 0), w)
        top[v] = max(top.get(v, 0), w)
    fg = FoldedGraph(src)
    for u in sorted(top):
        for i in range(1, top[u] + 1):
            fg.copy_id[(u, i)] = len(fg.copy_of)
            fg.copy_of.append((u, i))
    for u, v, w in src:
        for i in range(1, w + 1):
            e = norm(fg.copy_id[(u, i)], fg.copy_id[(v, w - i + 1)])
            fg.edges.append(e)
            fg.origin[e] = (u, v, w)
    return fg


def refold_subgraph(fg: FoldedGraph, sub: Iterable[Edge]) -> list[tuple[int, int, int]]:
    """Source edges with at least one copy in ``sub`` (same index pairing as unfolding)."""
    out = {}
    for a, b in sub:
        e = norm(a, b)
        if e not in fg.origin:
            raise ValueError(f"edge {e} is not part of the unfolded graph")
        u, v, w = fg.origin[e]
        out[norm(u, v)] = (u, v, w)
    return [out[k] for k in sorted(out)]
