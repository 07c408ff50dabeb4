"""Near-maximum matching for bounded-degree dynamic graphs.

Time is cut into phases. A phase that starts with a matching of size ``k``
lasts ``floor(eps/5 * k) + 1`` updates. During a phase a static rebuild runs
on a frozen copy of the graph (taken at the first update of the phase) in
equal slices; at the end of the phase the rebuilt matching, minus any edge
deleted in the meantime, replaces the live one. An undeleted subset of a
good matching stays good for that many updates, so the output never drifts
far from optimal.

Between rebuilds the live matching is also patched locally in ``O(Delta)``:
matched edges that disappear are dropped at once, freed endpoints look for a
free neighbor or a length-3 augmenting path, and new edges are taken greedily
or used to close a length-3 or length-5 augmenting path.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Iterator

from .graph import DELETE, INSERT, norm

EVEN, ODD = 1, 2


class DegreeBoundExceeded(ValueError):
    pass


def forest_phase(adj, mate: dict, nodes: Iterable[int]) -> Iterator[None]:
    """Grow an alternating forest from all free nodes and augment along every
    vertex-disjoint augmenting path met on the way.

    ``adj[v]`` is an iterable of neighbors, ``mate`` a dict holding both
    directions of each matched pair (updated in place). Yields once per unit
    of work; the generator's return value is the number of augmentations.
    """
    label: dict[int, int] = {}
    parent: dict[int, int] = {}
    base: dict[int, int] = {}
    root: dict[int, int] = {}
    members: dict[int, list[int]] = {}
    dead: set[int] = set()
    q: deque[int] = deque()
    for v in nodes:
        yield
        if v not in mate:
            label[v] = EVEN
            root[v] = v
            q.append(v)

    def b(x: int) -> int:
        return base.get(x, x)

    def lca(x: int, y: int) -> int:
        seen = set()
        while True:
            x = b(x)
            seen.add(x)
            if x not in mate:
                break
            x = parent[mate[x]]
        while True:
            y = b(y)
            if y in seen:
                return y
            y = parent[mate[y]]

    def mark(v: int, top: int, child: int, inb: set) -> None:
        while b(v) != top:
            inb.add(b(v))
            inb.add(b(mate[v]))
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def flip(x) -> Iterator[None]:
        while x is not None:
            yield
            px = parent[x]
            nx = mate.get(px)
            mate[x] = px
            mate[px] = x
            x = nx

    found = 0
    while q:
        v = q.popleft()
        if root[v] in dead:
            continue
        for w in list(adj[v]):
            yield
            if root[v] in dead:
                break
            if b(v) == b(w) or mate.get(v) == w:
                continue
            lw = label.get(w)
            if lw is None:
                label[w] = ODD
                parent[w] = v
                root[w] = root[v]
                x = mate[w]
                label[x] = EVEN
                root[x] = root[v]
                q.append(x)
            elif lw == EVEN:
                if root[w] in dead:
                    continue
                if root[w] != root[v]:
                    rv, rw = root[v], root[w]
                    a, c = mate.get(v), mate.get(w)
                    yield from flip(a)
                    yield from flip(c)
                    mate[v] = w
                    mate[w] = v
                    dead.add(rv)
                    dead.add(rw)
                    found += 1
                    break
                top = lca(v, w)
                inb: set[int] = set()
                mark(v, top, w, inb)
                mark(w, top, v, inb)
                inb.discard(top)
                merged = members.setdefault(top, [top])
                for c in inb:
                    for i in members.pop(c, [c]):
                        yield
                        base[i] = top
                        merged.append(i)
                        if label.get(i) != EVEN:
                            label[i] = EVEN
                            root[i] = root[top]
                            q.append(i)
    return found


def static_matching_steps(adj, nodes: list[int], warm: dict | None = None) -> Iterator[None]:
    """Stepwise static rebuild; the return value is the final ``mate`` dict.

    Starts from ``warm`` (or empty), extends greedily, then runs forest phases
    until one finds nothing. The result has no augmenting path at all, so in
    particular none of length ``2*ceil(1/eps) - 1`` or less.
    """
    mate: dict[int, int] = dict(warm) if warm else {}
    for v in nodes:
        if v in mate:
            continue
        for w in adj[v]:
            yield
            if w not in mate:
                mate[v] = w
                mate[w] = v
                break
    while True:
        found = yield from forest_phase(adj, mate, nodes)
        if not found:
            return mate


def run_steps(gen: Iterator[None]):
    """Drive a step generator to completion; returns (value, steps)."""
    steps = 0
    try:
        while True:
            next(gen)
            steps += 1
    except StopIteration as stop:
        return stop.value, steps


def static_near_max(n: int, edges: Iterable[tuple[int, int]], eps: float = 1 / 3) -> list[tuple[int, int]]:
    """Matching with no augmenting path of length up to ``2*ceil(1/eps) - 1``."""
    if not (0 < eps <= 1):
        raise ValueError("eps must lie in (0, 1]")
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    mate, _ = run_steps(static_matching_steps(adj, sorted(adj)))
    return sorted((u, w) for u, w in mate.items() if u < w)


class StabilityMatcher:
    """Dynamic matching for graphs of maximum degree ``delta``.

    Feed it the edge updates of its host graph through ``insert``/``delete``;
    each returns the list of matching changes as ``(sign, u, v)``.
    """

    def __init__(self, n: int, eps: float, delta: int | None, repair: bool = True):
        if not (0 < eps <= 1 / 3 + 1e-12):
            raise ValueError("eps must lie in (0, 1/3]")
        if delta is not None and delta < 1:
            raise ValueError("degree bound must be positive")
        self.n = n
        self.eps = eps
        self.eps_phase = eps / 5
        self.delta = delta
        self.repair = repair
        self.adj: list[dict[int, None]] = [dict() for _ in range(n)]
        self.active: dict[int, None] = {}
        self.mate = [-1] * n
        self.mset: set[tuple[int, int]] = set()
        self.size = 0
        self.m = 0
        self.phase_len = 0
        self.phase_left = 0
        self.phase_start_size = 0
        self.phases = 0
        self.chunk = 0
        self._worker: Iterator[None] | None = None
        self._result: dict | None = None
        self._since: dict[int, dict[int, str]] = {}
        self._mate_since: dict[int, int] = {}
        self._changes: list[tuple[str, int, int]] = []
        self.ops = 0
        self.last_ops = 0
        self.swap_ops = 0

    # -- matching primitives -----------------------------------------------------------
    def _note_mate(self, x: int) -> None:
        if x not in self._mate_since:
            self._mate_since[x] = self.mate[x]

    def _match(self, u: int, v: int) -> None:
        self._note_mate(u)
        self._note_mate(v)
        self.mate[u] = v
        self.mate[v] = u
        self.mset.add(norm(u, v))
        self.size += 1
        self._changes.append((INSERT, *norm(u, v)))

    def _unmatch(self, u: int, v: int) -> None:
        self._note_mate(u)
        self._note_mate(v)
        self.mate[u] = -1
        self.mate[v] = -1
        self.mset.discard(norm(u, v))
        self.size -= 1
        self._changes.append((DELETE, *norm(u, v)))

    def matching(self) -> list[tuple[int, int]]:
        return sorted(self.mset)

    def is_matched(self, u: int, v: int) -> bool:
        return self.mate[u] == v

    # -- local repairs, all O(delta) --------------------------------------------------------
    def _free_neighbor(self, x: int, avoid: int = -1) -> int:
        for y in self.adj[x]:
            self.ops += 1
            if self.mate[y] == -1 and y != avoid:
                return y
        return -1

    def _settle(self, x: int) -> None:
        """x is free: take a free neighbor or close a length-3 augmenting path."""
        if self.mate[x] != -1 or not self.adj[x]:
            return
        y = self._free_neighbor(x)
        if y != -1:
            self._match(x, y)
            return
        budget = math.ceil((self.delta or len(self.adj[x])) / self.eps ** 2)
        for y in self.adj[x]:
            z = self.mate[y]
            if z == -1:
                continue
            for a in self.adj[z]:
                self.ops += 1
                budget -= 1
                if a != x and a != y and self.mate[a] == -1:
                    self._unmatch(y, z)
                    self._match(x, y)
                    self._match(z, a)
                    return
                if budget <= 0:
                    return

    def _on_new_edge(self, u: int, v: int) -> None:
        mu, mv = self.mate[u], self.mate[v]
        if mu == -1 and mv == -1:
            self._match(u, v)
            return
        if mu == -1 or mv == -1:
            # free end x, matched end y: x - y = y' - a
            x, y = (u, v) if mu == -1 else (v, u)
            yp = self.mate[y]
            a = self._free_neighbor(yp, avoid=x)
            if a != -1:
                self._unmatch(y, yp)
                self._match(x, y)
                self._match(yp, a)
            return
        # both matched: a - u' = u - v = v' - b
        a = self._free_neighbor(mu)
        if a == -1:
            return
        b = self._free_neighbor(mv, avoid=a)
        if b == -1:
            return
        self._unmatch(u, mu)
        self._unmatch(v, mv)
        self._match(u, v)
        self._match(mu, a)
        self._match(mv, b)

    # -- phase machinery ----------------------------------------------------------------
    def _journal(self, u: int, v: int, kind: str) -> None:
        for x, y in ((u, v), (v, u)):
            j = self._since.setdefault(x, {})
            if y in j:
                del j[y]
            else:
                j[y] = kind

    def _snapshot_steps(self) -> Iterator[None]:
        """Copy graph and matching as they were when the phase began, then rebuild."""
        adj: dict[int, list[int]] = {}
        warm: dict[int, int] = {}
        nodes = list(self.active) + [x for x in self._since if x not in self.active]
        for x in nodes:
            yield
            cur = set(self.adj[x])
            for y, kind in self._since.get(x, {}).items():
                if kind == INSERT:
                    cur.discard(y)
                else:
                    cur.add(y)
            if cur:
                adj[x] = sorted(cur)
            m0 = self._mate_since.get(x, self.mate[x])
            if m0 != -1:
                warm[x] = m0
        nodes = sorted(adj)
        mate = yield from self._static_steps(adj, nodes, warm)
        return mate

    def _static_steps(self, adj, nodes, warm):
        return static_matching_steps(adj, nodes, warm)

    def _start_phase(self) -> None:
        self.phases += 1
        self.phase_start_size = self.size
        self.phase_len = math.floor(self.eps_phase * self.size) + 1
        self.phase_left = self.phase_len
        self._since = {}
        self._mate_since = {}
        self._worker = self._snapshot_steps()
        est = len(self.active) + 2 * self.m
        self.chunk = math.ceil(2 * est / self.phase_len) + 1

    def _finish_phase(self) -> None:
        if self._result is None:
            self._result, steps = run_steps(self._worker)
            self.ops += steps
        mate, self._result = self._result, None
        self._worker = None
        # keep only edges still present; use whichever of rebuilt and live is larger
        new = {}
        for u, w in mate.items():
            self.swap_ops += 1
            if u < w and w in self.adj[u]:
                new[u] = w
                new[w] = u
        if len(new) // 2 < self.size:
            return
        for u, w in sorted(self.mset):
            if new.get(u) != w:
                self.swap_ops += 1
                self._unmatch(u, w)
        for u, w in sorted(new.items()):
            if u < w and self.mate[u] != w:
                self.swap_ops += 1
                self._match(u, w)

    def _tick(self, weight: int = 1) -> None:
        """Advance the rebuild by ``weight`` updates' worth of work."""
        if self.phase_left <= 0:
            self._start_phase()
        if self._worker is not None:
            for _ in range(self.chunk * weight):
                try:
                    next(self._worker)
                except StopIteration as stop:
                    self._result = stop.value
                    self._worker = None
                    break
                self.ops += 1
        self.phase_left -= weight
        if self.phase_left <= 0:
            self._finish_phase()
            self.phase_left = 0

    # -- updates ------------------------------------------------------------------------------------
    def _check_insert(self, u: int, v: int) -> None:
        if u == v or v in self.adj[u]:
            raise ValueError(f"edge ({u}, {v}) invalid or already present")
        if self.delta is not None and (len(self.adj[u]) >= self.delta or len(self.adj[v]) >= self.delta):
            raise DegreeBoundExceeded(f"inserting ({u}, {v}) exceeds degree bound {self.delta}")

    def _add_edge(self, u: int, v: int) -> None:
        self._check_insert(u, v)
        self.adj[u][v] = None
        self.adj[v][u] = None
        self.active[u] = None
        self.active[v] = None
        self.m += 1
        if self._worker is not None:
            self._journal(u, v, INSERT)
        if self.repair:
            self._on_new_edge(u, v)
        elif self.mate[u] == -1 and self.mate[v] == -1:
            self._match(u, v)

    def _drop_edge(self, u: int, v: int) -> None:
        if v not in self.adj[u]:
            raise ValueError(f"edge ({u}, {v}) not present")
        del self.adj[u][v]
        del self.adj[v][u]
        for x in (u, v):
            if not self.adj[x]:
                del self.active[x]
        self.m -= 1
        if self._worker is not None:
            self._journal(u, v, DELETE)
        if self.mate[u] == v:
            self._unmatch(u, v)
            if self.repair:
                self._settle(u)
                self._settle(v)

    def _step(self, work, weight: int = 1) -> list[tuple[str, int, int]]:
        # apply every edge change, then the rebuild slices they pay for
        ops0 = self.ops
        work()
        self._tick(weight)
        self.last_ops = self.ops - ops0
        out, self._changes = self._changes, []
        return out

    def insert(self, u: int, v: int) -> list[tuple[str, int, int]]:
        return self._step(lambda: self._add_edge(u, v))

    def delete(self, u: int, v: int) -> list[tuple[str, int, int]]:
        return self._step(lambda: self._drop_edge(u, v))

    def star(self, kind: str, center: int, leaves) -> list[tuple[str, int, int]]:
        """All edges ``center - leaf`` change together and count as one update."""
        def work():
            for x in leaves:
                if kind == INSERT:
                    self._add_edge(center, x)
                else:
                    self._drop_edge(center, x)
        return self._step(work)

    def batch(self, changes) -> list[tuple[str, int, int]]:
        """Several edge changes at once, deletions first. Each change still
        counts as one update towards the phase length."""
        changes = sorted(changes, key=lambda c: c[0] != DELETE)
        if not changes:
            return []

        def work():
            for sign, a, b in changes:
                if sign == INSERT:
                    self._add_edge(a, b)
                else:
                    self._drop_edge(a, b)
        return self._step(work, len(changes))

    def update(self, kind: str, u: int, v: int) -> list[tuple[str, int, int]]:
        return self.insert(u, v) if kind == INSERT else self.delete(u, v)

    def apply_changes(self, changes) -> list[tuple[str, int, int]]:
        """Apply a batch of host-graph edge changes; deletions first."""
        out = []
        for sign, a, b in sorted(changes, key=lambda c: c[0] != DELETE):
            out.extend(self.update(sign, a, b))
        return out


def undeleted_ratio_holds(mu_then: int, matching: list[tuple[int, int]], later_edges: set, mu_later: int,
                          alpha: float, eps: float) -> bool:
    """Check that the undeleted part of an ``alpha``-approximate matching is
    ``alpha*(1+3*eps)``-approximate in a later graph."""
    kept = sum(1 for e in matching if norm(*e) in later_edges)
    return kept * alpha * (1 + 3 * eps) >= mu_later - 1e-9
