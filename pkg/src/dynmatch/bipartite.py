"""Dynamic matching on bipartite subgraphs fed by edge and star updates.

The inner matcher reuses the phase scheme of ``StabilityMatcher`` but its
periodic rebuild only removes augmenting paths of length 1 and 3, which
already gives a 3/2-approximation. No degree bound is imposed. The output
goes through a ``RecourseLimiter`` so a star update never moves more than
``ceil(c/eps)`` output edges.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator

from .graph import DELETE, INSERT, StarUpdate, UpdateEvent, norm
from .recourse import RecourseLimiter
from .stability import StabilityMatcher


class BipartitionError(ValueError):
    pass


def short_path_steps(adj, nodes: list[int], warm: dict | None = None) -> Iterator[None]:
    """Greedy maximal matching, then remove every augmenting path x - y = z - a.

    The return value is the ``mate`` dict. Free nodes only ever become
    matched, so a matched edge that once had no augmenting path through it
    never gains one; only newly created matched edges need a second look.
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

    def free_nbr(y, avoid=None):
        for x in adj[y]:
            if x not in mate and x != avoid:
                return x
        return None

    work = deque((u, w) for u, w in sorted(mate.items()) if u < w)
    while work:
        y, z = work.popleft()
        yield
        if mate.get(y) != z:
            continue
        x = free_nbr(y)
        if x is None:
            continue
        a = free_nbr(z, avoid=x)
        if a is None:
            continue
        for _ in range(len(adj[y]) + len(adj[z])):
            yield
        mate[x], mate[y] = y, x
        mate[z], mate[a] = a, z
        work.append((x, y))
        work.append((z, a))
    return mate


class ShortPathMatcher(StabilityMatcher):
    """Phase-based matcher whose rebuild stops at length-3 augmenting paths."""

    def __init__(self, n: int, eps: float, repair: bool = True):
        super().__init__(n, eps, None, repair=repair)

    def _static_steps(self, adj, nodes, warm):
        return short_path_steps(adj, nodes, warm)


class BipartiteMatcher:
    """Recourse-limited matcher for a bipartite graph with dynamic sides.

    A node's side is fixed while it has at least one edge and forgotten when
    it becomes isolated. Sides can be supplied with each update or inferred
    from the node's current neighbors.
    """

    def __init__(self, n: int, eps: float, c: int | None = None):
        self.n = n
        self.eps = eps
        self.inner = ShortPathMatcher(n, min(eps, 1 / 3))
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.side: dict[int, str] = {}
        kw = {} if c is None else {"c": c}
        self.wrap = RecourseLimiter(eps, self.has_edge, **kw)
        self.updates = 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    @property
    def bound(self) -> int:
        return self.wrap.bound

    @property
    def max_recourse(self) -> int:
        return self.wrap.max_recourse

    def matching(self) -> list[tuple[int, int]]:
        return self.wrap.matching()

    def inner_matching(self) -> list[tuple[int, int]]:
        return self.inner.matching()

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    # -- sides ---------------------------------------------------------------
    @staticmethod
    def _other(side: str) -> str:
        return "high" if side == "low" else "low"

    def _resolve_sides(self, center: int, leaves, kind: str, center_side: str | None) -> str | None:
        known = self.side.get(center)
        if center_side is not None:
            if known is not None and known != center_side:
                raise BipartitionError(f"node {center} is on the {known} side")
            known = center_side
        for x in leaves:
            sx = self.side.get(x)
            if sx is None:
                continue
            want = self._other(sx)
            if known is None:
                known = want
            elif known != want:
                raise BipartitionError(f"star at {center} puts {x} on the same side as its center")
        if kind == INSERT and known is None:
            known = "low"
        return known

    def _claim(self, center, leaves, cs):
        self.side.setdefault(center, cs)
        for x in leaves:
            self.side.setdefault(x, self._other(cs))

    def _release(self, nodes):
        for x in nodes:
            if not self.adj[x]:
                self.side.pop(x, None)

    # -- updates -------------------------------------------------------------
    def apply_star_update(self, s: StarUpdate, center_side: str | None = None) -> list[tuple[str, int, int]]:
        c, leaves = s.center, s.leaves
        if s.kind == INSERT:
            cs = self._resolve_sides(c, leaves, INSERT, center_side)
            for x in leaves:
                if x in self.adj[c]:
                    raise ValueError(f"edge ({c}, {x}) already present")
            self._claim(c, leaves, cs)
            for x in leaves:
                self.adj[c].add(x)
                self.adj[x].add(c)
        else:
            for x in leaves:
                if x not in self.adj[c]:
                    raise ValueError(f"edge ({c}, {x}) not present")
            for x in leaves:
                self.adj[c].discard(x)
                self.adj[x].discard(c)
            self._release((c, *leaves))
        self.inner.star(s.kind, c, leaves)
        self.updates += 1
        deleted = [norm(c, x) for x in leaves] if s.kind == DELETE else ()
        return self.wrap.advance(self.inner.matching, deleted)

    def apply_edge_update(self, ev: UpdateEvent, u_side: str | None = None) -> list[tuple[str, int, int]]:
        return self.apply_star_update(StarUpdate(ev.kind, ev.u, (ev.v,)), u_side)

    def update(self, kind: str, u: int, v: int) -> list[tuple[str, int, int]]:
        return self.apply_edge_update(UpdateEvent(kind, u, v))
