"""Bounded-recourse output for any dynamic matching algorithm.

The wrapper keeps its own output matching and walks it toward the inner
algorithm's matching a constant number of steps per update. A step removes
at most one edge and adds at most one edge, so per-update recourse stays
``O(1/eps)`` even when the inner algorithm rewrites its matching wholesale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .graph import DELETE, INSERT, norm

Edge = tuple[int, int]
Step = tuple  # (edge to remove or None, edge to add or None)

RECOURSE_C = 7


class NotAMatching(ValueError):
    pass


def _mate_map(m: Iterable[Edge]) -> dict[int, int]:
    mate: dict[int, int] = {}
    for u, v in m:
        if u == v or u in mate or v in mate:
            raise NotAMatching(f"edge ({u}, {v}) shares an endpoint")
        mate[u] = v
        mate[v] = u
    return mate


def _components(ma: dict[int, int], mb: dict[int, int]):
    """Split the symmetric difference into alternating paths and cycles.

    Yields ``(kind, edges)`` where edges alternate between the two matchings
    in walk order and ``kind`` is "path" or "cycle".
    """
    both = {v for v in ma if mb.get(v) == ma[v]}
    nodes = sorted((set(ma) | set(mb)) - both)
    seen: set[int] = set()

    def deg(v):
        return (v in ma and v not in both) + (v in mb and v not in both)

    def walk(start, first):
        out = []
        cur, side = start, first
        while True:
            m = ma if side == "a" else mb
            if cur not in m or cur in both:
                break
            nxt = m[cur]
            out.append((side, norm(cur, nxt)))
            seen.add(cur)
            seen.add(nxt)
            cur = nxt
            side = "b" if side == "a" else "a"
            if cur == start:
                return out, True
        return out, False

    for v in nodes:
        if v in seen or deg(v) != 1:
            continue
        first = "a" if (v in ma and v not in both) else "b"
        edges, _ = walk(v, first)
        yield "path", edges
    for v in nodes:
        if v in seen:
            continue
        edges, _ = walk(v, "a")
        yield "cycle", edges


@dataclass
class TransformPlan:
    source: list[Edge]
    target: list[Edge]
    steps: list[Step] = field(default_factory=list)
    cursor: int = 0

    def done(self) -> bool:
        return self.cursor >= len(self.steps)


def plan_transform(m_src: Iterable[Edge], m_dst: Iterable[Edge]) -> TransformPlan:
    """Order of work: components that grow the matching, then size-neutral
    paths, then cycles, then shrinking paths. Within a component the walk
    starts at an end covered by the target so each step frees exactly the
    one source edge blocking the next target edge."""
    src = sorted(norm(*e) for e in m_src)
    dst = sorted(norm(*e) for e in m_dst)
    ma, mb = _mate_map(src), _mate_map(dst)
    grow, even, cyc, shrink = [], [], [], []
    for kind, edges in _components(ma, mb):
        na = sum(1 for s, _ in edges if s == "a")
        nb = len(edges) - na
        if kind == "cycle":
            cyc.append(edges)
        elif nb > na:
            grow.append(edges)
        elif nb == na:
            even.append(edges)
        else:
            shrink.append(edges)
    steps: list[Step] = []
    for edges in grow + even:
        if edges[0][0] == "a":
            edges = edges[::-1]
        steps.extend(_walk_steps(edges))
    for edges in cyc + shrink:
        # both ends (or no ends) belong to the source: drop the first source
        # edge on its own, then proceed pairwise
        steps.append((edges[0][1], None))
        steps.extend(_walk_steps(edges[1:]))
    return TransformPlan(src, dst, steps)


def _walk_steps(edges) -> list[Step]:
    # edges start with a target edge; each target edge is paired with the
    # following source edge, which is the only one still blocking it
    steps = []
    i = 0
    while i < len(edges):
        side, e = edges[i]
        if side == "b":
            nxt = edges[i + 1][1] if i + 1 < len(edges) and edges[i + 1][0] == "a" else None
            steps.append((nxt, e))
            i += 2 if nxt is not None else 1
        else:
            steps.append((e, None))
            i += 1
    return steps


def apply_step(mate: dict[int, int], step: Step, live: Callable[[int, int], bool] | None = None) -> list[tuple[str, int, int]]:
    """Apply one step to ``mate`` in place, skipping parts that no longer make sense."""
    out = []
    rem, add = step
    if rem is not None and mate.get(rem[0]) == rem[1]:
        del mate[rem[0]]
        del mate[rem[1]]
        out.append((DELETE, *rem))
    if add is not None:
        a, b = add
        if a not in mate and b not in mate and (live is None or live(a, b)):
            mate[a] = b
            mate[b] = a
            out.append((INSERT, *add))
    return out


class RecourseLimiter:
    """Output matching that trails an inner algorithm with bounded recourse.

    Each update: drop output edges that left the graph, run
    ``steps_per_update`` plan steps, and once a phase of
    ``max(1, floor(eps * |M_inner|))`` updates is over and the plan is
    finished, plan toward the inner algorithm's current matching.
    """

    def __init__(self, eps: float, live: Callable[[int, int], bool], c: int = RECOURSE_C):
        if not (0 < eps < 1 / 6):
            raise ValueError("eps must lie in (0, 1/6)")
        self.eps = eps
        self.live = live
        self.c = c
        self.steps_per_update = math.ceil(3 / eps)
        self.bound = math.ceil(c / eps)
        self.mate: dict[int, int] = {}
        self.plan: TransformPlan | None = None
        self.phase_left = 0
        self.max_recourse = 0
        self.ops = 0

    @property
    def size(self) -> int:
        return len(self.mate) // 2

    def matching(self) -> list[Edge]:
        return sorted((u, v) for u, v in self.mate.items() if u < v)

    def drop_dead(self, edges: Iterable[Edge]) -> list[tuple[str, int, int]]:
        out = []
        for u, v in edges:
            if self.mate.get(u) == v and not self.live(u, v):
                del self.mate[u]
                del self.mate[v]
                out.append((DELETE, *norm(u, v)))
        return out

    def advance(self, inner: Callable[[], list[Edge]], deleted: Iterable[Edge] = ()) -> list[tuple[str, int, int]]:
        """One update's worth of work; ``deleted`` lists host edges removed by the update."""
        changes = self.drop_dead(deleted)
        target = None
        if self.plan is None or (self.plan.done() and self.phase_left <= 0):
            target = inner()
            if len(target) <= 1:
                # single-edge regime: follow the inner matching directly
                changes += self._follow_small(target)
                self.plan = None
                self.phase_left = 0
                self._record(changes)
                return changes
            self.plan = plan_transform(self.matching(), target)
            self.ops += len(self.plan.steps) + len(target)
            self.phase_left = max(1, math.floor(self.eps * len(target)))
        plan = self.plan
        for _ in range(self.steps_per_update):
            if plan.done():
                break
            changes += apply_step(self.mate, plan.steps[plan.cursor], self.live)
            plan.cursor += 1
            self.ops += 1
        self.phase_left -= 1
        self._record(changes)
        return changes

    def _follow_small(self, target: list[Edge]) -> list[tuple[str, int, int]]:
        # any live output edge is already as good as a target of size <= 1
        if self.mate:
            return []
        for a, b in sorted(norm(*e) for e in target):
            if self.live(a, b):
                self.mate[a] = b
                self.mate[b] = a
                return [(INSERT, a, b)]
        return []

    def _record(self, changes) -> None:
        self.max_recourse = max(self.max_recourse, len(changes))
