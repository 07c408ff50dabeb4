"""Deterministic update-stream generators.

Every generator tracks the evolving edge set so each emitted event is valid:
insertions never duplicate a live edge and deletions only hit live edges.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Callable, Iterator

from .graph import DELETE, INSERT, UpdateEvent, norm

KINDS = ("uniform-random", "sliding-window", "delete-matched-adversary", "gadget-family")


class _EdgeBag:
    """Live edge set with O(1) uniform sampling (swap-remove list)."""

    def __init__(self):
        self.items: list[tuple[int, int]] = []
        self.pos: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.items)

    def __contains__(self, e):
        return e in self.pos

    def add(self, e):
        self.pos[e] = len(self.items)
        self.items.append(e)

    def remove(self, e):
        i = self.pos.pop(e)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def sample(self, rng: random.Random):
        return self.items[rng.randrange(len(self.items))]


def _pick_new_edge(rng, n, bag, deg, max_degree, bipartite, tries=200):
    for _ in range(tries):
        if bipartite:
            half = n // 2
            u, v = rng.randrange(half), half + rng.randrange(n - half)
        else:
            u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = norm(u, v)
        if e in bag:
            continue
        if max_degree is not None and (deg[u] >= max_degree or deg[v] >= max_degree):
            continue
        return e
    return None


def uniform_random(n: int, events: int, seed: int, p_insert: float = 0.6,
                   max_degree: int | None = None, bipartite: bool = False,
                   target_edges: int | None = None) -> Iterator[UpdateEvent]:
    """Random insertions and deletions.

    With ``target_edges`` the insertion probability drops to 1/2 once the
    live edge count reaches the target, so the graph hovers around it.
    """
    if n < 2:
        return
    rng = random.Random(seed)
    bag = _EdgeBag()
    deg = [0] * n
    emitted = 0
    while emitted < events:
        p = p_insert
        if target_edges is not None and len(bag) >= target_edges:
            p = 0.5
        if len(bag) == 0 or rng.random() < p:
            e = _pick_new_edge(rng, n, bag, deg, max_degree, bipartite)
            if e is not None:
                bag.add(e)
                deg[e[0]] += 1
                deg[e[1]] += 1
                yield UpdateEvent(INSERT, *e)
                emitted += 1
                continue
            if len(bag) == 0:
                return
        e = bag.sample(rng)
        bag.remove(e)
        deg[e[0]] -= 1
        deg[e[1]] -= 1
        yield UpdateEvent(DELETE, *e)
        emitted += 1


def sliding_window(n: int, events: int, seed: int, window: int | None = None,
                   max_degree: int | None = None, bipartite: bool = False) -> Iterator[UpdateEvent]:
    """Insert random edges; once ``window`` edges are live, each insertion is
    preceded by deleting the oldest live edge."""
    if n < 2:
        return
    if window is None:
        window = max(1, 4 * n)
    rng = random.Random(seed)
    bag = _EdgeBag()
    deg = [0] * n
    fifo: deque[tuple[int, int]] = deque()
    emitted = 0
    while emitted < events:
        if len(bag) >= window:
            e = fifo.popleft()
            bag.remove(e)
            deg[e[0]] -= 1
            deg[e[1]] -= 1
            yield UpdateEvent(DELETE, *e)
            emitted += 1
            continue
        e = _pick_new_edge(rng, n, bag, deg, max_degree, bipartite)
        if e is None:
            if not fifo:
                return
            e = fifo.popleft()
            bag.remove(e)
            deg[e[0]] -= 1
            deg[e[1]] -= 1
            yield UpdateEvent(DELETE, *e)
        else:
            bag.add(e)
            fifo.append(e)
            deg[e[0]] += 1
            deg[e[1]] += 1
            yield UpdateEvent(INSERT, *e)
        emitted += 1


class MatchedEdgeAdversary:
    """Adaptive adversary: deletes an edge of the observed output matching.

    Call ``next_event(matching)`` with the algorithm's current output; with
    probability ``p_delete`` (and when possible) a matched edge is deleted,
    otherwise a random new edge is inserted.
    """

    def __init__(self, n: int, seed: int, p_delete: float = 0.4,
                 max_degree: int | None = None, bipartite: bool = False):
        self.n = n
        self.rng = random.Random(seed)
        self.p_delete = p_delete
        self.max_degree = max_degree
        self.bipartite = bipartite
        self.bag = _EdgeBag()
        self.deg = [0] * n

    def _delete(self, e) -> UpdateEvent:
        self.bag.remove(e)
        self.deg[e[0]] -= 1
        self.deg[e[1]] -= 1
        return UpdateEvent(DELETE, *e)

    def next_event(self, matching) -> UpdateEvent | None:
        rng = self.rng
        live = sorted(norm(*e) for e in matching if norm(*e) in self.bag)
        if live and rng.random() < self.p_delete:
            return self._delete(live[rng.randrange(len(live))])
        e = _pick_new_edge(rng, self.n, self.bag, self.deg, self.max_degree, self.bipartite)
        if e is None:
            if len(self.bag) == 0:
                return None
            return self._delete(self.bag.sample(rng))
        self.bag.add(e)
        self.deg[e[0]] += 1
        self.deg[e[1]] += 1
        return UpdateEvent(INSERT, *e)


def adversarial_stream(n: int, events: int, seed: int, output: Callable[[], list],
                       feed: Callable[[UpdateEvent], None], **kw) -> list[UpdateEvent]:
    """Run the adversary against a live algorithm; returns the events issued."""
    adv = MatchedEdgeAdversary(n, seed, **kw)
    out = []
    for _ in range(events):
        ev = adv.next_event(output())
        if ev is None:
            break
        feed(ev)
        out.append(ev)
    return out


def gadget_nodes(k: int) -> int:
    return 4 * k


def gadget_family(k: int, core_degree: int, seed: int = 0, churn: int = 0) -> list[UpdateEvent]:
    """``k`` disjoint length-3 paths ``a - b - c - d`` whose middle nodes are
    first wired into a ``core_degree``-regular circulant among themselves.

    Core edges arrive first so a bounded-degree kernel fills up on them and
    then rejects the pendant edges ``a-b`` and ``c-d``. The maximum matching
    uses every pendant edge (size ``2k``), while a matching inside the core
    reaches at most ``k``. ``churn`` extra delete/re-insert pairs of core
    edges are appended at the end.
    """
    if k < 1:
        return []
    rng = random.Random(seed)
    mids = []
    for i in range(k):
        mids += [4 * i + 1, 4 * i + 2]
    r = len(mids)
    core = set()
    half = min(core_degree, r - 1) // 2
    for j in range(r):
        for step in range(1, half + 1):
            core.add(norm(mids[j], mids[(j + step) % r]))
    if min(core_degree, r - 1) % 2 == 1 and r % 2 == 0:
        for j in range(r // 2):
            core.add(norm(mids[j], mids[j + r // 2]))
    core_list = sorted(core)
    rng.shuffle(core_list)
    evs = [UpdateEvent(INSERT, u, v) for u, v in core_list]
    for i in range(k):
        a, b, c, d = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        evs.append(UpdateEvent(INSERT, *norm(b, c)) if norm(b, c) not in core else None)
        evs.append(UpdateEvent(INSERT, a, b))
        evs.append(UpdateEvent(INSERT, c, d))
    evs = [e for e in evs if e is not None]
    for _ in range(churn):
        e = core_list[rng.randrange(len(core_list))]
        evs.append(UpdateEvent(DELETE, *e))
        evs.append(UpdateEvent(INSERT, *e))
    return evs
