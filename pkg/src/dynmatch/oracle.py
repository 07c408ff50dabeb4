"""Exact matching oracles used to check the approximate structures.

``exhaustive_*`` enumerate over node subsets and are only meant for tiny
graphs. ``BlossomOracle`` keeps a maximum matching of a dynamic graph exact
with one alternating-forest search per update: an update changes the maximum
matching size by at most one, so a single augmenting path is all that is
ever missing.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable

from .graph import norm


def _adj(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    return adj


def exhaustive_matching(n: int, edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Maximum matching by memoized search over subsets of free nodes (n <= ~22)."""
    adj = [0] * n
    for u, v in edges:
        if u != v:
            adj[u] |= 1 << v
            adj[v] |= 1 << u

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, int]:
        # returns (size, chosen partner bit index + 1 or 0) for lowest node
        if mask == 0:
            return (0, 0)
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        top = (best(rest)[0], 0)
        cand = adj[low] & rest
        while cand:
            b = cand & -cand
            j = b.bit_length() - 1
            s = 1 + best(rest & ~b)[0]
            if s > top[0]:
                top = (s, j + 1)
            cand ^= b
        return top

    out = []
    mask = (1 << n) - 1
    while mask:
        low = (mask & -mask).bit_length() - 1
        _, pick = best(mask)
        mask &= ~(1 << low)
        if pick:
            out.append(norm(low, pick - 1))
            mask &= ~(1 << (pick - 1))
    return out


def exhaustive_mu(n: int, edges: Iterable[tuple[int, int]]) -> int:
    return len(exhaustive_matching(n, edges))


def exhaustive_mwm(n: int, wedges: Iterable[tuple[int, int, float]]) -> float:
    """Maximum weight matching value by subset search; duplicate pairs keep the heavier weight."""
    w: dict[tuple[int, int], float] = {}
    for u, v, x in wedges:
        if u != v:
            e = norm(u, v)
            w[e] = max(w.get(e, 0), x)
    nbr: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (u, v), x in w.items():
        nbr[u].append((v, x))
        nbr[v].append((u, x))

    @lru_cache(maxsize=None)
    def best(mask: int) -> float:
        if mask == 0:
            return 0
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        top = best(rest)
        for j, x in nbr[low]:
            if rest >> j & 1:
                top = max(top, x + best(rest & ~(1 << j)))
        return top

    return best((1 << n) - 1)


def is_matching(edges: Iterable[tuple[int, int]], present=None) -> bool:
    seen = set()
    for u, v in edges:
        if u == v or u in seen or v in seen:
            return False
        if present is not None and not present(u, v):
            return False
        seen.add(u)
        seen.add(v)
    return True


EVEN, ODD = 1, 2


def augment_once(adj, mate: list[int]) -> bool:
    """One alternating-forest search from every free node.

    ``adj`` maps a node to an iterable of neighbors. On success the matching
    in ``mate`` grows by one and True is returned; False certifies that
    ``mate`` is maximum.
    """
    n = len(mate)
    label = [0] * n
    parent = [-1] * n
    base = list(range(n))
    root = [-1] * n
    q = deque()
    for v in range(n):
        if mate[v] == -1:
            label[v] = EVEN
            root[v] = v
            q.append(v)

    def lca(a: int, b: int) -> int:
        seen = set()
        while True:
            a = base[a]
            seen.add(a)
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if b in seen:
                return b
            b = parent[mate[b]]

    def mark(v: int, b: int, child: int, inb: set) -> None:
        while base[v] != b:
            inb.add(base[v])
            inb.add(base[mate[v]])
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def flip_to_root(x: int) -> None:
        # x is the odd-side end of a tree path; rematch back to the root
        while x != -1:
            px = parent[x]
            nx = mate[px]
            mate[x] = px
            mate[px] = x
            x = nx

    while q:
        v = q.popleft()
        for w in adj[v]:
            if base[v] == base[w] or mate[v] == w:
                continue
            if label[w] == 0:
                # w is matched (free nodes are all labelled roots)
                label[w] = ODD
                parent[w] = v
                root[w] = root[v]
                x = mate[w]
                label[x] = EVEN
                root[x] = root[v]
                q.append(x)
            elif label[w] == EVEN:
                if root[w] != root[v]:
                    # two different trees meet: augment through (v, w)
                    a, b = mate[v], mate[w]
                    if a != -1:
                        flip_to_root(a)
                    if b != -1:
                        flip_to_root(b)
                    mate[v] = w
                    mate[w] = v
                    return True
                b = lca(v, w)
                inb: set[int] = set()
                mark(v, b, w, inb)
                mark(w, b, v, inb)
                for i in range(n):
                    if base[i] in inb:
                        base[i] = b
                        if label[i] != EVEN:
                            label[i] = EVEN
                            root[i] = root[b]
                            q.append(i)
    return False


def max_matching(n: int, edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    adj = _adj(n, edges)
    mate = [-1] * n
    for u in range(n):
        if mate[u] == -1:
            for v in adj[u]:
                if mate[v] == -1:
                    mate[u], mate[v] = v, u
                    break
    while augment_once(adj, mate):
        pass
    return [(u, mate[u]) for u in range(n) if mate[u] > u]


def max_matching_size(n: int, edges: Iterable[tuple[int, int]]) -> int:
    return len(max_matching(n, edges))


class BlossomOracle:
    """Exact maximum matching size of a dynamic graph."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.mate = [-1] * n
        self.size = 0

    @property
    def mu(self) -> int:
        return self.size

    def insert(self, u: int, v: int) -> None:
        self.adj[u].add(v)
        self.adj[v].add(u)
        if self.mate[u] == -1 and self.mate[v] == -1:
            self.mate[u], self.mate[v] = v, u
            self.size += 1
        elif augment_once(self.adj, self.mate):
            self.size += 1

    def delete(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        if self.mate[u] == v:
            self.mate[u] = self.mate[v] = -1
            self.size -= 1
            if augment_once(self.adj, self.mate):
                self.size += 1

    def update(self, kind: str, u: int, v: int) -> None:
        if kind == "+":
            self.insert(u, v)
        else:
            self.delete(u, v)

    def matching(self) -> list[tuple[int, int]]:
        return [(u, self.mate[u]) for u in range(self.n) if self.mate[u] > u]
