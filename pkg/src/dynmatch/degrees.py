"""Approximate kernel degrees and the threshold subgraphs built on them.

``ApproxDegreeTable`` keeps, for every host edge (u, v), a counter held at u
that approximates the kernel degree of v. When the kernel degree of x
changes, x's private cursor walks ``q`` steps around its neighborhood and
resets the visited counters to the exact value, so a counter can drift by
at most ``alpha`` between refreshes.

``ThresholdSubgraphs`` classifies each host edge from its two counters. An
edge joins subgraph (family, i) when one endpoint looks heavy from the other
side and the other looks light. The lower bounds move down with ``i`` and the
upper bounds move up, so an edge belongs to a suffix ``i >= start`` of the
indices; only that start index is stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .graph import DELETE, INSERT, Ring, StarUpdate, norm

FAMILIES = ("H", "SH")


class ApproxDegreeTable:
    """Counters ``approx[(u, v)]`` = u's view of the kernel degree of v.

    ``max_degree`` fixes the refresh quota; when omitted the running maximum
    host degree is used, which only ever grows.
    """

    def __init__(self, n: int, alpha: float, kernel_degree: Callable[[int], int],
                 max_degree: int | None = None):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.n = n
        self.alpha = alpha
        self.kernel_degree = kernel_degree
        self.fixed_max = max_degree
        self.seen_max = 0
        self.rings = [Ring() for _ in range(n)]
        self.approx: dict[tuple[int, int], int] = {}
        self.ops = 0

    @property
    def max_degree(self) -> int:
        return max(self.fixed_max or 0, self.seen_max, 1)

    @property
    def quota(self) -> int:
        return max(1, math.ceil(self.max_degree / self.alpha))

    def add_edge(self, u: int, v: int) -> None:
        self.rings[u].insert_before_ptr(v)
        self.rings[v].insert_before_ptr(u)
        self.seen_max = max(self.seen_max, len(self.rings[u]), len(self.rings[v]))
        self.approx[(u, v)] = self.kernel_degree(v)
        self.approx[(v, u)] = self.kernel_degree(u)
        self.ops += 2

    def remove_edge(self, u: int, v: int) -> None:
        for a, b in ((u, v), (v, u)):
            ring = self.rings[a]
            # keep the successor unvisited: park the cursor on the predecessor
            if ring.ptr == b:
                ring.ptr = ring.prv[b]
            ring.remove(b)
        del self.approx[(u, v)]
        del self.approx[(v, u)]
        self.ops += 2

    def refresh(self, x: int) -> list[int]:
        """Kernel degree of ``x`` changed: walk its cursor, return the observers touched."""
        ring = self.rings[x]
        steps = min(self.quota, len(ring))
        dk = self.kernel_degree(x)
        touched = []
        for _ in range(steps):
            w = ring.advance()
            self.approx[(w, x)] = dk
            touched.append(w)
        self.ops += steps + 1
        return touched

    def error(self) -> int:
        """Largest counter deviation from the exact kernel degree."""
        worst = 0
        for (_, v), c in self.approx.items():
            worst = max(worst, abs(c - self.kernel_degree(v)))
        return worst


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class SubgraphView:
    family: str
    index: int
    edges: frozenset
    low: frozenset
    high: frozenset

    def side(self, v: int) -> str | None:
        if v in self.low:
            return "low"
        if v in self.high:
            return "high"
        return None


class ThresholdSubgraphs:
    """Edge sets E_H(i), E_SH(i) for i = 1..ceil(1/eps).

    (u, v) with u light and v heavy belongs to family H at index i when
    ``approx[(u, v)] >= d(1 - 2s - i eps^2)`` and
    ``approx[(v, u)] <= d(s + i eps^2)``; family SH uses ``1 - eps - i eps^2``
    as the heavy bound. Bounds are rounded to integers once: ceil for lower
    bounds, floor for upper bounds, which is exact because counters are
    integers.
    """

    def __init__(self, table: ApproxDegreeTable, eps, s, d: int):
        e, sf = _exact(eps), _exact(s)
        self.table = table
        self.eps, self.s, self.d = eps, s, d
        self.count = math.ceil(1 / e)
        self.light = [None] + [math.floor(d * (sf + i * e * e)) for i in range(1, self.count + 1)]
        self.heavy = {
            "H": [None] + [math.ceil(d * (1 - 2 * sf - i * e * e)) for i in range(1, self.count + 1)],
            "SH": [None] + [math.ceil(d * (1 - e - i * e * e)) for i in range(1, self.count + 1)],
        }
        self._validate(2 * table.alpha)
        # (light, heavy) -> start index per family; absent = in no subgraph
        self.start: dict[str, dict[tuple[int, int], int]] = {f: {} for f in FAMILIES}
        # per (family, i): how many member edges have v on the light / heavy side
        self.light_deg = {(f, i): {} for f in FAMILIES for i in range(1, self.count + 1)}
        self.heavy_deg = {(f, i): {} for f in FAMILIES for i in range(1, self.count + 1)}

    def _validate(self, slack: float) -> None:
        if 2 * _exact(self.s) < _exact(self.eps):
            raise ValueError("need eps <= 2s so that every SH edge is an H edge")
        for i in range(1, self.count + 1):
            gap = min(self.heavy["H"][i], self.heavy["SH"][i]) - self.light[i]
            # a node seen heavy by one neighbor and light by another would break
            # the bipartition; counters of one node differ by at most 2 alpha
            if gap <= slack:
                raise ValueError(
                    f"threshold gap {gap} at index {i} does not exceed counter spread {slack}")

    def _start_of(self, fam: str, a: int, b: int) -> int | None:
        # first index at which a (light) - b (heavy) qualifies, else None
        ab = self.table.approx[(a, b)]
        ba = self.table.approx[(b, a)]
        heavy, light = self.heavy[fam], self.light
        for i in range(1, self.count + 1):
            if ab >= heavy[i] and ba <= light[i]:
                return i
        return None

    def classify(self, u: int, v: int) -> dict[str, tuple[tuple[int, int], int] | None]:
        """Per family: ((light, heavy), start index) or None."""
        out = {}
        for fam in FAMILIES:
            res = None
            for a, b in ((u, v), (v, u)):
                i = self._start_of(fam, a, b)
                if i is not None:
                    res = ((a, b), i)
                    break
            out[fam] = res
        return out

    def membership(self, fam: str, i: int) -> set[tuple[int, int]]:
        return {norm(*k) for k, st in self.start[fam].items() if st <= i}

    def _set(self, fam: str, old: tuple | None, new: tuple | None, bucket: dict) -> None:
        """Move one edge from ``old`` to ``new`` membership and log the diff in ``bucket``."""
        old_range = set() if old is None else set(range(old[1], self.count + 1))
        new_range = set() if new is None else set(range(new[1], self.count + 1))
        if old is not None:
            del self.start[fam][old[0]]
        if new is not None:
            self.start[fam][new[0]] = new[1]
        for i in sorted(old_range - new_range):
            a, b = old[0]
            self._bump(fam, i, a, b, -1)
            bucket.setdefault((i, fam, DELETE), []).append((a, b))
        for i in sorted(new_range - old_range):
            a, b = new[0]
            self._bump(fam, i, a, b, +1)
            bucket.setdefault((i, fam, INSERT), []).append((a, b))
        # orientation flip at the same index without a range change cannot
        # happen under a valid parameter set
        for i in sorted(old_range & new_range):
            if old[0] != new[0]:
                raise AssertionError("edge switched sides inside a subgraph")

    def _bump(self, fam, i, a, b, delta):
        for tab, v in ((self.light_deg[(fam, i)], a), (self.heavy_deg[(fam, i)], b)):
            c = tab.get(v, 0) + delta
            if c:
                tab[v] = c
            else:
                tab.pop(v, None)

    def _current(self, fam, u, v):
        for key in ((u, v), (v, u)):
            st = self.start[fam].get(key)
            if st is not None:
                return (key, st)
        return None

    def _reclassify(self, u: int, v: int, bucket: dict, gone: bool = False) -> None:
        new = {f: None for f in FAMILIES} if gone else self.classify(u, v)
        for fam in FAMILIES:
            old = self._current(fam, u, v)
            if old != new[fam]:
                self._set(fam, old, new[fam], bucket)

    @staticmethod
    def _stars(bucket: dict, center: int) -> list[tuple[tuple[str, int], StarUpdate]]:
        out = []
        for (i, fam, kind) in sorted(bucket, key=lambda k: (k[0], FAMILIES.index(k[1]), k[2])):
            leaves = []
            for a, b in bucket[(i, fam, kind)]:
                leaves.append(b if a == center else a)
            out.append(((fam, i), StarUpdate(kind, center, tuple(sorted(leaves)))))
        return out

    # driving API

    def host_insert(self, u: int, v: int) -> list:
        self.table.add_edge(u, v)
        bucket: dict = {}
        self._reclassify(u, v, bucket)
        return self._stars(bucket, u)

    def host_delete(self, u: int, v: int) -> list:
        bucket: dict = {}
        self._reclassify(u, v, bucket, gone=True)
        self.table.remove_edge(u, v)
        return self._stars(bucket, u)

    def kernel_change(self, x: int, y: int) -> list:
        """A kernel edge (x, y) appeared or vanished; refresh both endpoints."""
        out = []
        for c in (x, y):
            bucket: dict = {}
            for w in self.table.refresh(c):
                self._reclassify(c, w, bucket)
            out += self._stars(bucket, c)
        return out

    def snapshot(self, fam: str, i: int) -> SubgraphView:
        if fam not in FAMILIES or not (1 <= i <= self.count):
            raise IndexError(f"no subgraph {fam}[{i}]")
        edges = []
        for (a, b), st in self.start[fam].items():
            if st <= i:
                edges.append(norm(a, b))
        return SubgraphView(fam, i, frozenset(edges),
                            frozenset(self.light_deg[(fam, i)]),
                            frozenset(self.heavy_deg[(fam, i)]))

    def recompute(self) -> dict[tuple[str, int], set[tuple[int, int]]]:
        """Membership from scratch on the current counters (shadow check)."""
        out = {(f, i): set() for f in FAMILIES for i in range(1, self.count + 1)}
        for (u, v) in self.table.approx:
            if u > v:
                continue
            hv, lu = self.table.approx[(u, v)], self.table.approx[(v, u)]
            for fam in FAMILIES:
                for i in range(1, self.count + 1):
                    for a_sees_b, b_sees_a in ((hv, lu), (lu, hv)):
                        if a_sees_b >= self.heavy[fam][i] and b_sees_a <= self.light[i]:
                            out[(fam, i)].add((u, v))
        return out


def snapshot_subgraph(ts: ThresholdSubgraphs, family: str, i: int) -> SubgraphView:
    return ts.snapshot(family, i)
