"""Low out-degree edge orientation.

New edges point away from the endpoint with fewer out-edges. A node whose
out-degree passes ``2 * ceil(sqrt(2 * m_hat))`` hands one out-edge to its
least loaded head. When the edge count leaves ``[m_hat/2, 2*m_hat]`` the scale
is reset and overloaded nodes are drained a few flips per update.
"""

from __future__ import annotations

import math
from collections import deque


class OrientationError(KeyError):
    pass


class Orientation:
    C = 3

    def __init__(self, n: int, m_hat: int = 1, auto_drain: bool = True):
        self.n = n
        self.auto_drain = auto_drain
        self.out: list[dict[int, None]] = [dict() for _ in range(n)]
        self.m = 0
        self.m_hat = max(1, m_hat)
        self.threshold = self._threshold(self.m_hat)
        self.total_flips = 0
        self.rebuilds = 0
        self.ops = 0
        self._drain: deque[int] = deque()
        self._drain_cap = 0

    @staticmethod
    def _threshold(m_hat: int) -> int:
        return 2 * math.ceil(math.sqrt(2 * m_hat))

    def out_degree(self, v: int) -> int:
        return len(self.out[v])

    def out_neighbors(self, v: int):
        return iter(self.out[v])

    def tail(self, u: int, v: int) -> int:
        if v in self.out[u]:
            return u
        if u in self.out[v]:
            return v
        raise OrientationError((u, v))

    def has(self, u: int, v: int) -> bool:
        return v in self.out[u] or u in self.out[v]

    def max_out_degree(self) -> int:
        return max((len(o) for o in self.out), default=0)

    def _flip_from(self, v: int) -> tuple[int, int]:
        # the least loaded head always sits below the threshold: otherwise
        # the out-degree sum would exceed the edge count
        best = None
        bd = None
        for w in self.out[v]:
            self.ops += 1
            dw = len(self.out[w])
            if bd is None or dw < bd or (dw == bd and w < best):
                best, bd = w, dw
        del self.out[v][best]
        self.out[best][v] = None
        self.total_flips += 1
        return (best, v)

    def _rescale(self) -> None:
        if self.m_hat / 2 <= self.m <= 2 * self.m_hat:
            return
        new = max(1, self.m)
        if new == self.m_hat:
            return
        old = self.cap
        self.m_hat = new
        self.threshold = self._threshold(new)
        self._drain_cap = old
        self.rebuilds += 1
        self._drain = deque(v for v in range(self.n) if len(self.out[v]) > self.threshold)

    @property
    def cap(self) -> int:
        """Largest out-degree the orientation currently allows."""
        if self._drain:
            return max(self.threshold, self._drain_cap)
        return self.threshold

    @property
    def draining(self) -> bool:
        return bool(self._drain)

    def _work(self) -> list[tuple[int, int]]:
        if not self.auto_drain:
            return []
        return self.drain(math.ceil(math.sqrt(2 * self.m_hat)))

    def drain(self, budget: int) -> list[tuple[int, int]]:
        """Spend up to ``budget`` flips on nodes left over the threshold by a rescale."""
        flips = []
        while self._drain and budget > 0:
            v = self._drain[0]
            if len(self.out[v]) <= self.threshold:
                self._drain.popleft()
                continue
            flips.append(self._flip_from(v))
            budget -= 1
        return flips

    def orient_insert(self, u: int, v: int) -> list[tuple[int, int]]:
        """Orient a new edge; returns flips as (new_tail, new_head) pairs."""
        if u == v or self.has(u, v):
            raise OrientationError((u, v))
        du, dv = len(self.out[u]), len(self.out[v])
        if du < dv or (du == dv and u < v):
            t, h = u, v
        else:
            t, h = v, u
        self.out[t][h] = None
        self.m += 1
        self.ops += 1
        self._rescale()
        flips = []
        if len(self.out[t]) > self.threshold:
            flips.append(self._flip_from(t))
        flips.extend(self._work())
        return flips

    def orient_delete(self, u: int, v: int) -> list[tuple[int, int]]:
        t = self.tail(u, v)
        h = v if t == u else u
        del self.out[t][h]
        self.m -= 1
        self.ops += 1
        self._rescale()
        return self._work()

    def bound(self) -> float:
        return self.C * math.sqrt(2 * self.m) + 2
