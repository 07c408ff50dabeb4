"""Bounded-degree kernels of a dynamic graph.

A kernel with parameters ``(eps, d)`` is an edge subset ``E_K`` such that

* every node has kernel degree at most ``d``, and
* every graph edge outside ``E_K`` has an endpoint of kernel degree at least
  ``d * (1 - eps)``.

Two maintainers are provided. ``ScanKernel`` walks each endpoint's neighbor
ring for ``ceil(n / (eps * d))`` steps after losing a kernel edge.
``PoolKernel`` works over a low out-degree orientation and keeps, for every
node, a pool of in-neighbors that still have room, so repairs only touch
``O(sqrt(m) / (eps * d))`` out-neighbors.

Both emit at most three kernel edge changes per graph update and keep a
change log of ``(seq, sign, u, v)`` records.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .graph import DELETE, INSERT, DynamicGraph, UpdateEvent, norm
from .orientation import Orientation

MAX_CHANGES = 3


@dataclass(frozen=True)
class KernelParams:
    eps: float
    d: int

    def __post_init__(self):
        if not (0 < self.eps < 0.5):
            raise ValueError("eps must lie in (0, 1/2)")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError("d must be a positive integer")
        # tolerate float noise in 1/eps, e.g. eps=0.1 gives 10.000000000000002
        if self.d * self.eps < 1 - 1e-9:
            raise ValueError("d must be at least 1/eps")

    @property
    def low(self) -> float:
        """Kernel degree below which a node cannot excuse a missing edge."""
        return self.d * (1 - self.eps)


class KernelBase:
    """Shared kernel bookkeeping: edge set, degrees, change log, op counter."""

    def __init__(self, n: int, eps: float, d: int, *, check_params: bool = True):
        # pipelines with small graphs may ask for d below 1/eps; they opt out
        self.params = KernelParams(eps, d) if check_params else None
        self.eps = eps
        self.d = d
        self.g = DynamicGraph(n)
        self.n = n
        self.ek: set[tuple[int, int]] = set()
        self.dk = [0] * n
        self.log: list[tuple[int, str, int, int]] = []
        self.seq = 0
        self.ops = 0
        self.last_ops = 0
        self._pending: list[tuple[str, int, int]] = []

    # -- kernel edge primitives -------------------------------------------------
    def _add(self, u: int, v: int) -> None:
        e = norm(u, v)
        assert e not in self.ek
        self.ek.add(e)
        self.dk[u] += 1
        self.dk[v] += 1
        self._pending.append((INSERT, e[0], e[1]))
        self.ops += 1

    def _remove(self, u: int, v: int) -> None:
        e = norm(u, v)
        self.ek.remove(e)
        self.dk[u] -= 1
        self.dk[v] -= 1
        self._pending.append((DELETE, e[0], e[1]))
        self.ops += 1

    def _flush(self) -> list[tuple[str, int, int]]:
        out = self._pending
        self._pending = []
        self.seq += 1
        for sign, a, b in out:
            self.log.append((self.seq, sign, a, b))
        return out

    def in_kernel(self, u: int, v: int) -> bool:
        return norm(u, v) in self.ek

    def degree(self, v: int) -> int:
        return self.dk[v]

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.ek)

    def update(self, ev: UpdateEvent) -> list[tuple[str, int, int]]:
        if ev.kind == INSERT:
            return self.insert(ev.u, ev.v)
        return self.delete(ev.u, ev.v)

    def insert(self, u: int, v: int) -> list[tuple[str, int, int]]:
        raise NotImplementedError

    def delete(self, u: int, v: int) -> list[tuple[str, int, int]]:
        raise NotImplementedError

    def budget(self) -> int:
        raise NotImplementedError


class ScanKernel(KernelBase):
    """Ring-scanning maintainer with ``ceil(n / (eps * d))`` steps per endpoint."""

    def __init__(self, n: int, eps: float, d: int, **kw):
        super().__init__(n, eps, d, **kw)
        self.scan_budget = math.ceil(n / (eps * d) - 1e-9) if n else 0

    def budget(self) -> int:
        return self.scan_budget

    def insert(self, u: int, v: int) -> list[tuple[str, int, int]]:
        ops0 = self.g.ops + self.ops
        d = self.d
        self.g.insert_edge(u, v)
        if self.dk[u] < d and self.dk[v] < d:
            self._add(u, v)
        self.last_ops = self.g.ops + self.ops - ops0
        return self._flush()

    def delete(self, u: int, v: int) -> list[tuple[str, int, int]]:
        ops0 = self.g.ops + self.ops
        self.g.delete_edge(u, v)
        if norm(u, v) in self.ek:
            self._remove(u, v)
            for x in (u, v):
                self._scan(x)
        self.last_ops = self.g.ops + self.ops - ops0
        return self._flush()

    def _scan(self, v: int) -> None:
        # the endpoint lost a kernel edge so it has room; look for a partner
        # that also has room, resuming where the last scan stopped
        d = self.d
        if self.g.degree(v) == 0:
            return
        for _ in range(self.scan_budget):
            w = self.g.advance_cursor(v)
            self.ops += 1
            if self.dk[w] < d and norm(v, w) not in self.ek:
                self._add(v, w)
                return


class PoolKernel(KernelBase):
    """Orientation-based maintainer.

    Each node ``w`` sits in the pools of ``quota(w)`` of its out-neighbors,
    where the quota is ``min(#non-kernel out-edges, (d - d_K(w)) * B)``.
    ``B = ceil(cap / (eps * d))`` and ``cap`` is the orientation's current
    out-degree ceiling, so a node whose kernel degree falls below
    ``d * (1 - eps)`` is in the pool of every non-kernel out-neighbor. A node
    with a non-empty pool always has kernel degree exactly ``d``. Together these
    two facts give the second kernel property.

    Per node ``w`` the out-neighbors are split three ways: ``lin[w]`` (w is in
    their pool), ``lout[w]`` (non-kernel edge, w not pooled) and ``kout[w]``
    (kernel edges). Nodes whose quota could not be met inside the per-update
    change budget, or whose multiplier changed on an orientation rescale, wait
    in a repair queue that is worked off a few nodes per update.
    """

    REPAIR_NODES = 2

    def __init__(self, n: int, eps: float, d: int, m_hat: int = 1, **kw):
        super().__init__(n, eps, d, **kw)
        self.orient = Orientation(n, m_hat, auto_drain=False)
        self.pool: list[dict[int, None]] = [dict() for _ in range(n)]
        self.lin: list[dict[int, None]] = [dict() for _ in range(n)]
        self.lout: list[dict[int, None]] = [dict() for _ in range(n)]
        self.kout: list[dict[int, None]] = [dict() for _ in range(n)]
        self.repair: deque[int] = deque()
        self.in_repair: set[int] = set()
        self.flips = 0
        self._cap = self.orient.cap
        self.B = self._mult(self._cap)

    def _mult(self, cap: int) -> int:
        return max(1, math.ceil(cap / (self.eps * self.d) - 1e-9))

    def budget(self) -> int:
        return self.B

    def quota(self, w: int) -> int:
        return min(len(self.lin[w]) + len(self.lout[w]), (self.d - self.dk[w]) * self.B)

    # -- pool primitives ----------------------------------------------------------
    def _pool_add(self, w: int, v: int) -> None:
        del self.lout[w][v]
        self.lin[w][v] = None
        self.pool[v][w] = None
        self.ops += 1

    def _pool_drop(self, w: int, v: int) -> None:
        del self.lin[w][v]
        del self.pool[v][w]
        self.lout[w][v] = None
        self.ops += 1

    def _detach(self, t: int, h: int) -> bool:
        """Forget the out-edge t->h from t's lists; returns True if it was a kernel edge."""
        if h in self.kout[t]:
            del self.kout[t][h]
            return True
        if h in self.lin[t]:
            del self.lin[t][h]
            del self.pool[h][t]
        else:
            del self.lout[t][h]
        self.ops += 1
        return False

    def _can_change(self) -> bool:
        return len(self._pending) < MAX_CHANGES

    def _enqueue(self, w: int) -> None:
        if w not in self.in_repair:
            self.in_repair.add(w)
            self.repair.append(w)

    def _fix(self, w: int, limit: int | None = None) -> bool:
        """Bring w's pool membership count to its quota; True when it got there."""
        if limit is None:
            limit = 2 * self.B + 2
        lin = self.lin[w]
        while len(lin) > self.quota(w):
            # drop the most recent membership first
            v = next(reversed(lin))
            self._pool_drop(w, v)
        tries = 0
        while len(lin) < self.quota(w):
            lout = self.lout[w]
            if tries >= limit or tries >= len(lout) + 1:
                self._enqueue(w)
                return False
            tries += 1
            z = next(iter(lout))
            self.ops += 1
            if self.dk[z] >= self.d:
                self._pool_add(w, z)
            elif self.dk[w] < self.d and self._can_change():
                del lout[z]
                self.kout[w][z] = None
                self._add(w, z)
                self._fix_down(z)
                # the quota just fell, maybe below the current membership
                while len(lin) > self.quota(w):
                    self._pool_drop(w, next(reversed(lin)))
            else:
                # rotate to the back and try the next one
                del lout[z]
                lout[z] = None
        return True

    def _fix_down(self, w: int) -> None:
        # kernel degree went up: only memberships need dropping
        lin = self.lin[w]
        while len(lin) > self.quota(w):
            self._pool_drop(w, next(reversed(lin)))

    def _take_from_pool(self, v: int) -> bool:
        pv = self.pool[v]
        if not pv or self.dk[v] >= self.d:
            return False
        w = next(iter(pv))
        del pv[w]
        del self.lin[w][v]
        self.kout[w][v] = None
        self._add(v, w)
        self._fix_down(w)
        return True

    # -- orientation plumbing ---------------------------------------------------------
    def _attach(self, t: int, h: int, kernel: bool) -> None:
        if kernel:
            self.kout[t][h] = None
        else:
            self.lout[t][h] = None

    def _apply_flip(self, a: int, b: int) -> None:
        """Edge b->a now points a->b."""
        self.flips += 1
        was_kernel = self._detach(b, a)
        self._attach(a, b, was_kernel)
        if not was_kernel:
            self._fix(b, limit=2)
            self._fix(a, limit=2)

    def _after(self, flips: list[tuple[int, int]]) -> None:
        for a, b in flips:
            self._apply_flip(a, b)
        drain_budget = math.ceil(math.sqrt(2 * self.orient.m_hat) / (self.eps * self.d))
        for a, b in self.orient.drain(drain_budget):
            self._apply_flip(a, b)
        cap = self.orient.cap
        if cap != self._cap:
            self._cap = cap
            newB = self._mult(cap)
            if newB != self.B:
                self.B = newB
                for w in range(self.n):
                    if self.lin[w] or self.lout[w]:
                        self._enqueue(w)
        for _ in range(self.REPAIR_NODES):
            if not self.repair:
                break
            w = self.repair.popleft()
            self.in_repair.discard(w)
            self._fix(w)

    # -- updates ----------------------------------------------------------------------------
    def insert(self, u: int, v: int) -> list[tuple[str, int, int]]:
        ops0 = self.g.ops + self.ops
        d = self.d
        self.g.insert_edge(u, v)
        flips = self.orient.orient_insert(u, v)
        t = self.orient.tail(u, v)
        h = v if t == u else u
        if self.dk[u] < d and self.dk[v] < d:
            self._attach(t, h, True)
            self._add(u, v)
            self._fix_down(u)
            self._fix_down(v)
        else:
            self._attach(t, h, False)
            if self.dk[h] >= d and len(self.lin[t]) < self.quota(t):
                self._pool_add(t, h)
            else:
                self._fix(t)
        self._after(flips)
        self.last_ops = self.g.ops + self.ops - ops0
        return self._flush()

    def delete(self, u: int, v: int) -> list[tuple[str, int, int]]:
        ops0 = self.g.ops + self.ops
        self.g.delete_edge(u, v)
        t = self.orient.tail(u, v)
        h = v if t == u else u
        flips = self.orient.orient_delete(u, v)
        was_kernel = self._detach(t, h)
        if was_kernel:
            self._remove(u, v)
            for x in (u, v):
                if not self._take_from_pool(x):
                    self._fix(x)
        else:
            self._fix(t)
        self._after(flips)
        self.last_ops = self.g.ops + self.ops - ops0
        return self._flush()


@dataclass
class KernelReport:
    ok: bool
    over_degree: list = field(default_factory=list)
    unsatisfied: list = field(default_factory=list)
    stray: list = field(default_factory=list)
    degree_mismatch: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_kernel(k: KernelBase, g: DynamicGraph | None = None) -> KernelReport:
    """Full O(m) verification of both kernel properties and ``E_K`` inside ``E``."""
    g = g if g is not None else k.g
    d, low = k.d, k.d * (1 - k.eps)
    deg = [0] * g.n
    stray = []
    for a, b in k.ek:
        if not g.has_edge(a, b):
            stray.append((a, b))
        deg[a] += 1
        deg[b] += 1
    mismatch = [v for v in range(g.n) if deg[v] != k.dk[v]]
    over = [v for v in range(g.n) if deg[v] > d]
    unsat = [
        (a, b) for a, b in g.edges()
        if (a, b) not in k.ek and max(deg[a], deg[b]) < low - 1e-9
    ]
    ok = not (stray or mismatch or over or unsat)
    return KernelReport(ok, over, unsat, stray, mismatch)


def check_pools(k: PoolKernel) -> list[str]:
    """Return a list of broken pool invariants (empty when all hold)."""
    errs = []
    o = k.orient
    for w in range(k.n):
        outs = set(o.out[w])
        lin, lout, kout = set(k.lin[w]), set(k.lout[w]), set(k.kout[w])
        if lin | lout | kout != outs or len(lin) + len(lout) + len(kout) != len(outs):
            errs.append(f"out-lists of {w} do not partition its out-neighbors")
        for h in kout:
            if norm(w, h) not in k.ek:
                errs.append(f"{w}->{h} filed as kernel but is not")
        for h in lin | lout:
            if norm(w, h) in k.ek:
                errs.append(f"{w}->{h} filed as non-kernel but is in the kernel")
        for h in lin:
            if w not in k.pool[h]:
                errs.append(f"{w} listed in pool of {h} but absent")
        if w not in k.in_repair and len(lin) != k.quota(w):
            errs.append(f"{w} sits in {len(lin)} pools, quota {k.quota(w)}")
        if k.pool[w]:
            if k.dk[w] != k.d:
                errs.append(f"{w} has a non-empty pool below full degree")
            for x in k.pool[w]:
                if k.dk[x] >= k.d:
                    errs.append(f"full node {x} in pool of {w}")
                if w not in k.lin[x]:
                    errs.append(f"pool of {w} holds {x} without back-reference")
    return errs


def make_kernel(variant: str, n: int, eps: float, d: int, **kw) -> KernelBase:
    if variant == "scan":
        return ScanKernel(n, eps, d, **kw)
    if variant == "pool":
        return PoolKernel(n, eps, d, **kw)
    raise ValueError(f"unknown kernel variant {variant!r}")


def static_kernel(n: int, edges, eps: float, d: int, check_params: bool = True) -> KernelBase:
    """Kernel of a fixed graph: insert every edge once, never delete."""
    k = ScanKernel(n, eps, d, check_params=check_params)
    for u, v in edges:
        k.insert(u, v)
    return k
