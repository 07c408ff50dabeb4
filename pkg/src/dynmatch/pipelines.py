"""End-to-end dynamic matching pipelines.

``two_plus_eps``: kernel -> bounded-degree matcher on the kernel.

``beat_two``: kernel -> approximate degrees -> threshold subgraphs -> one
recourse-limited bipartite matcher per subgraph -> A = union of their
outputs -> bounded-degree matcher on AK = kernel edges + A.

Both can run on a degree-sparsified copy of the input. The kernel degree ``d``
depends on the edge-count scale ``m_hat``; when the edge count leaves
``[m_hat/2, 2 m_hat]`` a fresh chain for the new scale is built in the
background over the next ``m_hat`` updates while the old one keeps serving
output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Iterable

from .bipartite import BipartiteMatcher
from .degrees import ApproxDegreeTable, ThresholdSubgraphs
from .graph import DELETE, INSERT, UpdateEvent, norm
from .kernel import make_kernel
from .recourse import RECOURSE_C
from .reductions import Sparsifier
from .stability import StabilityMatcher

# constants of the asymptotic analysis; far too small to run at desk scale
ASYMPTOTIC_EPS = 2e-8
ASYMPTOTIC_DELTA = 2e-6
ASYMPTOTIC_S = 2e-4

DESK = {"eps": 0.05, "s": 0.2, "delta": 0.02}

VARIANTS = ("two_plus_eps", "beat_two")

# star updates one subgraph can receive per sparse-graph event:
# the edge itself plus two endpoint refreshes for each of <= 3 kernel changes
STARS_PER_EVENT = 7


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    variant: str = "beat_two"
    eps: float = DESK["eps"]
    delta: float = DESK["delta"]
    s: float = DESK["s"]
    d: int | None = None  # None = derived from m_hat
    sparsify: bool = False
    kernel: str = "pool"

    def validate(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.kernel not in ("scan", "pool"):
            raise ConfigError(f"unknown kernel {self.kernel!r}")
        if not (0 < self.eps < 1 / 6):
            raise ConfigError("eps must lie in (0, 1/6)")
        if self.variant == "beat_two":
            if not (self.eps < self.s < 1):
                raise ConfigError("need eps < s < 1")
            if not (0 < self.delta < self.s):
                raise ConfigError("need 0 < delta < s")
        if self.d is not None and self.d < 1 / self.eps - 1e-9:
            raise ConfigError("need d >= 1/eps")

    def degree_for(self, m_hat: int) -> int:
        """Kernel degree for edge scale ``m_hat``, never below ``ceil(1/eps)``."""
        if self.d is not None:
            return self.d
        m_hat = max(1, m_hat)
        if self.variant == "two_plus_eps":
            raw = math.ceil(m_hat ** 0.25 / math.sqrt(self.eps) - 1e-9)
        else:
            raw = math.ceil(m_hat ** 0.375 - 1e-9)
        return max(raw, math.ceil(1 / self.eps - 1e-9))

    @property
    def subgraph_count(self) -> int:
        return math.ceil(1 / self.eps - 1e-9)

    @property
    def out_eps(self) -> float:
        return self.delta / 8 if self.variant == "beat_two" else self.eps

    def ak_degree_bound(self, d: int) -> int:
        if self.variant == "two_plus_eps":
            return d
        return d + 4 * self.subgraph_count

    @property
    def guarantee(self) -> Fraction:
        """Exact factor g with ``g * |output| >= mu(G)`` promised at every step."""
        e = Fraction(str(self.eps))
        if self.variant == "two_plus_eps":
            g = (1 + e) * (2 + e)
        else:
            g = (2 + 8 * e) * (1 + Fraction(str(self.delta)) / 8) * (1 + e)
        return g * (1 + e) if self.sparsify else g

    def ak_change_bound(self) -> int:
        """Most AK edge changes one input update can cause."""
        per = 3
        if self.variant == "beat_two":
            rec = math.ceil(RECOURSE_C / self.eps)
            per += 2 * self.subgraph_count * STARS_PER_EVENT * rec
        return per * (Sparsifier.MAX_EVENTS if self.sparsify else 1)


def _parse_bool(v: str) -> bool:
    if v in ("on", "true", "1", "yes"):
        return True
    if v in ("off", "false", "0", "no"):
        return False
    raise ConfigError(f"expected on/off, got {v!r}")


def parse_config(text: str) -> PipelineConfig:
    """``key=value`` lines; keys eps, delta, s, d (auto or int), variant,
    sparsify (on/off), kernel (scan/pool). ``#`` starts a comment."""
    kw = {}
    known = {f.name for f in fields(PipelineConfig)}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {no}: expected key=value")
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {no}: unknown key {key!r}")
        try:
            if key in ("eps", "delta", "s"):
                kw[key] = float(val)
            elif key == "d":
                kw[key] = None if val == "auto" else int(val)
            elif key == "sparsify":
                kw[key] = _parse_bool(val)
            else:
                kw[key] = val
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {no}: bad value for {key}: {val!r}") from None
    cfg = PipelineConfig(**kw)
    cfg.validate()
    return cfg


def load_config(path: str) -> PipelineConfig:
    with open(path) as fh:
        return parse_config(fh.read())


@dataclass
class StepMetrics:
    kernel_ops: int = 0
    kernel_changes: int = 0
    sparse_events: int = 0
    degree_ops: int = 0
    star_updates: int = 0
    matcher_ops: int = 0
    a_changes: int = 0
    ak_changes: int = 0
    out_ops: int = 0
    recourse: int = 0
    output_size: int = 0
    rebuilding: int = 0
    switched: int = 0

    def add(self, other: "StepMetrics") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))


class Chain:
    """One pipeline instance for a fixed kernel degree."""

    def __init__(self, n: int, cfg: PipelineConfig, m_hat: int, augment: bool = True):
        self.n = n
        self.cfg = cfg
        self.m_hat = max(1, m_hat)
        self.d = cfg.degree_for(self.m_hat)
        self.augment = augment and cfg.variant == "beat_two"
        self.sparsifier = Sparsifier(n, cfg.eps, self.m_hat) if cfg.sparsify else None
        kw = {"m_hat": self.m_hat} if cfg.kernel == "pool" else {}
        # d >= 1/eps is enforced by degree_for
        self.kernel = make_kernel(cfg.kernel, n, cfg.eps, self.d, **kw)
        self.ak_bound = cfg.ak_degree_bound(self.d)
        self.out = StabilityMatcher(n, cfg.out_eps, self.ak_bound)
        self.a_count: dict[tuple[int, int], int] = {}
        self.ak: set[tuple[int, int]] = set()
        self.table = self.subgraphs = None
        self.matchers: dict[tuple[str, int], BipartiteMatcher] = {}
        if self.augment:
            alpha = cfg.eps ** 2 * self.d
            self.table = ApproxDegreeTable(n, alpha, self.kernel.degree)
            self.subgraphs = ThresholdSubgraphs(self.table, cfg.eps, cfg.s, self.d)
            for i in range(1, self.subgraphs.count + 1):
                for fam in ("SH", "H"):
                    self.matchers[(fam, i)] = BipartiteMatcher(n, cfg.eps)

    def matching(self) -> list[tuple[int, int]]:
        return self.out.matching()

    def kernel_edges(self) -> list[tuple[int, int]]:
        return self.kernel.edges()

    def a_edges(self) -> list[tuple[int, int]]:
        return sorted(self.a_count)

    def ak_edges(self) -> list[tuple[int, int]]:
        return sorted(self.ak)

    def ak_max_degree(self) -> int:
        deg: dict[int, int] = {}
        for u, v in self.ak:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return max(deg.values(), default=0)

    def _ak_touch(self, e, a_delta: int, touched: dict) -> None:
        """Recompute AK membership of ``e``; ``touched`` keeps its state before this update."""
        touched.setdefault(e, e in self.ak)
        if a_delta:
            c = self.a_count.get(e, 0) + a_delta
            if c:
                self.a_count[e] = c
            else:
                del self.a_count[e]
        if self.kernel.in_kernel(*e) or e in self.a_count:
            self.ak.add(e)
        else:
            self.ak.discard(e)

    def _sparse_event(self, ev: UpdateEvent, m: StepMetrics, touched: dict) -> None:
        k0 = self.kernel.ops
        kch = self.kernel.update(ev)
        m.kernel_ops += self.kernel.ops - k0
        m.kernel_changes += len(kch)
        for sign, x, y in kch:
            self._ak_touch(norm(x, y), 0, touched)
        if not self.augment:
            return
        t0 = self.table.ops
        stars = []
        if ev.kind == INSERT:
            stars += self.subgraphs.host_insert(ev.u, ev.v)
        for sign, x, y in kch:
            stars += self.subgraphs.kernel_change(x, y)
        if ev.kind == DELETE:
            stars += self.subgraphs.host_delete(ev.u, ev.v)
        m.degree_ops += self.table.ops - t0
        m.star_updates += len(stars)
        # deterministic order: ascending index, SH before H
        order = {f: j for j, f in enumerate(("SH", "H"))}
        stars.sort(key=lambda ks: (ks[0][1], order[ks[0][0]]))
        for key, st in stars:
            view_side = self.subgraphs.light_deg[key]
            c = st.center
            side = "low" if c in view_side else "high" if c in self.subgraphs.heavy_deg[key] else None
            if side is None:
                # deletion that emptied the center's membership: infer from a leaf
                leaf = st.leaves[0]
                side = "high" if leaf in view_side else "low" if leaf in self.subgraphs.heavy_deg[key] else None
            bm = self.matchers[key]
            i0 = bm.inner.ops
            for sign, a, b in bm.apply_star_update(st, side):
                m.a_changes += 1
                self._ak_touch(norm(a, b), 1 if sign == INSERT else -1, touched)
            m.matcher_ops += bm.inner.ops - i0

    def update(self, ev: UpdateEvent) -> tuple[list, StepMetrics]:
        m = StepMetrics()
        events = self.sparsifier.update(ev) if self.sparsifier else [ev]
        m.sparse_events = len(events)
        touched: dict[tuple[int, int], bool] = {}
        for e in events:
            self._sparse_event(e, m, touched)
        ak_changes = [(INSERT if e in self.ak else DELETE, *e)
                      for e, was in sorted(touched.items()) if was != (e in self.ak)]
        m.ak_changes = len(ak_changes)
        o0 = self.out.ops
        out = self.out.batch(ak_changes)
        m.out_ops = self.out.ops - o0
        m.recourse = len(out)
        m.output_size = self.out.size
        return out, m


class Pipeline:
    """Dynamic matching of a graph on nodes ``0..n-1``."""

    def __init__(self, n: int, cfg: PipelineConfig | None = None, augment: bool = True):
        cfg = cfg or PipelineConfig()
        cfg.validate()
        self.n = n
        self.cfg = cfg
        self.augment = augment
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.m = 0
        self.m_hat = 1
        self.chain = Chain(n, cfg, self.m_hat, augment)
        self.next: Chain | None = None
        self.backlog: dict[tuple[int, int], None] = {}
        self.window_left = 0
        self.load_rate = 0
        self.rebuilds = 0
        self.updates = 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    def output_matching(self) -> list[tuple[int, int]]:
        return self.chain.matching()

    @property
    def d(self) -> int:
        return self.chain.d

    def _needs_rescale(self) -> bool:
        return self.m > 2 * self.m_hat or 2 * self.m < self.m_hat

    def _begin_rescale(self) -> None:
        new_hat = max(1, self.m)
        same_d = self.cfg.degree_for(new_hat) == self.chain.d
        same_cap = (not self.cfg.sparsify or
                    math.ceil(math.sqrt(new_hat) / self.cfg.eps) == self.chain.sparsifier.cap)
        self.m_hat = new_hat
        if same_d and same_cap:
            return
        self.rebuilds += 1
        self.next = Chain(self.n, self.cfg, new_hat, self.augment)
        self.backlog = dict.fromkeys(self.edges())
        self.window_left = new_hat
        self.load_rate = math.ceil(len(self.backlog) / self.window_left) + 1

    def _feed_next(self, ev: UpdateEvent, metrics: StepMetrics) -> None:
        e = ev.edge
        if ev.kind == DELETE and e in self.backlog:
            del self.backlog[e]
        else:
            _, m = self.next.update(ev)
            metrics.add(m)
        for _ in range(self.load_rate):
            if not self.backlog:
                break
            f = next(iter(self.backlog))
            del self.backlog[f]
            _, m = self.next.update(UpdateEvent(INSERT, *f))
            metrics.add(m)
        self.window_left -= 1

    def update(self, ev: UpdateEvent) -> tuple[list, StepMetrics]:
        u, v = ev.u, ev.v
        if ev.kind == INSERT:
            if u == v or v in self.adj[u]:
                raise ValueError(f"cannot insert ({u}, {v})")
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.m += 1
        else:
            if v not in self.adj[u]:
                raise ValueError(f"cannot delete missing edge ({u}, {v})")
            self.adj[u].discard(v)
            self.adj[v].discard(u)
            self.m -= 1
        self.updates += 1
        out, metrics = self.chain.update(ev)
        if self.next is not None:
            side = StepMetrics()
            self._feed_next(ev, side)
            metrics.kernel_ops += side.kernel_ops
            metrics.rebuilding = 1
            if self.window_left <= 0 and not self.backlog:
                # output before this update was the old chain's; diff against it
                before = set(self.chain.matching())
                for sign, a, b in out:
                    if sign == INSERT:
                        before.discard((a, b))
                    else:
                        before.add((a, b))
                self.chain, self.next = self.next, None
                new = set(self.chain.matching())
                out = ([(DELETE, *e) for e in sorted(before - new)] +
                       [(INSERT, *e) for e in sorted(new - before)])
                metrics.switched = 1
        elif self._needs_rescale():
            self._begin_rescale()
        metrics.recourse = len(out)
        metrics.output_size = self.chain.out.size
        return out, metrics

    def run(self, events: Iterable[UpdateEvent]):
        for ev in events:
            yield self.update(ev)


def two_plus_eps_update(p: Pipeline, ev: UpdateEvent):
    return p.update(ev)


def beat_two_update(p: Pipeline, ev: UpdateEvent):
    return p.update(ev)


def output_matching(p: Pipeline) -> list[tuple[int, int]]:
    return p.output_matching()


def make_pipeline(n: int, cfg: PipelineConfig | None = None, **overrides) -> Pipeline:
    cfg = cfg or PipelineConfig()
    if overrides:
        cfg = replace(cfg, **overrides)
    return Pipeline(n, cfg)


def kernel_only(n: int, cfg: PipelineConfig) -> Pipeline:
    """Same chain with the augmentation switched off: output matcher on the kernel alone."""
    return Pipeline(n, cfg, augment=False)
