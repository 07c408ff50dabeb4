"""Static structural checks on kernels and matchings.

Everything here is read-only and meant for desk-scale snapshots: degree
classes, the degree-weighted fractional matching inside a kernel, the
augmenting-path taxonomy of a kernel matching against a maximum matching,
and the count of matched edges that sit on length-3 augmenting paths.
Exact arithmetic (``Fraction``) is used wherever a threshold is compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .graph import norm
from .oracle import exhaustive_mwm, is_matching, max_matching, max_matching_size

Edge = tuple[int, int]


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _edges_of(k) -> list[Edge]:
    if hasattr(k, "edges") and callable(k.edges):
        return [norm(*e) for e in k.edges()]
    return [norm(*e) for e in k]


def _degrees(edges: Iterable[Edge]) -> dict[int, int]:
    deg: dict[int, int] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return deg


def mwm(n: int, wedges) -> Fraction | float:
    """Maximum weight matching value (exhaustive, small n)."""
    wedges = list(wedges)
    for u, v, w in wedges:
        if w <= 0:
            raise ValueError(f"weight of ({u}, {v}) must be positive")
    return exhaustive_mwm(n, wedges)


# -- degree classes ------------------------------------------------------------------

@dataclass(frozen=True)
class NodeClassification:
    index: int
    super_high: frozenset
    high: frozenset
    medium: frozenset
    low: frozenset

    def of(self, v: int) -> str:
        if v in self.super_high:
            return "SH"
        if v in self.high:
            return "H"
        if v in self.medium:
            return "M"
        return "L"

    def consistent(self) -> bool:
        return (self.super_high <= self.high and not (self.high & self.medium)
                and not (self.high & self.low) and not (self.medium & self.low))


def degree_class(deg: int, d: int, eps, s, i: int) -> str:
    """One of "SH", "H" (high but not super-high), "M", "L"."""
    e, sf = _q(eps), _q(s)
    if deg >= d * (1 - e - i * e * e):
        return "SH"
    if deg >= d * (1 - 2 * sf - i * e * e):
        return "H"
    if deg <= d * (sf + i * e * e):
        return "L"
    return "M"


def classify_nodes(kernel, n: int, d: int, eps, s, i: int) -> NodeClassification:
    deg = _degrees(_edges_of(kernel))
    e, sf = _q(eps), _q(s)
    sh, h, m, lo = set(), set(), set(), set()
    for v in range(n):
        x = deg.get(v, 0)
        if x >= d * (1 - e - i * e * e):
            sh.add(v)
        if x >= d * (1 - 2 * sf - i * e * e):
            h.add(v)
        if d * (sf + i * e * e) < x < d * (1 - 2 * sf - i * e * e):
            m.add(v)
        if x <= d * (sf + i * e * e):
            lo.add(v)
    return NodeClassification(i, frozenset(sh), frozenset(h), frozenset(m), frozenset(lo))


# -- fractional matching inside the kernel ---------------------------------------------

@dataclass
class FractionalMatching:
    x: dict[Edge, Fraction]
    y: dict[int, Fraction]
    total: Fraction
    target: Fraction
    valid: bool
    edge_bounds_hold: bool
    size_bound_holds: bool
    worst_edge: tuple | None = None


def eq6_fractional(kernel, d: int, mstar: Iterable[Edge], eps) -> FractionalMatching:
    """Weights 1/d on kernel edges outside ``mstar`` and the leftover
    ``(1 - sum_v (d_K(v) - 1)/d)^+`` on kernel edges inside it.

    Checks x >= 0 and y_v <= 1, the per-edge cover of every ``mstar`` edge
    (at least 1 inside the kernel, at least 1 - eps outside), and the total
    ``sum x >= (1 - eps)/2 * |mstar|``.
    """
    ek = set(_edges_of(kernel))
    ms = [norm(*e) for e in mstar]
    if not is_matching(ms):
        raise ValueError("mstar is not a matching")
    e_, inv = _q(eps), Fraction(1, d)
    deg = _degrees(ek)
    mset = set(ms)
    x: dict[Edge, Fraction] = {}
    for e in sorted(ek):
        if e in mset:
            slack = 1 - sum(Fraction(deg[v] - 1, d) for v in e)
            x[e] = max(Fraction(0), slack)
        else:
            x[e] = inv
    y: dict[int, Fraction] = {}
    for (u, v), w in x.items():
        y[u] = y.get(u, Fraction(0)) + w
        y[v] = y.get(v, Fraction(0)) + w
    valid = all(w >= 0 for w in x.values()) and all(t <= 1 for t in y.values())
    bounds_ok, worst = True, None
    for e in ms:
        cover = sum((y.get(v, Fraction(0)) for v in e), Fraction(0))
        need = Fraction(1) if e in ek else 1 - e_
        if cover < need:
            bounds_ok = False
            worst = (e, cover, need)
    total = sum(x.values(), Fraction(0))
    target = (1 - e_) / 2 * len(ms)
    return FractionalMatching(x, y, total, target, valid, bounds_ok, total >= target, worst)


# -- matching-edge degree sums ----------------------------------------------------------

@dataclass
class DegreeSumReport:
    r: int
    heavy_sum: int
    light_sum_in_kernel: int
    bound: Fraction
    precondition: bool | None
    holds: bool | None


def extended_kernel_count(kernel, d: int, mstar: Iterable[Edge], s, eps, delta,
                          mu_g: int | None = None, mu_k: int | None = None) -> DegreeSumReport:
    """Count ``mstar`` edges whose endpoint kernel degrees sum to at least
    ``d(1 + s - 2 eps)``, or to at most ``d(1 - s + 2 eps)`` while the edge is
    in the kernel. The bound ``r <= delta/s * |mstar|`` is only checked when
    ``mu_g >= (2 - delta) * mu_k`` (both sizes must be supplied)."""
    ek = set(_edges_of(kernel))
    deg = _degrees(ek)
    sf, e_, dl = _q(s), _q(eps), _q(delta)
    heavy = light = r = 0
    ms = [norm(*e) for e in mstar]
    for e in ms:
        tot = deg.get(e[0], 0) + deg.get(e[1], 0)
        c1 = tot >= d * (1 + sf - 2 * e_)
        c2 = tot <= d * (1 - sf + 2 * e_) and e in ek
        heavy += c1
        light += c2
        r += c1 or c2
    bound = dl / sf * len(ms)
    pre = holds = None
    if mu_g is not None and mu_k is not None:
        pre = mu_g >= (2 - dl) * mu_k
        holds = (r <= bound) if pre else None
    return DegreeSumReport(r, heavy, light, bound, pre, holds)


# -- augmenting-path taxonomy ----------------------------------------------------------

def _sym_components(m: list[Edge], mstar: list[Edge]):
    """Components of the symmetric difference as node walks, each with its edge list."""
    a = {}
    for u, v in m:
        a[u], a[v] = v, u
    b = {}
    for u, v in mstar:
        b[u], b[v] = v, u
    diff = [(e, "m") for e in m if b.get(e[0]) != e[1]] + [(e, "s") for e in mstar if a.get(e[0]) != e[1]]
    adj: dict[int, list[tuple[int, str]]] = {}
    for (u, v), tag in diff:
        adj.setdefault(u, []).append((v, tag))
        adj.setdefault(v, []).append((u, tag))
    seen: set[int] = set()
    out = []
    for start in sorted(adj, key=lambda x: (len(adj[x]) != 1, x)):
        if start in seen:
            continue
        walk, tags = [start], []
        seen.add(start)
        cur, prev = start, None
        while True:
            nxt = [(y, t) for y, t in adj[cur] if y != prev and (y not in seen or (y == start and len(walk) > 2))]
            if not nxt:
                break
            y, t = nxt[0]
            tags.append(t)
            if y == start:
                break
            walk.append(y)
            seen.add(y)
            prev, cur = cur, y
        out.append((walk, tags))
    return out


def length3_paths(m: list[Edge], mstar: list[Edge]) -> list[tuple[int, int, int, int]]:
    """Components of M xor M* that are augmenting paths v1-v2-v3-v4 for M."""
    out = []
    for walk, tags in _sym_components(m, mstar):
        if len(walk) == 4 and tags == ["s", "m", "s"]:
            out.append(tuple(walk))
    return out


@dataclass
class PathTaxonomy:
    counts: dict[str, int]
    paths: list[tuple[tuple[int, int, int, int], str]]
    bad_nodes: frozenset
    misclassified: dict[int, int] = field(default_factory=dict)
    best_index: int | None = None

    @property
    def frequent(self) -> int:
        return sum(self.counts[t] for t in ("1", "2", "3", "4"))

    @property
    def infrequent(self) -> int:
        return self.counts["if"]


def _path_type(p, cls, ek) -> str | None:
    v1, v2, v3, v4 = p
    c = [cls(v) for v in p]
    e1_in = norm(v1, v2) in ek
    if c[2] != "SH" or c[3] != "L":
        return None
    if c[0] == "L" and c[1] == "SH":
        return "1"
    if not e1_in:
        return None
    if c[0] == "L" and c[1] == "H":
        return "2"
    if c[0] == "M" and c[1] == "H":
        return "3"
    if c[0] == "M" and c[1] == "M":
        return "4"
    return None


def classify_paths(kernel, n: int, d: int, m: Iterable[Edge], mstar: Iterable[Edge], eps, s, i: int,
                   approx: dict[Edge, int] | None = None, indices: Iterable[int] | None = None,
                   check: bool = True) -> PathTaxonomy:
    """Tag every length-3 augmenting path of ``m`` (maximum in the kernel)
    against ``mstar`` (maximum in the graph) with its frequent type.

    The path is read so that its last edge is outside the kernel; when both
    end edges are outside, the orientation that yields a type wins. With
    ``approx`` (observer, node) -> counter, the number of misclassified nodes
    is reported for each index in ``indices`` along with the minimizing one.
    """
    ek = set(_edges_of(kernel))
    m = [norm(*e) for e in m]
    mstar = [norm(*e) for e in mstar]
    if check:
        if not is_matching(m) or any(e not in ek for e in m):
            raise ValueError("m is not a matching of the kernel")
        if len(m) != max_matching_size(n, sorted(ek)):
            raise ValueError("m is not maximum in the kernel")
        if not is_matching(mstar):
            raise ValueError("mstar is not a matching")
    deg = _degrees(ek)

    def cls(v):
        return degree_class(deg.get(v, 0), d, eps, s, i)

    counts = {"1": 0, "2": 0, "3": 0, "4": 0, "if": 0}
    tagged = []
    for p in length3_paths(m, mstar):
        options = []
        if norm(p[2], p[3]) not in ek:
            options.append(p)
        if norm(p[0], p[1]) not in ek:
            options.append(p[::-1])
        kind = None
        for q in options:
            kind = _path_type(q, cls, ek)
            if kind:
                p = q
                break
        if not kind and options:
            p = options[0]
        kind = kind or "if"
        counts[kind] += 1
        tagged.append((p, kind))
    in_frequent = {v for p, t in tagged if t != "if" for v in p}
    matched = {v for e in m for v in e}
    tax = PathTaxonomy(counts, tagged, frozenset(matched - in_frequent))
    if approx is not None:
        idx = list(indices) if indices is not None else [i]
        for j in idx:
            tax.misclassified[j] = misclassified_count(approx, deg, d, eps, s, j)
        tax.best_index = min(idx, key=lambda j: (tax.misclassified[j], j))
    return tax


def misclassified_count(approx: dict[Edge, int], deg: dict[int, int], d: int, eps, s, i: int) -> int:
    """Nodes some neighbor's counter would place in a different degree class."""
    bad = set()
    for (u, v), c in approx.items():
        if degree_class(c, d, eps, s, i) != degree_class(deg.get(v, 0), d, eps, s, i):
            bad.add(v)
    return len(bad)


# -- 3-augmentable edges ----------------------------------------------------------------

@dataclass
class AugmentableReport:
    count: int
    matching_size: int
    mu: int
    eps: Fraction
    precondition: bool
    holds: bool | None


def is_maximal(n: int, edges: Iterable[Edge], m: Iterable[Edge]) -> bool:
    covered = {v for e in m for v in e}
    return all(u in covered or v in covered for u, v in edges)


def count_3_augmentable(n: int, edges: Iterable[Edge], m: Iterable[Edge], eps=None) -> AugmentableReport:
    """Matched edges whose component in M xor M* is a length-3 augmenting path.

    ``eps`` defaults to the smallest value making ``|M| <= (1/2 + eps) mu``
    true; the count is then compared against ``(1/2 - 3 eps) mu``.
    """
    edges = [norm(*e) for e in edges]
    m = [norm(*e) for e in m]
    eset = set(edges)
    if not is_matching(m) or any(e not in eset for e in m):
        raise ValueError("m is not a matching of the graph")
    if not is_maximal(n, edges, m):
        raise ValueError("m is not maximal")
    mstar = max_matching(n, edges)
    mu = len(mstar)
    count = len(length3_paths(m, mstar))
    if eps is None:
        e_ = max(Fraction(0), Fraction(len(m), mu) - Fraction(1, 2)) if mu else Fraction(0)
    else:
        e_ = _q(eps)
    pre = len(m) <= (Fraction(1, 2) + e_) * mu
    holds = (count >= (Fraction(1, 2) - 3 * e_) * mu) if pre else None
    return AugmentableReport(count, len(m), mu, e_, pre, holds)


# -- high-degree coverage ----------------------------------------------------------------

@dataclass
class CoverageReport:
    high_nodes: int
    unmatched_high: int
    mu_k: int
    reference: Fraction


def high_node_coverage(kernel, n: int, d: int, eps, s, i: int) -> CoverageReport:
    """Among maximum matchings of the kernel, find one covering the most
    high-degree nodes and report how many it leaves uncovered, next to the
    reference quantity ``7 s mu(K)``. Exhaustive; keep ``n`` small."""
    ek = sorted(set(_edges_of(kernel)))
    nc = classify_nodes(ek, n, d, eps, s, i)
    eta = Fraction(1, n * n + 1)
    w = [(u, v, 1 + eta * ((u in nc.high) + (v in nc.high))) for u, v in ek]
    best = mwm(n, w) if w else Fraction(0)
    mu_k = int(best)  # eta terms add less than one in total
    covered = (best - mu_k) / eta
    return CoverageReport(len(nc.high), len(nc.high) - int(covered), mu_k, 7 * _q(s) * mu_k)
