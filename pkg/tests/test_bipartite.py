import random

import pytest

from dynmatch.bipartite import BipartiteMatcher, BipartitionError, short_path_steps
from dynmatch.graph import DELETE, INSERT, StarUpdate, UpdateEvent
from dynmatch.oracle import BlossomOracle, is_matching, max_matching_size
from dynmatch.stability import run_steps
from dynmatch.workloads import uniform_random


def test_short_path_rebuild_is_three_halves():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(2, 30)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.2]
        adj = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        mate, _ = run_steps(short_path_steps(adj, sorted(adj)))
        m = sorted((u, v) for u, v in mate.items() if u < v)
        assert is_matching(m, lambda a, b: (a, b) in set(edges))
        assert 3 * len(m) >= 2 * max_matching_size(n, edges)


def test_conflicting_sides_rejected():
    b = BipartiteMatcher(6, 0.1)
    b.apply_star_update(StarUpdate(INSERT, 0, (1, 2)), "low")
    with pytest.raises(BipartitionError):
        b.apply_star_update(StarUpdate(INSERT, 1, (2,)))
    with pytest.raises(BipartitionError):
        b.apply_star_update(StarUpdate(INSERT, 0, (3,)), "high")


def test_sides_released_when_isolated():
    b = BipartiteMatcher(4, 0.1)
    b.apply_edge_update(UpdateEvent(INSERT, 0, 1), "low")
    b.apply_edge_update(UpdateEvent(DELETE, 0, 1))
    assert b.side == {}
    b.apply_edge_update(UpdateEvent(INSERT, 0, 1), "high")
    assert b.side == {0: "high", 1: "low"}


def test_random_bipartite_stream_ratio_and_recourse():
    n, eps = 80, 0.1
    b = BipartiteMatcher(n, eps)
    o = BlossomOracle(n)
    for ev in uniform_random(n, 2000, 3, bipartite=True, target_edges=150):
        out = b.apply_edge_update(ev, "low" if ev.u < n // 2 else "high")
        o.update(ev.kind, ev.u, ev.v)
        assert len(out) <= b.bound
        m = b.matching()
        assert is_matching(m, b.has_edge)
        assert len(m) * (1.5 + eps) * (1 + 6 * eps) >= o.mu
