import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from dynmatch.graph import DELETE, INSERT
from dynmatch.oracle import BlossomOracle, is_matching, max_matching, max_matching_size
from dynmatch.stability import (DegreeBoundExceeded, StabilityMatcher, static_near_max,
                                undeleted_ratio_holds)
from dynmatch.workloads import uniform_random


def test_static_near_max_has_no_short_augmenting_path():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(2, 40)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.15]
        m = static_near_max(n, edges, 1 / 3)
        assert is_matching(m, lambda u, v: (u, v) in set(edges))
        # no augmenting path of length <= 5 gives a 4/3 guarantee
        assert 4 * len(m) >= 3 * max_matching_size(n, edges)


def test_degree_bound_enforced():
    sm = StabilityMatcher(5, 1 / 3, 1)
    sm.insert(0, 1)
    with pytest.raises(DegreeBoundExceeded):
        sm.insert(0, 2)


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=150), st.booleans())
@settings(max_examples=60, deadline=None)
def test_stability_matcher_invariants(pairs, star_mode):
    n, eps = 10, 1 / 3
    sm = StabilityMatcher(n, eps, None)
    o = BlossomOracle(n)
    live = set()
    for u, v in pairs:
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        kind = DELETE if e in live else INSERT
        live ^= {e}
        if star_mode:
            out = sm.star(kind, u, (v,))
        else:
            out = sm.update(kind, u, v)
        o.update(kind, u, v)
        m = sm.matching()
        assert is_matching(m, lambda a, b: (a, b) in live)
        assert m == sorted(sm.mset) and sm.size == len(m)
        assert sm.size * (1 + eps) >= o.mu
        assert all(s in (INSERT, DELETE) for s, _, _ in out)


def test_batch_applies_deletions_first():
    sm = StabilityMatcher(4, 1 / 3, None)
    sm.insert(0, 1)
    sm.batch([(INSERT, 1, 2), (DELETE, 0, 1)])
    assert sm.matching() == [(1, 2)]


def test_frozen_maximum_matching_stays_good_for_a_phase():
    # take a maximum matching, apply floor(eps |M|) random updates, keep only
    # undeleted edges: still within 1 + 3 eps of the new optimum
    rng = random.Random(11)
    eps = 1 / 3
    for trial in range(200):
        n = rng.randint(6, 40)
        edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.2}
        m = max_matching(n, sorted(edges))
        mu0 = len(m)
        for _ in range(math.floor(eps * mu0)):
            if rng.random() < 0.5 and edges:
                # adversarial: prefer deleting frozen edges
                pool = [e for e in m if e in edges] or sorted(edges)
                edges.discard(rng.choice(pool))
            else:
                u, v = rng.sample(range(n), 2)
                edges.add((min(u, v), max(u, v)))
        mu1 = max_matching_size(n, sorted(edges))
        assert undeleted_ratio_holds(mu0, m, edges, mu1, 1.0, eps), trial


def test_uniform_stream_bounded_degree():
    n, eps = 120, 1 / 3
    sm = StabilityMatcher(n, eps, 10)
    o = BlossomOracle(n)
    for ev in uniform_random(n, 2000, 4, max_degree=10):
        sm.update(ev.kind, ev.u, ev.v)
        o.update(ev.kind, ev.u, ev.v)
        assert sm.size * (1 + eps) >= o.mu
