import random

import pytest

from dynmatch.degrees import FAMILIES, ApproxDegreeTable, ThresholdSubgraphs
from dynmatch.graph import DELETE, INSERT, UpdateEvent
from dynmatch.kernel import make_kernel


def hub_stream(rng, n, hubs, events, live_cap):
    live, order = set(), []
    for _ in range(events):
        if len(live) < live_cap and (rng.random() < 0.6 or not live):
            while True:
                if rng.random() < 0.9:
                    e = (rng.randrange(hubs), rng.randrange(hubs, n))
                else:
                    e = tuple(sorted(rng.sample(range(n), 2)))
                if e not in live:
                    break
            live.add(e)
            order.append(e)
            yield UpdateEvent(INSERT, *e)
        else:
            e = order.pop(rng.randrange(len(order)))
            live.remove(e)
            yield UpdateEvent(DELETE, *e)


def drive(eps, s, d, alpha, events, seed, check_every=1):
    rng = random.Random(seed)
    n = 120
    k = make_kernel("scan", n, eps, d)
    table = ApproxDegreeTable(n, alpha, k.degree)
    ts = ThresholdSubgraphs(table, eps, s, d)
    shadow = {(f, i): set() for f in FAMILIES for i in range(1, ts.count + 1)}
    for step, ev in enumerate(hub_stream(rng, n, 8, events, 500)):
        ch = k.update(ev)
        stars = []
        if ev.kind == INSERT:
            stars += ts.host_insert(ev.u, ev.v)
        for _, x, y in ch:
            stars += ts.kernel_change(x, y)
        if ev.kind == DELETE:
            stars += ts.host_delete(ev.u, ev.v)
        for key, star in stars:
            assert len(star.leaves) <= max(table.quota, 1) or star.kind == DELETE or ev.kind == INSERT
            for e in star.edges():
                if star.kind == INSERT:
                    assert e not in shadow[key]
                    shadow[key].add(e)
                else:
                    shadow[key].remove(e)
        assert table.error() <= alpha
        if step % check_every == 0:
            full = ts.recompute()
            for key in full:
                assert full[key] == ts.membership(*key) == shadow[key]
                view = ts.snapshot(*key)
                assert not (view.low & view.high)
            for i in range(1, ts.count + 1):
                assert ts.membership("SH", i) <= ts.membership("H", i)
                assert ts.membership("H", i) <= ts.membership("H", min(i + 1, ts.count))
    return table, ts


def test_counters_and_subgraphs_match_shadow():
    drive(0.1, 0.2, 40, 0.1 ** 2 * 40, 1500, 1, check_every=7)


def test_larger_alpha_still_bounded():
    drive(0.1, 0.2, 40, 1.5, 1500, 2, check_every=7)


def test_refresh_touches_at_most_quota():
    k_deg = {v: 0 for v in range(30)}
    t = ApproxDegreeTable(30, 2.0, lambda v: k_deg[v], max_degree=20)
    for w in range(1, 21):
        t.add_edge(0, w)
    assert t.quota == 10
    k_deg[0] = 5
    touched = t.refresh(0)
    assert len(touched) == 10 and len(set(touched)) == 10
    touched += t.refresh(0)
    assert sorted(touched) == list(range(1, 21))
    assert t.error() == 0


def test_invalid_threshold_parameters_rejected():
    k_deg = lambda v: 0
    with pytest.raises(ValueError):
        ThresholdSubgraphs(ApproxDegreeTable(4, 0.4, k_deg), 0.1, 0.04, 40)
    with pytest.raises(ValueError):
        # gap between light and heavy bounds smaller than the counter spread
        ThresholdSubgraphs(ApproxDegreeTable(4, 40, k_deg), 0.1, 0.2, 40)
