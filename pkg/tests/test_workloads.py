from dynmatch.graph import DynamicGraph
from dynmatch.oracle import max_matching_size
from dynmatch.workloads import (MatchedEdgeAdversary, gadget_family, gadget_nodes, sliding_window,
                                uniform_random)


def replay_valid(n, events):
    g = DynamicGraph(n)
    for ev in events:
        g.apply(ev)  # raises on an invalid event
    return g


def test_generators_deterministic_and_valid():
    for gen in (lambda s: uniform_random(50, 800, s, max_degree=5),
                lambda s: sliding_window(50, 800, s, window=60),
                lambda s: uniform_random(50, 800, s, bipartite=True)):
        a, b = list(gen(3)), list(gen(3))
        assert a == b and a != list(gen(4))
        replay_valid(50, a)


def test_max_degree_respected():
    g = DynamicGraph(40)
    for ev in uniform_random(40, 2000, 1, p_insert=0.9, max_degree=4):
        g.apply(ev)
        assert max(g.degree(v) for v in range(40)) <= 4


def test_sliding_window_steady_state():
    g = DynamicGraph(60)
    counts = []
    for ev in sliding_window(60, 1000, 2, window=50):
        g.apply(ev)
        counts.append(g.m)
    assert max(counts) == 50
    assert all(c in (49, 50) for c in counts[200:])


def test_gadget_family_mu():
    for k in (1, 5, 20):
        evs = gadget_family(k, core_degree=6, seed=1, churn=10)
        g = replay_valid(gadget_nodes(k), evs)
        assert max_matching_size(g.n, list(g.edges())) == 2 * k


def test_adversary_deletes_matched_edges_only_validly():
    adv = MatchedEdgeAdversary(30, 5, p_delete=0.5)
    g = DynamicGraph(30)
    matched = []
    deleted_matched = 0
    for _ in range(500):
        ev = adv.next_event(matched)
        g.apply(ev)
        if ev.kind == "-" and ev.edge in matched:
            deleted_matched += 1
        # a naive greedy "algorithm" to observe
        cov = set()
        matched = []
        for u, v in sorted(g.edges()):
            if u not in cov and v not in cov:
                matched.append((u, v))
                cov |= {u, v}
    assert deleted_matched > 50
