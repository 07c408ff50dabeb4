import random

from hypothesis import given, settings, strategies as st

from conftest import nx_mu
from dynmatch.oracle import BlossomOracle, exhaustive_mu, exhaustive_mwm, is_matching, max_matching

import networkx as nx


@st.composite
def small_graph(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, edges


@given(small_graph())
@settings(max_examples=300)
def test_blossom_equals_exhaustive_and_networkx(g):
    n, edges = g
    m = max_matching(n, edges)
    assert is_matching(m, lambda u, v: (min(u, v), max(u, v)) in set(edges))
    assert len(m) == exhaustive_mu(n, edges) == nx_mu(n, edges)


@given(st.integers(1, 7), st.data())
def test_exhaustive_mwm_equals_networkx(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    w = [(u, v, data.draw(st.integers(1, 5))) for u, v in chosen]
    g = nx.Graph()
    g.add_weighted_edges_from(w)
    ref = sum(g[u][v]["weight"] for u, v in nx.max_weight_matching(g))
    assert exhaustive_mwm(n, w) == ref


def test_dynamic_oracle_tracks_networkx():
    for seed in range(6):
        rng = random.Random(seed)
        n = rng.randint(5, 40)
        o = BlossomOracle(n)
        g = nx.Graph()
        g.add_nodes_from(range(n))
        for t in range(300):
            if rng.random() < 0.6 or g.number_of_edges() == 0:
                u, v = rng.sample(range(n), 2)
                if g.has_edge(u, v):
                    continue
                g.add_edge(u, v)
                o.insert(u, v)
            else:
                u, v = rng.choice(sorted(g.edges()))
                g.remove_edge(u, v)
                o.delete(u, v)
            assert is_matching(o.matching(), g.has_edge)
            if t % 5 == 0:
                assert o.mu == len(nx.max_weight_matching(g, maxcardinality=True))


def test_is_matching_rejects_shared_endpoint_and_absent_edge():
    assert not is_matching([(0, 1), (1, 2)])
    assert not is_matching([(0, 1)], lambda u, v: False)
    assert is_matching([])
