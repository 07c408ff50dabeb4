import math
import random

import pytest

from dynmatch.orientation import Orientation, OrientationError


def test_orientation_keeps_out_degree_under_cap():
    rng = random.Random(5)
    n = 120
    o = Orientation(n)
    live = []
    liveset = set()
    for _ in range(6000):
        if rng.random() < 0.6 or not live:
            u, v = rng.sample(range(n), 2)
            e = (min(u, v), max(u, v))
            if e in liveset:
                continue
            o.orient_insert(u, v)
            live.append(e)
            liveset.add(e)
        else:
            e = live.pop(rng.randrange(len(live)))
            liveset.discard(e)
            o.orient_delete(*e)
        assert o.max_out_degree() <= o.cap
        assert o.m == len(liveset)
    # every live edge is oriented exactly once
    assert sum(o.out_degree(v) for v in range(n)) == len(liveset)
    for u, v in liveset:
        assert o.has(u, v)


def test_star_graph_flips_away_from_hub():
    o = Orientation(200, m_hat=200)
    for leaf in range(1, 200):
        o.orient_insert(0, leaf)
    assert o.out_degree(0) <= o.cap
    assert o.cap <= 2 * math.ceil(math.sqrt(2 * o.m_hat))


def test_orientation_errors():
    o = Orientation(3)
    o.orient_insert(0, 1)
    with pytest.raises(OrientationError):
        o.orient_insert(1, 0)
    with pytest.raises(OrientationError):
        o.tail(0, 2)
