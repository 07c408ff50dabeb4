import random

import pytest
from hypothesis import given, settings, strategies as st

from dynmatch.graph import DELETE, INSERT, UpdateEvent
from dynmatch.kernel import (MAX_CHANGES, KernelParams, PoolKernel, ScanKernel, check_kernel, check_pools,
                             make_kernel, static_kernel)
from dynmatch.oracle import max_matching_size


def test_params_reject_small_d():
    with pytest.raises(ValueError):
        KernelParams(0.1, 9)
    KernelParams(0.1, 10)
    with pytest.raises(ValueError):
        make_kernel("other", 5, 0.1, 10)


@st.composite
def edit_script(draw):
    n = draw(st.integers(2, 14))
    steps = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=120))
    return n, steps


@pytest.mark.parametrize("variant", ["scan", "pool"])
@given(script=edit_script(), d=st.integers(3, 6))
@settings(max_examples=60, deadline=None)
def test_kernel_properties_after_every_update(variant, script, d):
    # toggling pairs gives interleaved inserts and deletes
    n, steps = script
    eps = 1 / d
    k = make_kernel(variant, n, eps, d)
    live = set()
    for u, v in steps:
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        ev = UpdateEvent(DELETE if e in live else INSERT, u, v)
        live ^= {e}
        changes = k.update(ev)
        assert len(changes) <= MAX_CHANGES
        rep = check_kernel(k)
        assert rep.ok, rep
        assert set(k.edges()) <= live
        if isinstance(k, PoolKernel):
            assert check_pools(k) == []


def test_change_log_replays_to_kernel():
    rng = random.Random(2)
    k = ScanKernel(40, 0.25, 4)
    live = []
    for _ in range(800):
        if rng.random() < 0.6 or not live:
            u, v = rng.sample(range(40), 2)
            if k.g.has_edge(u, v):
                continue
            k.insert(u, v)
            live.append((u, v))
        else:
            k.delete(*live.pop(rng.randrange(len(live))))
    replay = set()
    for _, sign, u, v in k.log:
        if sign == INSERT:
            replay.add((min(u, v), max(u, v)))
        else:
            replay.discard((min(u, v), max(u, v)))
    assert replay == set(k.edges())
    assert [rec[0] for rec in k.log] == sorted(rec[0] for rec in k.log)


def test_static_kernel_is_two_plus_eps_approximate():
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randint(10, 60)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
        k = static_kernel(n, edges, 0.1, 10)
        assert check_kernel(k).ok
        assert max_matching_size(n, edges) <= (2 + 8 * 0.1) * max_matching_size(n, k.edges())
