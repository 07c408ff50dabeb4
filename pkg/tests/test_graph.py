import pytest
from hypothesis import given, strategies as st

from dynmatch.graph import (DELETE, INSERT, BadNode, DuplicateEdge, DynamicGraph, EmptyNeighborhood,
                            MissingEdge, Ring, SelfLoop, StarUpdate, StreamFormatError, UpdateEvent,
                            format_stream, parse_stream)


def test_ring_cursor_walks_every_element_once_per_lap():
    r = Ring()
    for x in (1, 2, 3, 4):
        r.insert_before_ptr(x)
    seen = [r.advance() for _ in range(8)]
    assert sorted(seen[:4]) == [1, 2, 3, 4]
    assert seen[:4] == seen[4:]


def test_ring_remove_cursor_target_moves_to_successor():
    r = Ring()
    for x in (1, 2, 3):
        r.insert_before_ptr(x)
    p = r.ptr
    succ = r.nxt[p]
    r.remove(p)
    assert r.ptr == succ and len(r) == 2
    r.remove(r.ptr)
    r.remove(r.ptr)
    assert r.ptr is None
    with pytest.raises(EmptyNeighborhood):
        r.advance()


def test_graph_errors():
    g = DynamicGraph(3)
    g.insert_edge(0, 1)
    with pytest.raises(DuplicateEdge):
        g.insert_edge(1, 0)
    with pytest.raises(SelfLoop):
        g.insert_edge(2, 2)
    with pytest.raises(MissingEdge):
        g.delete_edge(0, 2)
    with pytest.raises(BadNode):
        g.insert_edge(0, 3)


def test_star_update_validation():
    with pytest.raises(ValueError):
        StarUpdate(INSERT, 0, ())
    with pytest.raises(ValueError):
        StarUpdate(INSERT, 0, (1, 1))
    with pytest.raises(ValueError):
        StarUpdate(INSERT, 0, (0, 1))
    assert StarUpdate(DELETE, 3, (1, 5)).edges() == [(1, 3), (3, 5)]


@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7), st.booleans()), max_size=60))
def test_graph_matches_set_model(ops):
    g = DynamicGraph(8)
    model = set()
    for u, v, ins in ops:
        e = (min(u, v), max(u, v))
        if u == v:
            continue
        if ins and e not in model:
            g.apply(UpdateEvent(INSERT, u, v))
            model.add(e)
        elif not ins and e in model:
            g.apply(UpdateEvent(DELETE, v, u))
            model.discard(e)
        assert set(g.edges()) == model
        assert g.m == len(model)
        for x in range(8):
            assert g.degree(x) == sum(x in e for e in model)
            assert sorted(g.neighbors(x)) == sorted(a + b - x for a, b in model if x in (a, b))


@given(st.lists(st.tuples(st.sampled_from([INSERT, DELETE]), st.integers(0, 99), st.integers(0, 99))))
def test_stream_round_trip(evs):
    events = [UpdateEvent(*e) for e in evs]
    assert list(parse_stream(format_stream(events).splitlines())) == events


def test_parse_stream_skips_comments_and_rejects_garbage():
    assert list(parse_stream(["# hi", "", "+ 0 1"])) == [UpdateEvent(INSERT, 0, 1)]
    for bad in ("* 0 1", "+ 0", "+ a b", "+ -1 2"):
        with pytest.raises(StreamFormatError):
            list(parse_stream([bad]))
