import json

import pytest
from hypothesis import given, settings, strategies as st

from tropabel.errors import InputError
from tropabel.graphs import (MultiGraph, boundary_edges, delta, graph_from_json,
                             graph_to_json, is_connected_induced, relabel,
                             subdivide_uniform)

from conftest import make_kite, random_multigraph
import random


def test_construction_rejects_loops():
    with pytest.raises(InputError):
        MultiGraph("ab", [("e0", "a", "a"), ("e1", "a", "b")])


def test_construction_rejects_disconnected():
    with pytest.raises(InputError):
        MultiGraph("abcd", [("e0", "a", "b"), ("e1", "c", "d")])


def test_construction_rejects_duplicate_ids():
    with pytest.raises(InputError):
        MultiGraph("aab", [("e0", "a", "b")])
    with pytest.raises(InputError):
        MultiGraph("ab", [("e0", "a", "b"), ("e0", "b", "a")])


def test_construction_rejects_unknown_endpoint():
    with pytest.raises(InputError):
        MultiGraph("ab", [("e0", "a", "z")])


def test_boundary_edges_kite():
    k = make_kite()
    assert boundary_edges(k, {"d"}, {"b", "c"}) == {"bd", "cd"}


def test_boundary_edges_parallel(b2):
    assert boundary_edges(b2, {"u"}, {"w"}) == {"e1", "e2"}


def test_boundary_edges_nonadjacent(c4):
    assert boundary_edges(c4, {"a", "c"}, {"a", "c"}) == frozenset()


def test_boundary_edges_unknown_vertex(c4):
    with pytest.raises(InputError):
        boundary_edges(c4, {"z"}, {"a"})


def test_delta_examples(b2, b3, c4):
    assert delta(b2, {"u"}) == 2
    assert delta(b3, {"w"}) == 3
    assert delta(c4, {"b", "c"}) == 2


def test_connected_induced(c4):
    k = make_kite()
    assert is_connected_induced(c4, {"a", "b"})
    assert not is_connected_induced(c4, {"a", "c"})
    assert is_connected_induced(k, {"b", "c", "d"})
    with pytest.raises(InputError):
        is_connected_induced(c4, set())


def test_subdivide_identity(b2):
    s = subdivide_uniform(b2, 1)
    assert s.derived is b2
    assert len(s.derived.edges) == 2


def test_subdivide_b2(b2):
    s = subdivide_uniform(b2, 2)
    assert len(s.derived.edges) == 4
    assert len(s.derived.vertices) == 4
    fibers = s.fibers()
    assert all(len(f) == 2 for f in fibers.values())
    # the fiber of each base edge is a path between its endpoints
    for e in b2.edges:
        assert s.vertex_at(e.id, 0) == e.ends[0]
        assert s.vertex_at(e.id, 2) == e.ends[1]


def test_subdivide_c3(c3):
    s = subdivide_uniform(c3, 3)
    assert len(s.derived.edges) == 9
    assert len(s.derived.vertices) == 9


def test_subdivide_rejects_zero(b2):
    with pytest.raises(InputError):
        subdivide_uniform(b2, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_subdivision_counts_property(seed, n):
    g = random_multigraph(random.Random(seed))
    s = subdivide_uniform(g, n)
    assert len(s.derived.edges) == len(g.edges) * n
    assert len(s.derived.vertices) == len(g.vertices) + len(g.edges) * (n - 1)
    assert all(len(f) == n for f in s.fibers().values())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_delta_complement_and_valence_sum(seed):
    rng = random.Random(seed)
    g = random_multigraph(rng)
    verts = list(g.vertices)
    sub = {v for v in verts if rng.random() < 0.5}
    if sub and len(sub) < len(verts):
        assert delta(g, sub) == delta(g, set(verts) - sub)
    assert sum(delta(g, [v]) for v in verts) == 2 * len(g.edges)


def test_boundary_symmetry(c4):
    assert boundary_edges(c4, {"a", "b"}, {"c"}) == boundary_edges(c4, {"c"}, {"a", "b"})


def test_json_round_trip(c4):
    doc = graph_to_json(c4)
    again = graph_from_json(doc)
    assert graph_to_json(again) == doc


def test_json_auto_edge_ids():
    g = graph_from_json({"vertices": ["x", "y"], "edges": [["x", "y"], ["y", "x"]]})
    assert sorted(e.id for e in g.edges) == ["e0", "e1"]


def test_json_string_input():
    g = graph_from_json(json.dumps({"vertices": ["x", "y"], "edges": [["x", "y"]]}))
    assert g.vertices == ("x", "y")


def test_json_bad_input():
    with pytest.raises(InputError):
        graph_from_json("{not json")
    with pytest.raises(InputError):
        graph_from_json({"vertices": ["a"]})


def test_relabel_round_trip(c4):
    vmap = {"a": "p", "b": "q", "c": "r", "d": "s"}
    h = relabel(c4, vmap)
    back = relabel(h, {v: k for k, v in vmap.items()})
    assert graph_to_json(back) == graph_to_json(c4)


def test_is_bridge():
    g = MultiGraph("abc", [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")])
    assert not any(g.is_bridge(e.id) for e in g.edges)
    h = MultiGraph("abcd", [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a"),
                            ("cd", "c", "d")])
    assert h.is_bridge("cd") and not h.is_bridge("ab")
