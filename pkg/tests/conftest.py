"""Shared fixture graphs and independent brute-force helpers.

The helpers here deliberately avoid the library's own equivalence and
stability machinery where they serve as oracles: principality is decided
by scanning small firing-function boxes, and cycle graphs get an exact
Abel-Jacobi bookkeeping based on position sums.
"""

import itertools
import random
from fractions import Fraction

import pytest

from tropabel.graphs import MultiGraph
from tropabel.divisors import Divisor, laplacian_div


def make_c3():
    return MultiGraph("abc", [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")])


def make_c4():
    return MultiGraph("abcd", [("ab", "a", "b"), ("bc", "b", "c"),
                               ("cd", "c", "d"), ("da", "d", "a")])


def make_b2():
    return MultiGraph("uw", [("e1", "u", "w"), ("e2", "u", "w")])


def make_b3():
    return MultiGraph("uw", [("e1", "u", "w"), ("e2", "u", "w"), ("e3", "u", "w")])


def make_k4():
    return MultiGraph("abcd", [("ab", "a", "b"), ("ac", "a", "c"), ("ad", "a", "d"),
                               ("bc", "b", "c"), ("bd", "b", "d"), ("cd", "c", "d")])


def make_kite():
    # triangle a, b, c with a pendant triangle through d
    return MultiGraph("abcd", [("ab", "a", "b"), ("ac", "a", "c"), ("bc", "b", "c"),
                               ("bd", "b", "d"), ("cd", "c", "d")])


def make_kite_extended():
    return MultiGraph("abcde", [("ab", "a", "b"), ("ac", "a", "c"), ("bc", "b", "c"),
                                ("bd", "b", "d"), ("ce", "c", "e"), ("de", "d", "e")])


def make_wheel6():
    # 6-cycle with one chord
    return MultiGraph("abcdef", [("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"),
                                 ("de", "d", "e"), ("ef", "e", "f"), ("fa", "f", "a"),
                                 ("be", "b", "e")])


def make_bridge():
    # triangle with a pendant vertex over a bridge
    return MultiGraph("abcd", [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a"),
                               ("cd", "c", "d")])


FIXTURES = {
    "B2": make_b2, "B3": make_b3, "C3": make_c3, "C4": make_c4,
    "K4": make_k4, "kite": make_kite, "wheel6": make_wheel6,
}


@pytest.fixture(scope="session")
def c3():
    return make_c3()


@pytest.fixture(scope="session")
def c4():
    return make_c4()


@pytest.fixture(scope="session")
def b2():
    return make_b2()


@pytest.fixture(scope="session")
def b3():
    return make_b3()


@pytest.fixture(scope="session")
def k4():
    return make_k4()


@pytest.fixture(scope="session")
def kite():
    return make_kite()


@pytest.fixture(scope="session")
def wheel6():
    return make_wheel6()


@pytest.fixture(scope="session")
def bridge_fixture():
    return make_bridge()


@pytest.fixture(scope="session")
def fixture_graphs():
    return {name: make() for name, make in FIXTURES.items()}


# -- independent oracles -----------------------------------------------------


def brute_force_principal(g: MultiGraph, d: Divisor, bound: int = 4) -> bool:
    """Decide principality by scanning all firing functions with values in
    [-bound, bound], one vertex pinned to 0.  Exact for small graphs and
    bounds covering the true function's spread."""
    if d.degree() != 0:
        return False
    verts = list(g.sorted_vertices())
    for tail in itertools.product(range(-bound, bound + 1), repeat=len(verts) - 1):
        f = dict(zip(verts[1:], tail))
        f[verts[0]] = 0
        if laplacian_div(g, f) == d:
            return True
    return False


def random_multigraph(rng: random.Random, max_vertices: int = 5,
                      max_edges: int = 8) -> MultiGraph:
    """Connected loopless multigraph: a random spanning tree plus extras."""
    n = rng.randint(2, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        edges.append((f"e{len(edges)}", verts[rng.randrange(i)], verts[i]))
    extra = rng.randint(0, max_edges - len(edges))
    for _ in range(extra):
        u, w = rng.sample(verts, 2)
        edges.append((f"e{len(edges)}", u, w))
    return MultiGraph(verts, edges)


def cycle_position(g: MultiGraph, point) -> Fraction:
    """Position of a tropical point along a cycle graph whose edges are
    oriented head-to-tail in listed order (a->b->c->...->a)."""
    starts = {}
    pos = Fraction(0)
    for e in g.edges:
        starts[e.id] = (pos, e.ends)
        pos += 1
    if point.is_vertex:
        for eid, (p, ends) in starts.items():
            if ends[0] == point.vertex:
                return p
        raise AssertionError("vertex not on cycle")
    p, _ = starts[point.edge]
    return p + point.t


def cycle_class_sum(g: MultiGraph, divisor) -> Fraction:
    """Abel-Jacobi bookkeeping for a cycle: the position-weighted sum mod
    circumference classifies divisor classes of a fixed degree."""
    total = Fraction(0)
    for point, n in divisor.items():
        total += n * cycle_position(g, point)
    return total % len(g.edges)
