"""Non-injectivity witnesses for the symmetrized degree-2 Abel map, at the
graph level.

Two unordered point pairs with linearly equivalent sums witness that the
map collapses them.  Smooth-smooth collisions are tested on the graph
itself; any pair involving a node-point lives on the once-subdivided graph
(one vertex per edge) and is compared there, because adding the exceptional
vertices changes the chip-firing group.  The two levels are never mixed in
one equivalence computation.  Node-level collisions are reported as
candidates: whether they lift to geometric collisions is outside what the
graph sees.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .divisors import Divisor, laplacian_div, reduce_with_function, vertex_divisor
from .errors import InternalInvariantError, UnsupportedInputError
from .graphs import MultiGraph, subdivide_uniform

LEVEL_GAMMA = "GAMMA"
LEVEL_GAMMA_TILDE = "GAMMA_TILDE"


@dataclass(frozen=True)
class Witness:
    """Two distinct pairs with equivalent sums, plus a certificate firing
    function whose Laplacian divisor is exactly (pair1 sum) - (pair2 sum)
    on the level's graph."""

    level: str
    pair1: tuple[str, str]
    pair2: tuple[str, str]
    certificate: tuple[tuple[str, int], ...]

    @property
    def candidate(self) -> bool:
        return self.level == LEVEL_GAMMA_TILDE

    def as_json(self):
        return {
            "level": self.level,
            "pair1": list(self.pair1),
            "pair2": list(self.pair2),
            "certificate": {"values": {v: n for v, n in self.certificate}},
            "candidate": self.candidate,
        }


def _pair_divisor(g: MultiGraph, pair: tuple[str, str]) -> Divisor:
    return vertex_divisor(g, (pair[0], 1)) + vertex_divisor(g, (pair[1], 1))


def _certificate(g: MultiGraph, pair1, pair2) -> tuple[tuple[str, int], ...]:
    diff = _pair_divisor(g, pair1) - _pair_divisor(g, pair2)
    residue, f = reduce_with_function(g, diff, g.sorted_vertices()[0])
    if residue:
        raise InternalInvariantError(
            "witness pairs stopped being equivalent during certification",
            {"pair1": pair1, "pair2": pair2})
    # residue = diff + laplacian(f) = 0, so diff = laplacian(-f);
    # shift so the certificate's minimum value is 0
    high = max(f.values())
    cert = tuple(sorted((v, high - k) for v, k in f.items()))
    if laplacian_div(g, dict(cert)) != diff:
        raise InternalInvariantError(
            "certificate failed re-verification",
            {"pair1": pair1, "pair2": pair2, "certificate": cert})
    return cert


def _collisions(g: MultiGraph, pairs, level: str) -> list[Witness]:
    base = g.sorted_vertices()[0]
    classes: dict = {}
    for pair in pairs:
        r, _ = reduce_with_function(g, _pair_divisor(g, pair), base)
        key = tuple(r.items())
        classes.setdefault(key, []).append(pair)
    out = []
    for members in classes.values():
        for p1, p2 in combinations_with_replacement(members, 2):
            if p1 == p2:
                continue
            out.append(Witness(level, p1, p2, _certificate(g, p1, p2)))
    out.sort(key=lambda w: (w.pair1, w.pair2))
    return out


def find_witnesses(g: MultiGraph) -> list[Witness]:
    """All collision witnesses, graph level first.

    Requires a bridgeless graph: across a bridge the equivalence argument
    for pair sums breaks down, so such inputs are rejected outright.
    """
    for e in g.edges:
        if g.is_bridge(e.id):
            raise UnsupportedInputError(
                f"the witness scan needs a bridgeless graph; {e.id!r} is a bridge",
                {"bridge": e.id})

    verts = g.sorted_vertices()
    gamma_pairs = list(combinations_with_replacement(verts, 2))
    witnesses = _collisions(g, gamma_pairs, LEVEL_GAMMA)

    tilde = subdivide_uniform(g, 2)
    node_vertices = sorted(tilde.positions)
    tilde_verts = tilde.derived.sorted_vertices()
    tilde_pairs = [p for p in combinations_with_replacement(tilde_verts, 2)
                   if p[0] in tilde.positions or p[1] in tilde.positions]
    witnesses.extend(_collisions(tilde.derived, tilde_pairs, LEVEL_GAMMA_TILDE))
    return witnesses


def gamma_witnesses(g: MultiGraph) -> list[Witness]:
    """Only the graph-level (smooth-smooth) collisions."""
    return [w for w in find_witnesses(g) if w.level == LEVEL_GAMMA]


def is_graph_pseudo_hyperelliptic(g: MultiGraph) -> bool:
    """Whether any collision witness exists at either level."""
    return bool(find_witnesses(g))
