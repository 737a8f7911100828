"""Blowup planning and per-node-pair classification.

The global plan lists the blowup centers that resolve the degree-2
Abel-Jacobi map: the diagonal, plus every 2-tail and 3-tail avoiding the
marked vertex.  Per node pair, the classifier first tries the structural
fast paths (a bridge, an equal pair, the exact boundary of a 2-tail) and
otherwise samples the Abel representative over the two region schemes of
the local criterion.  Sampling verifies constancy on a grid, it does not
prove it, so an unresolved report carrying witnesses is a first-class
outcome rather than an exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .divisors import vertex_divisor, zero_polarization
from .graphs import MultiGraph
from .hemispheres import Hemisphere, enumerate_hemispheres
from .tropical import ConstancyReport, OrientedEdge, Region, region_constancy

DEFAULT_DENOMINATORS = (3, 4, 5, 7)


def tails(g: MultiGraph, v0: str, deltas) -> list[Hemisphere]:
    """Hemispheres with boundary size in ``deltas`` avoiding ``v0``,
    canonically ordered.  These are the tails of the curve not meeting the
    marked point."""
    g.check_vertices([v0])
    deltas = set(deltas)
    return [h for h in enumerate_hemispheres(g)
            if h.delta in deltas and v0 not in h.vertices]


@dataclass(frozen=True)
class BlowupPlan:
    """The diagonal marker plus a canonical set of centers.  Identity is
    order-free: two plans are equal when their center sets agree."""

    v0: str
    centers: tuple[Hemisphere, ...]
    include_diagonal: bool = True

    def center_sets(self) -> frozenset[frozenset[str]]:
        return frozenset(h.vertices for h in self.centers)

    def __eq__(self, other):
        return (isinstance(other, BlowupPlan)
                and self.include_diagonal == other.include_diagonal
                and self.center_sets() == other.center_sets())

    def __hash__(self):
        return hash((self.include_diagonal, self.center_sets()))

    def as_json(self):
        return {"diagonal": self.include_diagonal,
                "centers": [sorted(h.vertices) for h in self.centers]}


def blowup_plan(g: MultiGraph, v0: str) -> BlowupPlan:
    """Diagonal plus all 2- and 3-tails avoiding ``v0``.  The output is a
    canonical set: it commutes with any relabeling of the graph."""
    return BlowupPlan(v0, tuple(tails(g, v0, {2, 3})))


VERDICT_DEFINED = "DEFINED"
VERDICT_Z1xZ2 = "BLOWUP_Z1xZ2"
VERDICT_Z1xZ2C = "BLOWUP_Z1xZ2C"
VERDICT_UNRESOLVED = "UNRESOLVED"

FAST_ONE_TAIL = "ONE_TAIL"
FAST_TWO_TAIL = "TWO_TAIL"
FAST_DIAGONAL = "DIAGONAL"


@dataclass(frozen=True)
class NodePairClassification:
    verdict: str
    e1: str
    e2: str
    fast_path: str | None = None
    center: frozenset[str] | None = None         # Z with Z1 = Z2 = Z, when known
    orientation: tuple[OrientedEdge, OrientedEdge] | None = None
    evidence: tuple[ConstancyReport, ...] = ()
    denominators: tuple[int, ...] = DEFAULT_DENOMINATORS

    def as_json(self):
        out = {
            "verdict": self.verdict,
            "nodes": [self.e1, self.e2],
            "fast_path": self.fast_path,
            "denominators": list(self.denominators),
            "evidence": [r.as_json() for r in self.evidence],
        }
        if self.center is not None:
            out["center"] = sorted(self.center)
        if self.orientation is not None:
            out["orientation"] = [oe.as_json() for oe in self.orientation]
        return out


def _two_tail_with_boundary(g: MultiGraph, v0: str, e1: str, e2: str) -> Hemisphere | None:
    want = {e1, e2}
    for h in enumerate_hemispheres(g, 2):
        if set(h.boundary) == want:
            if v0 in h.vertices:
                continue                      # the complementary tail is listed too
            return h
    return None


def classify_node_pair(g: MultiGraph, v0: str, e1: str, e2: str,
                       denominators=DEFAULT_DENOMINATORS) -> NodePairClassification:
    """Classify the local resolution at the node pair ``(e1, e2)``.

    Fast paths: a bridge edge means the map is already defined; an equal
    pair is resolved by the diagonal blowup; a pair forming the full
    boundary of a 2-tail Z is resolved by blowing up Z x Z.  Otherwise the
    representative ``qs(2 v0 - p1 - p2)`` is sampled per region scheme in
    the edges' stored orientations: the full square first (defined), then
    {x<y, y<x} (blow up Z1 x Z2 with the sources inside the Z's), then
    {x+y<1, x+y>1} (blow up Z1 x Z2^c).
    """
    g.check_vertices([v0])
    g.edge(e1)
    g.edge(e2)
    denominators = tuple(denominators)

    if g.is_bridge(e1) or g.is_bridge(e2):
        return NodePairClassification(VERDICT_DEFINED, e1, e2,
                                      fast_path=FAST_ONE_TAIL,
                                      denominators=denominators)
    if e1 == e2:
        return NodePairClassification(VERDICT_Z1xZ2C, e1, e2,
                                      fast_path=FAST_DIAGONAL,
                                      denominators=denominators)
    two_tail = _two_tail_with_boundary(g, v0, e1, e2)
    if two_tail is not None:
        return NodePairClassification(VERDICT_Z1xZ2, e1, e2,
                                      fast_path=FAST_TWO_TAIL,
                                      center=two_tail.vertices,
                                      denominators=denominators)

    d_dagger = vertex_divisor(g, (v0, 2))
    mu = zero_polarization(g)
    oe1, oe2 = OrientedEdge(e1), OrientedEdge(e2)

    def run(region: Region) -> ConstancyReport:
        return region_constancy(g, v0, d_dagger, mu, oe1, oe2, region, denominators)

    evidence = []
    full = run(Region.FULL_SQUARE)
    evidence.append(full)
    if full.constant:
        return NodePairClassification(VERDICT_DEFINED, e1, e2,
                                      orientation=(oe1, oe2),
                                      evidence=tuple(evidence),
                                      denominators=denominators)
    for regions, verdict in (((Region.X_LT_Y, Region.Y_LT_X), VERDICT_Z1xZ2),
                             ((Region.X_LT_1MY, Region.ONE_MY_LT_X), VERDICT_Z1xZ2C)):
        reports = [run(r) for r in regions]
        evidence.extend(reports)
        if all(r.constant for r in reports):
            return NodePairClassification(verdict, e1, e2,
                                          orientation=(oe1, oe2),
                                          evidence=tuple(evidence),
                                          denominators=denominators)
    return NodePairClassification(VERDICT_UNRESOLVED, e1, e2,
                                  orientation=(oe1, oe2),
                                  evidence=tuple(evidence),
                                  denominators=denominators)
