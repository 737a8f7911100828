"""Hemispheres, freeness, minimal towers and the degree-2 conversion.

A hemisphere is a vertex subset inducing connected subgraphs on both sides;
it is the dual-graph avatar of a tail of the curve.  The conversion takes
``2 v0 - v1 - v2`` to its quasistable representative by adding the principal
divisors of a canonical family of hemispheres: the chains of 1-hemispheres
separating v0 from v1 and from v2, plus the free towers of 2- and
3-hemispheres over {v1, v2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .divisors import Divisor, div_of_subset, linearly_equivalent, vertex_divisor, zero_polarization
from .errors import (ClosureViolationError, ConventionError, EnumerationGuardError,
                     InputError, LemmaViolationError)
from .graphs import MultiGraph, boundary_edges, is_connected_induced
from .quasistable import is_quasistable

HEMISPHERE_ENUMERATION_GUARD = 22

# Pairwise closure preconditions are asserted exhaustively up to this family
# size and trusted beyond it.
_CLOSURE_CHECK_LIMIT = 64


@dataclass(frozen=True)
class Hemisphere:
    vertices: frozenset[str]
    delta: int
    boundary: frozenset[str]

    def __contains__(self, v: str) -> bool:
        return v in self.vertices

    def sort_key(self):
        return (len(self.vertices), tuple(sorted(self.vertices)))

    def as_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "delta": self.delta,
                "boundary": sorted(self.boundary)}


def is_hemisphere(g: MultiGraph, subset: Iterable[str]) -> bool:
    vs = g.vertex_set(subset)
    if not vs or vs == frozenset(g.vertices):
        return False
    return is_connected_induced(g, vs) and is_connected_induced(g, g.complement(vs))


def make_hemisphere(g: MultiGraph, subset: Iterable[str]) -> Hemisphere:
    vs = g.vertex_set(subset)
    if not is_hemisphere(g, vs):
        raise InputError(f"{sorted(vs)} is not a hemisphere: both sides must induce "
                         "connected subgraphs")
    bd = boundary_edges(g, vs, g.complement(vs))
    return Hemisphere(vs, len(bd), bd)


def complement_hemisphere(g: MultiGraph, h: Hemisphere) -> Hemisphere:
    return Hemisphere(g.complement(h.vertices), h.delta, h.boundary)


def enumerate_hemispheres(g: MultiGraph, delta_bound: int | None = None, *,
                          guard: int = HEMISPHERE_ENUMERATION_GUARD) -> list[Hemisphere]:
    """All hemispheres, canonically ordered; optionally only those with a
    given boundary size.  The scan is over all vertex subsets, so it is
    guarded by ``|V| <= guard``."""
    n = len(g.vertices)
    if n > guard:
        raise EnumerationGuardError(
            f"hemisphere enumeration needs |V| <= {guard}, got {n}",
            {"vertices": n, "guard": guard})
    out = g._cache.get("hemispheres")
    if out is None:
        vorder = g.sorted_vertices()
        index = {v: i for i, v in enumerate(vorder)}
        adj = [0] * n
        edge_bits = []
        for e in g.edges:
            a, b = index[e.ends[0]], index[e.ends[1]]
            adj[a] |= 1 << b
            adj[b] |= 1 << a
            edge_bits.append((1 << a) | (1 << b))

        def connected(mask: int) -> bool:
            seed = mask & -mask
            seen = seed
            frontier = seed
            while frontier:
                grow = 0
                f = frontier
                while f:
                    bit = f & -f
                    grow |= adj[bit.bit_length() - 1]
                    f ^= bit
                frontier = grow & mask & ~seen
                seen |= frontier
            return seen == mask

        full = (1 << n) - 1
        out = []
        for mask in range(1, full):
            if not connected(mask) or not connected(full ^ mask):
                continue
            vs = frozenset(vorder[i] for i in range(n) if mask >> i & 1)
            bd = frozenset(e.id for e, bits in zip(g.edges, edge_bits)
                           if bin(bits & mask).count("1") == 1)
            out.append(Hemisphere(vs, len(bd), bd))
        out.sort(key=Hemisphere.sort_key)
        g._cache["hemispheres"] = out
    if delta_bound is not None:
        return [h for h in out if h.delta == delta_bound]
    return list(out)


def hemispheres_between(g: MultiGraph, delta_bound: int, v: Iterable[str],
                        w: Iterable[str]) -> list[Hemisphere]:
    """Hemispheres of boundary size ``delta_bound`` whose inside contains
    ``w`` and whose outside contains ``v``."""
    vs = g.vertex_set(v)
    ws = g.vertex_set(w)
    return [h for h in enumerate_hemispheres(g, delta_bound)
            if ws <= h.vertices and vs.isdisjoint(h.vertices)]


def is_free(g: MultiGraph, w: Iterable[str], v: Iterable[str]) -> bool:
    """Whether the boundary edge sets of the two subsets are disjoint."""
    ws = g.vertex_set(w)
    vs = g.vertex_set(v)
    if not ws or ws == frozenset(g.vertices) or not vs or vs == frozenset(g.vertices):
        raise InputError("freeness is defined for proper nonempty subsets")
    bw = boundary_edges(g, ws, g.complement(ws))
    bv = boundary_edges(g, vs, g.complement(vs))
    return bw.isdisjoint(bv)


def minimal_member(family: Sequence[Hemisphere]) -> Hemisphere:
    """The inclusion-minimal member of an intersection-closed family,
    computed as the common intersection and verified to belong.

    Small families are also checked pairwise for intersection-closure;
    larger ones are trusted.  A missing intersection falsifies the closure
    property this code relies on and raises loudly.
    """
    if not family:
        raise InputError("minimal_member needs a nonempty family")
    by_set = {h.vertices: h for h in family}
    common = frozenset.intersection(*by_set)
    if common not in by_set:
        raise ClosureViolationError(
            "family is not intersection-closed: common intersection missing",
            {"intersection": sorted(common),
             "family": [sorted(h.vertices) for h in family]})
    if len(by_set) <= _CLOSURE_CHECK_LIMIT:
        sets = list(by_set)
        for i, a in enumerate(sets):
            for b in sets[i + 1:]:
                if a & b not in by_set:
                    raise ClosureViolationError(
                        "family is not intersection-closed",
                        {"a": sorted(a), "b": sorted(b),
                         "intersection": sorted(a & b)})
    return by_set[common]


@dataclass(frozen=True)
class FreeTower:
    """Nested minimal hemispheres, each free of all earlier members."""

    k: int
    members: tuple[Hemisphere, ...] = ()

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def as_json(self) -> list[dict]:
        return [h.as_json() for h in self.members]

    def validate(self, g: MultiGraph):
        for i, h in enumerate(self.members):
            if h.delta != self.k:
                raise InputError(f"tower member {sorted(h.vertices)} has delta "
                                 f"{h.delta}, expected {self.k}")
            for j in range(i):
                prev = self.members[j]
                if not prev.vertices < h.vertices:
                    raise InputError("tower members must be strictly nested")
                if not is_free(g, h.vertices, prev.vertices):
                    raise InputError("tower members must be free of earlier members")


def free_tower(g: MultiGraph, k: int, v0: str, targets: Iterable[str],
               exclusions: FreeTower | Sequence[Hemisphere] = ()) -> FreeTower:
    """The free tower of k-hemispheres over ``targets`` avoiding ``v0``.

    Member i is the minimal hemisphere of the pool that contains member i-1
    and is free of every earlier member; the pool for k = 3 is pre-filtered
    to hemispheres free of the whole (completed) 2-tower, passed as
    ``exclusions``.  The tower ends when the candidate pool empties.
    """
    if k not in (2, 3):
        raise InputError("free towers are built for k in {2, 3}")
    targets = g.vertex_set(targets)
    g.check_vertices([v0])
    pool = hemispheres_between(g, k, [v0], targets)
    for x in exclusions:
        pool = [h for h in pool if is_free(g, h.vertices, x.vertices)]
    members: list[Hemisphere] = []
    while True:
        if members:
            cands = [h for h in pool
                     if members[-1].vertices <= h.vertices
                     and all(is_free(g, h.vertices, m.vertices) for m in members)]
        else:
            cands = pool
        if not cands:
            return FreeTower(k, tuple(members))
        members.append(minimal_member(cands))


@dataclass(frozen=True)
class FamilyF:
    """The multiset of hemispheres feeding the degree-2 conversion.  The
    same 1-hemisphere may occur in both chains and then counts twice."""

    h1_v1: tuple[Hemisphere, ...]
    h1_v2: tuple[Hemisphere, ...]
    tower2: FreeTower
    tower3: FreeTower

    def members(self) -> list[Hemisphere]:
        return [*self.h1_v1, *self.h1_v2, *self.tower2, *self.tower3]

    def as_json(self) -> dict:
        return {
            "h1_v1": [h.as_json() for h in self.h1_v1],
            "h1_v2": [h.as_json() for h in self.h1_v2],
            "tower2": self.tower2.as_json(),
            "tower3": self.tower3.as_json(),
        }


def family_f(g: MultiGraph, v0: str, v1: str, v2: str) -> FamilyF:
    g.check_vertices([v0, v1, v2])
    h1_v1 = hemispheres_between(g, 1, [v0], [v1])
    h1_v2 = hemispheres_between(g, 1, [v0], [v2])
    tower2 = free_tower(g, 2, v0, {v1, v2})
    tower3 = free_tower(g, 3, v0, {v1, v2}, exclusions=tower2)
    return FamilyF(tuple(h1_v1), tuple(h1_v2), tower2, tower3)


def convert_deg2(g: MultiGraph, v0: str, v1: str, v2: str) -> Divisor:
    """The (v0, 0)-quasistable divisor equivalent to ``2 v0 - v1 - v2``.

    Computed as the start divisor plus the sum of ``div_of_subset`` over the
    family, with sources inside each member.  The printed form of this
    conversion carries the opposite orientation on the correction sum; that
    orientation moves weight away from stability, so the self-verifying one
    is used.  Both quasistability and equivalence are checked before
    returning; a failure here would falsify the convention and raises.
    """
    fam = family_f(g, v0, v1, v2)
    result = vertex_divisor(g, (v0, 2), (v1, -1), (v2, -1))
    for h in fam.members():
        result = result + div_of_subset(g, h.vertices)
    start = vertex_divisor(g, (v0, 2), (v1, -1), (v2, -1))
    if not is_quasistable(g, result, v0, zero_polarization(g)):
        raise ConventionError(
            "degree-2 conversion produced a non-quasistable divisor",
            {"v0": v0, "v1": v1, "v2": v2, "result": result.as_dict(),
             "family": fam.as_json()})
    if not linearly_equivalent(g, result, start, v0):
        raise ConventionError(
            "degree-2 conversion left the divisor class",
            {"v0": v0, "v1": v1, "v2": v2, "result": result.as_dict()})
    return result


# -- 2-vs-3 hemisphere intersections ----------------------------------------


@dataclass(frozen=True)
class IntersectionCase:
    """Classification of a (2-hemisphere, 3-hemisphere) intersection.

    ``case`` is 1 when the intersection is a 2-hemisphere (boundary
    ``{f1, e1}``) and 2 when it is a 3-hemisphere (boundary ``{f1, e1, e2}``),
    where the f's are the 2-hemisphere's boundary edges and the e's the
    3-hemisphere's.  The partition fields record which side of the other
    hemisphere fully contains each boundary edge.
    """

    case: int
    intersection: Hemisphere
    f_in_h3: tuple[str, ...]
    f_in_h3c: tuple[str, ...]
    e_in_h2: tuple[str, ...]
    e_in_h2c: tuple[str, ...]

    def as_json(self) -> dict:
        return {
            "case": self.case,
            "intersection": self.intersection.as_json(),
            "f_in_h3": list(self.f_in_h3),
            "f_in_h3c": list(self.f_in_h3c),
            "e_in_h2": list(self.e_in_h2),
            "e_in_h2c": list(self.e_in_h2c),
        }


def _fully_contained(g: MultiGraph, eid: str, vs: frozenset[str]) -> bool:
    e = g.edge(eid)
    return e.ends[0] in vs and e.ends[1] in vs


def classify_23_intersection(g: MultiGraph, h2: Hemisphere, h3: Hemisphere) -> IntersectionCase:
    """Classify how a 2-hemisphere meets a 3-hemisphere.

    Preconditions: the intersection is nonempty and proper in both, and the
    union is not everything.  Under them the intersection is itself a 2- or
    3-hemisphere and the boundary edges split cleanly between the two sides;
    anything else falsifies the classification and raises."""
    if h2.delta != 2:
        raise InputError(f"{sorted(h2.vertices)} is not a 2-hemisphere (delta={h2.delta})")
    if h3.delta != 3:
        raise InputError(f"{sorted(h3.vertices)} is not a 3-hemisphere (delta={h3.delta})")
    inter = h2.vertices & h3.vertices
    if not inter or inter == h2.vertices or inter == h3.vertices:
        raise InputError("intersection must be nonempty and proper in both hemispheres")
    if h2.vertices | h3.vertices == frozenset(g.vertices):
        raise InputError("the union of the two hemispheres must not cover the graph")

    detail = {"h2": sorted(h2.vertices), "h3": sorted(h3.vertices),
              "intersection": sorted(inter)}
    if not is_hemisphere(g, inter):
        raise LemmaViolationError("intersection is not a hemisphere", detail)
    h = make_hemisphere(g, inter)

    f_in_h3 = tuple(sorted(e for e in h2.boundary if _fully_contained(g, e, h3.vertices)))
    f_in_h3c = tuple(sorted(e for e in h2.boundary
                            if _fully_contained(g, e, g.complement(h3.vertices))))
    e_in_h2 = tuple(sorted(e for e in h3.boundary if _fully_contained(g, e, h2.vertices)))
    e_in_h2c = tuple(sorted(e for e in h3.boundary
                            if _fully_contained(g, e, g.complement(h2.vertices))))

    if len(f_in_h3) != 1 or len(f_in_h3c) != 1:
        raise LemmaViolationError(
            "the 2-hemisphere boundary does not split one edge per side",
            {**detail, "f_in_h3": f_in_h3, "f_in_h3c": f_in_h3c})
    if len(e_in_h2) == 1 and len(e_in_h2c) == 2:
        case = 1
    elif len(e_in_h2) == 2 and len(e_in_h2c) == 1:
        case = 2
    else:
        raise LemmaViolationError(
            "the 3-hemisphere boundary does not match either case",
            {**detail, "e_in_h2": e_in_h2, "e_in_h2c": e_in_h2c})
    expected = frozenset(f_in_h3) | frozenset(e_in_h2)
    if h.boundary != expected or h.delta != case + 1:
        raise LemmaViolationError(
            "intersection boundary differs from the classified edges",
            {**detail, "boundary": sorted(h.boundary), "expected": sorted(expected)})
    return IntersectionCase(case, h, f_in_h3, f_in_h3c, e_in_h2, e_in_h2c)
