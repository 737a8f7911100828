"""Divisors on the unit-length tropical curve of a graph.

Points are either vertices or interior points of an edge, located by an
exact rational coordinate measured from the edge's source endpoint.
Quasistability of a tropical divisor is decided on the minimal refinement
carrying its support: the divisor is quasistable exactly when no edge
carries more than one interior support point and the induced divisor on
the refinement is quasistable in the graph sense (the polarization extends
by zero over inserted vertices).

The degree-2 Abel representative qs(D - p1 - p2) is computed on a uniform
lattice: with N twice the lcm of the coordinate denominators, the divisor
lives on the N-fold subdivision, where tropical linear equivalence of
lattice-supported divisors is ordinary chip-firing.  The graph-quasistable
representative there is the tropical representative; this is re-verified on
every call and retried once on a doubled lattice before failing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from .divisors import Divisor, Polarization, linearly_equivalent, zero_polarization
from .errors import DenominatorEscape, InputError, InternalInvariantError
from .graphs import MultiGraph, Subdivision, subdivide, subdivide_uniform
from .quasistable import is_quasistable, quasistable_rep


@dataclass(frozen=True)
class TropicalPoint:
    """A vertex, or the point at distance ``t`` from the source of an edge."""

    vertex: str | None = None
    edge: str | None = None
    t: Fraction | None = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self):
        if self.is_vertex:
            return (0, self.vertex, "", Fraction(0))
        return (1, "", self.edge, self.t)

    def denominator(self) -> int:
        return 1 if self.is_vertex else self.t.denominator

    def as_json(self):
        if self.is_vertex:
            return {"vertex": self.vertex}
        return {"edge": self.edge, "t": str(self.t)}

    def __repr__(self):
        return self.vertex if self.is_vertex else f"{self.edge}@{self.t}"


def vertex_point(g: MultiGraph, v: str) -> TropicalPoint:
    g.check_vertices([v])
    return TropicalPoint(vertex=v)


def point_on_edge(g: MultiGraph, edge: str, t) -> TropicalPoint:
    """The point at distance ``t`` in [0, 1] from the source of ``edge``;
    endpoint coordinates collapse to the vertex itself."""
    e = g.edge(edge)
    t = Fraction(t)
    if t < 0 or t > 1:
        raise InputError(f"edge coordinate {t} outside [0, 1]")
    if t == 0:
        return TropicalPoint(vertex=e.ends[0])
    if t == 1:
        return TropicalPoint(vertex=e.ends[1])
    return TropicalPoint(edge=edge, t=t)


def tropical_point_from_json(g: MultiGraph, data) -> TropicalPoint:
    if isinstance(data, str):
        return vertex_point(g, data)
    if not isinstance(data, dict):
        raise InputError("tropical point must be a vertex name or an object")
    if "vertex" in data:
        return vertex_point(g, data["vertex"])
    if "edge" in data and "t" in data:
        try:
            t = Fraction(data["t"])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad edge coordinate {data['t']!r}: {exc}") from None
        return point_on_edge(g, data["edge"], t)
    raise InputError('tropical point needs "vertex" or "edge"+"t"')


class TropicalDivisor:
    """Finitely many integer weights at points of the unit-length curve."""

    __slots__ = ("graph", "_values")

    def __init__(self, graph: MultiGraph, values: Mapping[TropicalPoint, int] | None = None):
        self.graph = graph
        vals: dict[TropicalPoint, int] = {}
        if values:
            for p, n in values.items():
                if p.is_vertex:
                    graph.check_vertices([p.vertex])
                else:
                    graph.edge(p.edge)
                n = int(n)
                if n:
                    vals[p] = vals.get(p, 0) + n
                    if not vals[p]:
                        del vals[p]
        self._values = vals

    def get(self, p: TropicalPoint) -> int:
        return self._values.get(p, 0)

    __getitem__ = get

    def degree(self) -> int:
        return sum(self._values.values())

    def items(self):
        return sorted(self._values.items(), key=lambda kv: kv[0].sort_key())

    def support(self):
        return sorted(self._values, key=TropicalPoint.sort_key)

    def __eq__(self, other):
        return (isinstance(other, TropicalDivisor) and other.graph is self.graph
                and other._values == self._values)

    def __hash__(self):
        return hash((id(self.graph), frozenset(self._values.items())))

    def __bool__(self):
        return bool(self._values)

    def as_json(self):
        return {"support": [{"point": p.as_json(), "value": n} for p, n in self.items()]}

    def __repr__(self):
        inner = ", ".join(f"{p!r}: {n}" for p, n in self.items())
        return "TropicalDivisor({" + inner + "})"


def tropical_divisor_from_json(g: MultiGraph, data) -> TropicalDivisor:
    if not isinstance(data, dict) or "support" not in data:
        raise InputError('tropical divisor JSON needs a "support" list')
    vals: dict[TropicalPoint, int] = {}
    for entry in data["support"]:
        p = tropical_point_from_json(g, entry["point"])
        vals[p] = vals.get(p, 0) + int(entry["value"])
    return TropicalDivisor(g, vals)


def divisor_on_curve(d: Divisor) -> TropicalDivisor:
    return TropicalDivisor(d.graph, {TropicalPoint(vertex=v): n for v, n in d.items()})


# -- combinatorial types -----------------------------------------------------


@dataclass(frozen=True)
class CombinatorialType:
    """Vertex weights plus, per edge, the source-ordered interior weight
    sequence with positions forgotten."""

    vertex_values: tuple[tuple[str, int], ...]
    edge_profiles: tuple[tuple[str, tuple[int, ...]], ...]

    def as_json(self):
        return {"vertices": {v: n for v, n in self.vertex_values},
                "edges": {e: list(p) for e, p in self.edge_profiles}}


def combinatorial_type(d: TropicalDivisor) -> CombinatorialType:
    verts = []
    per_edge: dict[str, list[tuple[Fraction, int]]] = {}
    for p, n in d.items():
        if p.is_vertex:
            verts.append((p.vertex, n))
        else:
            per_edge.setdefault(p.edge, []).append((p.t, n))
    profiles = tuple(
        (e, tuple(n for _, n in sorted(entries)))
        for e, entries in sorted(per_edge.items()))
    return CombinatorialType(tuple(sorted(verts)), profiles)


# -- quasistability on the curve ----------------------------------------------


def _support_refinement(d: TropicalDivisor) -> tuple[Subdivision, dict[TropicalPoint, str]]:
    """Minimal refinement carrying the divisor's support, at most one
    interior point per edge.  Returns the subdivision and the map from
    interior support points to inserted vertices."""
    g = d.graph
    interior: dict[str, Fraction] = {}
    for p in d.support():
        if not p.is_vertex:
            if p.edge in interior:
                raise InputError("more than one interior support point on edge "
                                 f"{p.edge!r}")
            interior[p.edge] = p.t
    sub = subdivide(g, {e: 1 for e in interior})
    where = {TropicalPoint(edge=e, t=t): sub.vertex_at(e, 1) for e, t in interior.items()}
    return sub, where


def is_quasistable_tropical(g: MultiGraph, d: TropicalDivisor, v0: str,
                            mu: Polarization | None = None) -> bool:
    """Quasistability via the minimal support refinement: at most one
    interior point per edge, and the induced graph divisor quasistable
    there.  The polarization must live on the vertices of ``g``."""
    g.check_vertices([v0])
    if d.graph is not g:
        raise InputError("divisor lives on a different graph")
    mu = mu if mu is not None else zero_polarization(g)
    per_edge: dict[str, int] = {}
    for p in d.support():
        if not p.is_vertex:
            per_edge[p.edge] = per_edge.get(p.edge, 0) + 1
            if per_edge[p.edge] > 1:
                return False
    sub, where = _support_refinement(d)
    vals = {}
    for p, n in d.items():
        vals[p.vertex if p.is_vertex else where[p]] = n
    d_hat = Divisor(sub.derived, vals)
    mu_hat = Polarization(sub.derived, dict(mu.items()))
    return is_quasistable(sub.derived, d_hat, v0, mu_hat)


# -- the degree-2 Abel representative -----------------------------------------


def _realize_on_lattice(sub: Subdivision, d_dagger: Divisor,
                        p1: TropicalPoint, p2: TropicalPoint, n: int) -> Divisor:
    vals = {v: k for v, k in d_dagger.items()}
    for p in (p1, p2):
        if p.is_vertex:
            v = p.vertex
        else:
            pos = p.t * n
            assert pos.denominator == 1
            v = sub.vertex_at(p.edge, int(pos))
        vals[v] = vals.get(v, 0) - 1
    return Divisor(sub.derived, vals)


def _from_lattice(sub: Subdivision, rep: Divisor, n: int) -> TropicalDivisor:
    vals = {}
    for v, k in rep.items():
        if v in sub.positions:
            eid, pos = sub.positions[v]
            vals[TropicalPoint(edge=eid, t=Fraction(pos, n))] = k
        else:
            vals[TropicalPoint(vertex=v)] = k
    return TropicalDivisor(sub.base, vals)


def qs_abel2(g: MultiGraph, v0: str, d_dagger: Divisor, mu: Polarization | None,
             p1: TropicalPoint, p2: TropicalPoint) -> TropicalDivisor:
    """The unique (v0, mu)-quasistable tropical divisor equivalent to
    ``d_dagger - p1 - p2``.

    Lattice method: on the uniform N-subdivision (N twice the lcm of the
    coordinate denominators) the class is an ordinary chip-firing class and
    the graph-quasistable representative is computed there.  The result is
    re-verified as a tropical divisor (support refinement + lattice linear
    equivalence); a verification failure triggers one retry at 2N and then a
    denominator-escape error.
    """
    g.check_vertices([v0])
    mu = mu if mu is not None else zero_polarization(g)
    if d_dagger.graph is not g:
        raise InputError("d_dagger lives on a different graph")
    if d_dagger.degree() != mu.degree() + 2:
        raise InputError(
            f"degree mismatch: deg d_dagger = {d_dagger.degree()} but the "
            f"polarization needs degree {mu.degree() + 2}")
    for p in (p1, p2):
        if not p.is_vertex:
            g.edge(p.edge)

    n0 = 2 * math.lcm(p1.denominator(), p2.denominator(), 1)
    failures = []
    for n in (n0, 2 * n0):
        try:
            result = _attempt_lattice(g, v0, d_dagger, mu, p1, p2, n)
        except InternalInvariantError as exc:
            failures.append({"N": n, "reason": str(exc)})
            continue
        if result is not None:
            return result
        failures.append({"N": n, "reason": "verification failed"})
    raise DenominatorEscape(
        "lattice search failed to produce a verified representative",
        {"tried": failures})


def _attempt_lattice(g, v0, d_dagger, mu, p1, p2, n) -> TropicalDivisor | None:
    sub = subdivide_uniform(g, n)
    lattice_div = _realize_on_lattice(sub, d_dagger, p1, p2, n)
    mu_n = Polarization(sub.derived, dict(mu.items()))
    rep = quasistable_rep(sub.derived, lattice_div, v0, mu_n)
    trop = _from_lattice(sub, rep, n)
    if not is_quasistable_tropical(g, trop, v0, mu):
        return None
    if not linearly_equivalent(sub.derived, lattice_div, rep, v0):
        return None
    return trop


# -- region constancy ----------------------------------------------------------


@dataclass(frozen=True)
class OrientedEdge:
    """An edge with a parametrization direction; ``reverse`` measures the
    coordinate from the edge's target instead of its source."""

    edge: str
    reverse: bool = False

    def point(self, g: MultiGraph, x: Fraction) -> TropicalPoint:
        return point_on_edge(g, self.edge, 1 - x if self.reverse else x)

    def source(self, g: MultiGraph) -> str:
        e = g.edge(self.edge)
        return e.ends[1] if self.reverse else e.ends[0]

    def as_json(self):
        return {"edge": self.edge, "reverse": self.reverse}


class Region(Enum):
    X_LT_Y = "X_LT_Y"
    Y_LT_X = "Y_LT_X"
    X_LT_1MY = "X_LT_1MY"
    ONE_MY_LT_X = "1MY_LT_X"
    FULL_SQUARE = "FULL_SQUARE"

    def contains(self, x: Fraction, y: Fraction) -> bool:
        if self is Region.X_LT_Y:
            return x < y
        if self is Region.Y_LT_X:
            return y < x
        if self is Region.X_LT_1MY:
            return x < 1 - y
        if self is Region.ONE_MY_LT_X:
            return 1 - y < x
        return True


def region_from_name(name: str) -> Region:
    for r in Region:
        if r.value == name or r.name == name:
            return r
    raise InputError(f"unknown region {name!r}; use one of "
                     + ", ".join(r.value for r in Region))


@dataclass(frozen=True)
class ConstancyReport:
    status: str                      # "constant" | "witness"
    region: Region
    denominators: tuple[int, ...]
    e1: OrientedEdge
    e2: OrientedEdge
    samples: int
    common_type: CombinatorialType | None = None
    witness: tuple | None = None     # ((x, y, type), (x', y', type'))

    @property
    def constant(self) -> bool:
        return self.status == "constant"

    def as_json(self):
        out = {
            "status": self.status,
            "region": self.region.value,
            "denominators": list(self.denominators),
            "parametrization": {"e1": self.e1.as_json(), "e2": self.e2.as_json()},
            "samples": self.samples,
        }
        if self.status == "constant":
            out["type"] = self.common_type.as_json() if self.common_type else None
        else:
            (x, y, t1), (x2, y2, t2) = self.witness
            out["witnesses"] = [
                {"at": [str(x), str(y)], "type": t1.as_json()},
                {"at": [str(x2), str(y2)], "type": t2.as_json()},
            ]
        return out


def sample_grid(denominators: Iterable[int]) -> list[Fraction]:
    vals = set()
    for q in denominators:
        if q < 2:
            raise InputError("sample denominators must be >= 2")
        for i in range(1, q):
            vals.add(Fraction(i, q))
    return sorted(vals)


def _sample_chunk(task):
    g, v0, d_dagger, mu, e1, e2, pairs = task
    return [(x, y, combinatorial_type(
        qs_abel2(g, v0, d_dagger, mu, e1.point(g, x), e2.point(g, y))))
        for x, y in pairs]


def region_constancy(g: MultiGraph, v0: str, d_dagger: Divisor,
                     mu: Polarization | None, e1: OrientedEdge, e2: OrientedEdge,
                     region: Region, denominators: Iterable[int] = (3, 4, 5, 7),
                     jobs: int = 1) -> ConstancyReport:
    """Evaluate the Abel representative's combinatorial type over the open
    region's sample grid.  Constant on all samples yields CONSTANT with the
    common type; otherwise the first disagreeing pair of samples is the
    witness.  Sampling verifies, it does not prove.

    Samples are independent; ``jobs > 1`` spreads them over worker
    processes without changing the (deterministic, lexicographic) report.
    """
    g.edge(e1.edge)
    g.edge(e2.edge)
    denominators = tuple(denominators)
    grid = sample_grid(denominators)
    pairs = [(x, y) for x in grid for y in grid if region.contains(x, y)]

    first: tuple | None = None
    if jobs > 1 and len(pairs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        chunks = [pairs[i::jobs] for i in range(jobs)]
        tasks = [(g, v0, d_dagger, mu, e1, e2, c) for c in chunks if c]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            by_sample = {(x, y): t for part in pool.map(_sample_chunk, tasks)
                         for x, y, t in part}
        results = ((x, y, by_sample[(x, y)]) for x, y in pairs)
    else:
        results = ((x, y, combinatorial_type(
            qs_abel2(g, v0, d_dagger, mu, e1.point(g, x), e2.point(g, y))))
            for x, y in pairs)

    for x, y, ctype in results:
        if first is None:
            first = (x, y, ctype)
        elif ctype != first[2]:
            return ConstancyReport("witness", region, denominators, e1, e2,
                                   len(pairs), witness=(first, (x, y, ctype)))
    return ConstancyReport("constant", region, denominators, e1, e2, len(pairs),
                           common_type=first[2] if first else None)
