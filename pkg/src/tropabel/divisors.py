"""Divisors, polarizations and chip-firing on a multigraph.

A divisor is an integer weight per vertex; a polarization is a rational
weight per vertex with integer total.  Linear equivalence is generated by
the graph Laplacian: two divisors are equivalent when they differ by
``laplacian_div(f)`` for some integer vertex function ``f``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InputError, InternalInvariantError
from .graphs import MultiGraph


class Divisor:
    """Immutable integer vertex weights on a fixed graph; zeros are dropped."""

    __slots__ = ("graph", "_values")

    def __init__(self, graph: MultiGraph, values: Mapping[str, int] | None = None):
        self.graph = graph
        vals = {}
        if values:
            graph.check_vertices(values.keys())
            for v, n in values.items():
                n = int(n)
                if n:
                    vals[v] = n
        self._values = vals

    def get(self, v: str) -> int:
        return self._values.get(v, 0)

    __getitem__ = get

    def degree(self) -> int:
        return sum(self._values.values())

    def support(self) -> frozenset[str]:
        return frozenset(self._values)

    def as_dict(self) -> dict[str, int]:
        return dict(sorted(self._values.items()))

    def items(self):
        return sorted(self._values.items())

    def __add__(self, other: "Divisor") -> "Divisor":
        self._check_same_graph(other)
        vals = dict(self._values)
        for v, n in other._values.items():
            vals[v] = vals.get(v, 0) + n
        return Divisor(self.graph, vals)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __neg__(self) -> "Divisor":
        return Divisor(self.graph, {v: -n for v, n in self._values.items()})

    def __mul__(self, k: int) -> "Divisor":
        return Divisor(self.graph, {v: k * n for v, n in self._values.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Divisor) and other.graph is self.graph
                and other._values == self._values)

    def __hash__(self):
        return hash((id(self.graph), frozenset(self._values.items())))

    def __bool__(self):
        return bool(self._values)

    def _check_same_graph(self, other):
        if other.graph is not self.graph:
            raise InputError("divisors live on different graphs")

    def __repr__(self):
        inner = ", ".join(f"{v}: {n}" for v, n in self.items())
        return "Divisor({" + inner + "})"


class Polarization:
    """Rational vertex weights with integer total degree."""

    __slots__ = ("graph", "_values")

    def __init__(self, graph: MultiGraph, values: Mapping[str, Fraction | int | str] | None = None):
        self.graph = graph
        vals = {}
        if values:
            graph.check_vertices(values.keys())
            for v, q in values.items():
                q = Fraction(q)
                if q:
                    vals[v] = q
        total = sum(vals.values(), Fraction(0))
        if total.denominator != 1:
            raise InputError(f"polarization degree {total} is not an integer")
        self._values = vals

    def get(self, v: str) -> Fraction:
        return self._values.get(v, Fraction(0))

    __getitem__ = get

    def degree(self) -> int:
        return int(sum(self._values.values(), Fraction(0)))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(sorted(self._values.items()))

    def items(self):
        return sorted(self._values.items())

    def __eq__(self, other):
        return (isinstance(other, Polarization) and other.graph is self.graph
                and other._values == self._values)

    def __hash__(self):
        return hash((id(self.graph), frozenset(self._values.items())))

    def __repr__(self):
        inner = ", ".join(f"{v}: {q}" for v, q in self.items())
        return "Polarization({" + inner + "})"


def zero_polarization(g: MultiGraph) -> Polarization:
    return Polarization(g, {})


def vertex_divisor(g: MultiGraph, *weighted: tuple[str, int] | str) -> Divisor:
    """Convenience: ``vertex_divisor(g, ("a", 2), "b")`` is 2a + b."""
    vals: dict[str, int] = {}
    for item in weighted:
        if isinstance(item, str):
            v, n = item, 1
        else:
            v, n = item
        vals[v] = vals.get(v, 0) + n
    return Divisor(g, vals)


# -- principal divisors ----------------------------------------------------


def laplacian_div(g: MultiGraph, f: Mapping[str, int]) -> Divisor:
    """Principal divisor of an integer vertex function:
    ``D(v) = sum over edges vw of f(v) - f(w)``.  Missing values count as 0."""
    g.check_vertices(f.keys())
    vals = {v: 0 for v in g.vertices}
    for e in g.edges:
        a, b = e.ends
        d = int(f.get(a, 0)) - int(f.get(b, 0))
        vals[a] += d
        vals[b] -= d
    return Divisor(g, vals)


def div_of_subset(g: MultiGraph, v: Iterable[str]) -> Divisor:
    """Principal divisor of a proper nonempty subset, oriented with sources
    inside the subset: +1 at the inner endpoint and -1 at the outer endpoint
    of every boundary edge.  Equals ``laplacian_div`` of the indicator."""
    vs = g.vertex_set(v)
    if not vs or vs == frozenset(g.vertices):
        raise InputError("subset must be nonempty and proper")
    vals = {u: 0 for u in g.vertices}
    for e in g.edges:
        a, b = e.ends
        if (a in vs) != (b in vs):
            if a in vs:
                vals[a] += 1
                vals[b] -= 1
            else:
                vals[b] += 1
                vals[a] -= 1
    return Divisor(g, vals)


# -- reduced divisors (Dhar) ------------------------------------------------

_DHAR_CAP = 10_000_000


def reduce_with_function(g: MultiGraph, d: Divisor, v0: str) -> tuple[Divisor, dict[str, int]]:
    """Dhar reduction keeping the firing bookkeeping.

    Returns ``(r, f)`` with ``r = d + laplacian_div(f)`` the unique
    v0-reduced divisor equivalent to ``d``: nonnegative away from ``v0``,
    and no subset avoiding ``v0`` can fire without going negative.
    """
    g.check_vertices([v0])
    vals = {v: d.get(v) for v in g.vertices}
    f = {v: 0 for v in g.vertices}
    adj = {v: [(e.other_end(v), e.id) for e in g.incident_edges(v)] for v in g.vertices}

    # Make the divisor effective away from v0 by borrowing at every vertex
    # currently in debt.  Each round adds the Laplacian of the indicator of
    # the debtor set; termination is the standard dominance argument.
    for _ in range(_DHAR_CAP):
        debtors = {v for v in g.vertices if v != v0 and vals[v] < 0}
        if not debtors:
            break
        for v in debtors:
            f[v] += 1
        for v in debtors:
            for w, _eid in adj[v]:
                if w not in debtors:
                    vals[v] += 1
                    vals[w] -= 1
    else:
        raise InternalInvariantError("borrowing phase did not converge",
                                     {"divisor": d.as_dict(), "base": v0})

    # Burn from v0; fire the unburnt set until everything burns.
    for _ in range(_DHAR_CAP):
        burnt = {v0}
        heat = {v: 0 for v in g.vertices}         # edges into the burnt zone
        queue = [v0]
        while queue:
            u = queue.pop()
            for w, _eid in adj[u]:
                if w in burnt:
                    continue
                heat[w] += 1
                if heat[w] > vals[w]:
                    burnt.add(w)
                    queue.append(w)
        if len(burnt) == len(g.vertices):
            break
        unburnt = set(g.vertices) - burnt
        for v in unburnt:
            f[v] -= 1
            for w, _eid in adj[v]:
                if w not in unburnt:
                    vals[v] -= 1
                    vals[w] += 1
    else:
        raise InternalInvariantError("burning phase did not converge",
                                     {"divisor": d.as_dict(), "base": v0})

    return Divisor(g, vals), f


def reduce_divisor(g: MultiGraph, d: Divisor, v0: str) -> Divisor:
    """The unique v0-reduced divisor linearly equivalent to ``d``."""
    r, _ = reduce_with_function(g, d, v0)
    return r


def linearly_equivalent(g: MultiGraph, d1: Divisor, d2: Divisor, v0: str) -> bool:
    """Whether ``d1 - d2`` is principal.  The zero divisor is v0-reduced, so
    this reduces the difference and compares with zero."""
    if d1.degree() != d2.degree():
        return False
    return not reduce_divisor(g, d1 - d2, v0)


def is_principal(g: MultiGraph, d: Divisor) -> bool:
    return d.degree() == 0 and not reduce_divisor(g, d, g.vertices[0])
