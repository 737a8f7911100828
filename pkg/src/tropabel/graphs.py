"""Finite connected loopless multigraphs with opaque string ids.

Vertex and edge ids are arbitrary strings; canonical order is lexicographic.
Edge endpoints are stored as an ordered pair: ``ends[0]`` is the designated
source, which fixes how points in the interior of an edge are parametrized.
All objects are immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InputError


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]

    @property
    def source(self) -> str:
        return self.ends[0]

    @property
    def target(self) -> str:
        return self.ends[1]

    def other_end(self, v: str) -> str:
        if v == self.ends[0]:
            return self.ends[1]
        if v == self.ends[1]:
            return self.ends[0]
        raise InputError(f"vertex {v!r} is not an endpoint of edge {self.id!r}")


class MultiGraph:
    """Connected loopless multigraph.

    Loops are rejected (two equal endpoints), as are disconnected vertex
    sets and duplicate ids.  Parallel edges are fine.
    """

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str, str] | Edge]):
        vs = tuple(str(v) for v in vertices)
        es = []
        for e in edges:
            if isinstance(e, Edge):
                es.append(e)
            else:
                eid, u, w = e
                es.append(Edge(str(eid), (str(u), str(w))))
        if len(set(vs)) != len(vs):
            raise InputError("duplicate vertex ids")
        if len({e.id for e in es}) != len(es):
            raise InputError("duplicate edge ids")
        vset = frozenset(vs)
        for e in es:
            if e.ends[0] not in vset or e.ends[1] not in vset:
                raise InputError(f"edge {e.id!r} has an undeclared endpoint")
            if e.ends[0] == e.ends[1]:
                raise InputError(f"edge {e.id!r} is a loop; loops are not supported")

        self.vertices = vs
        self.edges = tuple(es)
        self._vset = vset
        self._edge_by_id = {e.id: e for e in self.edges}
        adj: dict[str, list[Edge]] = {v: [] for v in vs}
        for e in self.edges:
            adj[e.ends[0]].append(e)
            adj[e.ends[1]].append(e)
        self._adj = adj
        self._cache: dict = {}

        if vs and not self._is_connected(vset):
            raise InputError("graph is not connected")

    # -- basic queries ----------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._vset

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_by_id[eid]
        except KeyError:
            raise InputError(f"unknown edge id {eid!r}") from None

    def incident_edges(self, v: str) -> tuple[Edge, ...]:
        self.check_vertices([v])
        return tuple(self._adj[v])

    def valence(self, v: str) -> int:
        self.check_vertices([v])
        return len(self._adj[v])

    def check_vertices(self, vs: Iterable[str]):
        for v in vs:
            if v not in self._vset:
                raise InputError(f"unknown vertex id {v!r}")

    def vertex_set(self, vs: Iterable[str]) -> frozenset[str]:
        s = frozenset(vs)
        self.check_vertices(s)
        return s

    def complement(self, vs: Iterable[str]) -> frozenset[str]:
        return self._vset - self.vertex_set(vs)

    def sorted_vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices))

    def _is_connected(self, within: frozenset[str]) -> bool:
        start = next(iter(within))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in self._adj[v]:
                w = e.other_end(v)
                if w in within and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(within)

    def is_bridge(self, eid: str) -> bool:
        e = self.edge(eid)
        if len(self.vertices) == 1:
            return False
        seen = {e.ends[0]}
        stack = [e.ends[0]]
        while stack:
            v = stack.pop()
            for f in self._adj[v]:
                if f.id == eid:
                    continue
                w = f.other_end(v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return e.ends[1] not in seen

    def __repr__(self):
        return f"MultiGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


# -- subset operations ----------------------------------------------------


def boundary_edges(g: MultiGraph, v: Iterable[str], w: Iterable[str]) -> frozenset[str]:
    """Edge ids with one endpoint in ``v`` and the other in ``w``."""
    vs = g.vertex_set(v)
    ws = g.vertex_set(w)
    out = set()
    for e in g.edges:
        a, b = e.ends
        if (a in vs and b in ws) or (a in ws and b in vs):
            out.add(e.id)
    return frozenset(out)


def delta(g: MultiGraph, y: Iterable[str]) -> int:
    """Number of edges between ``y`` and its complement."""
    ys = g.vertex_set(y)
    n = 0
    for e in g.edges:
        if (e.ends[0] in ys) != (e.ends[1] in ys):
            n += 1
    return n


def is_connected_induced(g: MultiGraph, v: Iterable[str]) -> bool:
    """Whether the subgraph induced on ``v`` is connected.  Empty sets are
    rejected; the caller owns that convention."""
    vs = g.vertex_set(v)
    if not vs:
        raise InputError("connectivity of the empty set is undefined here")
    return g._is_connected(vs)


# -- subdivision -----------------------------------------------------------


class Subdivision:
    """A refinement of ``base`` together with the back-map of edges.

    ``edge_map`` sends each derived edge id to the base edge it subdivides;
    ``positions`` sends each inserted vertex to ``(base_edge_id, k)`` where
    ``k`` counts from the base edge's source (``1 .. n_e``).
    """

    def __init__(self, base: MultiGraph, derived: MultiGraph,
                 edge_map: Mapping[str, str],
                 positions: Mapping[str, tuple[str, int]],
                 counts: Mapping[str, int]):
        self.base = base
        self.derived = derived
        self.edge_map = dict(edge_map)
        self.positions = dict(positions)
        self.counts = dict(counts)
        self._vertex_at = {}
        for e in base.edges:
            n = self.counts[e.id] + 1
            self._vertex_at[(e.id, 0)] = e.ends[0]
            self._vertex_at[(e.id, n)] = e.ends[1]
        for v, (eid, k) in self.positions.items():
            self._vertex_at[(eid, k)] = v

    def vertex_at(self, base_edge: str, k: int) -> str:
        """Derived vertex sitting at position ``k`` of ``base_edge``
        (0 = source, n = target)."""
        try:
            return self._vertex_at[(base_edge, k)]
        except KeyError:
            raise InputError(
                f"no subdivision vertex at position {k} of edge {base_edge!r}") from None

    def fibers(self) -> dict[str, list[str]]:
        """Base edge id -> derived edge ids over it, ordered from the source."""
        out: dict[str, list[str]] = {e.id: [] for e in self.base.edges}
        for de in self.derived.edges:
            out[self.edge_map[de.id]].append(de.id)
        return out


def subdivide(g: MultiGraph, counts: Mapping[str, int]) -> Subdivision:
    """Insert ``counts[e]`` vertices in the interior of each edge ``e``.

    Inserted vertices are named ``"<edge>@<k>"`` and derived edges
    ``"<edge>#<k>"``, both counted from the edge's source.  With all counts
    zero the base graph itself is returned (identity subdivision).
    """
    for eid, n in counts.items():
        g.edge(eid)
        if n < 0:
            raise InputError("insertion counts must be nonnegative")
    full = {e.id: int(counts.get(e.id, 0)) for e in g.edges}
    if all(n == 0 for n in full.values()):
        return Subdivision(g, g, {e.id: e.id for e in g.edges}, {}, full)

    vertices = list(g.vertices)
    edges = []
    positions = {}
    edge_map = {}
    for e in g.edges:
        n = full[e.id]
        chain = [e.ends[0]]
        for k in range(1, n + 1):
            v = f"{e.id}@{k}"
            if g.has_vertex(v):
                raise InputError(
                    f"subdivision vertex name {v!r} collides with an existing vertex")
            vertices.append(v)
            positions[v] = (e.id, k)
            chain.append(v)
        chain.append(e.ends[1])
        for k in range(n + 1):
            deid = f"{e.id}#{k}" if n else e.id
            edges.append((deid, chain[k], chain[k + 1]))
            edge_map[deid] = e.id
    derived = MultiGraph(vertices, edges)
    return Subdivision(g, derived, edge_map, positions, full)


def subdivide_uniform(g: MultiGraph, n: int) -> Subdivision:
    """Replace every edge by a path of ``n`` edges.  ``n = 1`` is the identity."""
    if n < 1:
        raise InputError("subdivision factor must be >= 1")
    return subdivide(g, {e.id: n - 1 for e in g.edges})


# -- relabeling ------------------------------------------------------------


def relabel(g: MultiGraph, vertex_map: Mapping[str, str],
            edge_map: Mapping[str, str] | None = None) -> MultiGraph:
    """Rename vertices (and optionally edges) through a bijection."""
    if set(vertex_map) != set(g.vertices) or len(set(vertex_map.values())) != len(g.vertices):
        raise InputError("vertex_map must be a bijection on the vertex set")
    em = dict(edge_map) if edge_map else {e.id: e.id for e in g.edges}
    return MultiGraph(
        [vertex_map[v] for v in g.vertices],
        [(em[e.id], vertex_map[e.ends[0]], vertex_map[e.ends[1]]) for e in g.edges],
    )


# -- JSON ------------------------------------------------------------------


def graph_from_json(data) -> MultiGraph:
    """Parse ``{"vertices": [...], "edges": [{"id": ..., "ends": [u, v]}]}``.

    Edge ids may be omitted on input; missing ones are auto-assigned
    ``"e0", "e1", ...`` by position.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed graph JSON: {exc}") from None
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise InputError('graph JSON needs "vertices" and "edges" keys')
    edges = []
    for i, entry in enumerate(data["edges"]):
        if isinstance(entry, dict):
            ends = entry.get("ends")
            eid = entry.get("id", f"e{i}")
        else:
            ends = entry
            eid = f"e{i}"
        if not isinstance(ends, (list, tuple)) or len(ends) != 2:
            raise InputError(f'edge #{i} needs an "ends" pair')
        edges.append((eid, ends[0], ends[1]))
    return MultiGraph(data["vertices"], edges)


def graph_to_json(g: MultiGraph) -> dict:
    return {
        "vertices": list(g.sorted_vertices()),
        "edges": [
            {"id": e.id, "ends": [e.ends[0], e.ends[1]]}
            for e in sorted(g.edges, key=lambda e: e.id)
        ],
    }
