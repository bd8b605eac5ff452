"""Graphs, exact edge lengths, and realizations.

The graph model is deliberately small: simple undirected graphs with
non-negative integer vertex labels, stored immutably with canonical
(min, max) edge tuples.  Two optional labels give a graph linkage
structure: a base edge (conventionally {1,2}) that gets pinned during
solving, and a coupler vertex (conventionally 0) whose locus is the
coupler curve.

Edge length assignments are exact rationals (squared lengths).  They are
sampled reproducibly from a seed or read from a JSON file with "p/q"
strings keyed by canonical "u-v" edge names.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

Edge = tuple[int, int]


class ValidationError(ValueError):
    """Invalid input: malformed files, broken invariants, bad preconditions."""


def edge_key(u: int, v: int) -> Edge:
    """Canonical form of an undirected edge."""
    if u == v:
        raise ValidationError("loop edge (%d, %d) is not allowed" % (u, v))
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph with optional linkage labels.

    ``vertices`` and ``edges`` are stored as frozensets; edges are
    canonical (min, max) tuples.  Construction validates all invariants.
    """

    vertices: frozenset[int]
    edges: frozenset[Edge]
    base_edge: Edge | None = None
    coupler_vertex: int | None = None

    def __post_init__(self) -> None:
        for v in self.vertices:
            if not isinstance(v, int) or v < 0:
                raise ValidationError("vertex labels must be non-negative integers, got %r" % (v,))
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValidationError("loop edge %r is not allowed" % (e,))
            if e != edge_key(u, v):
                raise ValidationError("edge %r is not in canonical (min, max) form" % (e,))
            if u not in self.vertices or v not in self.vertices:
                raise ValidationError("edge %r has an endpoint outside the vertex set" % (e,))
        if self.base_edge is not None and self.base_edge not in self.edges:
            raise ValidationError("base edge %r is not an edge of the graph" % (self.base_edge,))
        if self.coupler_vertex is not None and self.coupler_vertex not in self.vertices:
            raise ValidationError("coupler vertex %r is not a vertex of the graph" % (self.coupler_vertex,))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: int) -> list[int]:
        out = [u + w - v for (u, w) in self.edges if v in (u, w)]
        return sorted(out)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        return {v: sorted(ns) for v, ns in adj.items()}

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        """A copy with extra edges (endpoints may introduce new vertices)."""
        new_edges = set(self.edges)
        new_vertices = set(self.vertices)
        for u, v in extra:
            e = edge_key(u, v)
            new_edges.add(e)
            new_vertices.update(e)
        return Graph(frozenset(new_vertices), frozenset(new_edges),
                     self.base_edge, self.coupler_vertex)

    def without_edge(self, e: Edge) -> "Graph":
        e = edge_key(*e)
        base = self.base_edge if self.base_edge != e else None
        return Graph(self.vertices, self.edges - {e}, base, self.coupler_vertex)


def make_graph(vertices: Iterable[int], edges: Iterable[Iterable[int]],
               base_edge: Iterable[int] | None = None,
               coupler_vertex: int | None = None) -> Graph:
    """Build a validated Graph from loose iterables, canonicalizing edges."""
    vset = frozenset(int(v) for v in vertices)
    eset = set()
    for e in edges:
        pair = tuple(e)
        if len(pair) != 2:
            raise ValidationError("edge %r does not have exactly two endpoints" % (e,))
        ek = edge_key(int(pair[0]), int(pair[1]))
        if ek in eset:
            raise ValidationError("duplicate edge %r" % (ek,))
        eset.add(ek)
    be = None
    if base_edge is not None:
        b = tuple(base_edge)
        if len(b) != 2:
            raise ValidationError("base_edge must have exactly two endpoints")
        be = edge_key(int(b[0]), int(b[1]))
    cv = None if coupler_vertex is None else int(coupler_vertex)
    return Graph(vset, frozenset(eset), be, cv)


def parse_graph(text: str | bytes) -> Graph:
    """Parse the JSON graph format.

    Expected shape::

        {"vertices": [0, 1, 2], "edges": [[1, 2], [1, 0]],
         "base_edge": [1, 2], "coupler_vertex": 0}

    base_edge and coupler_vertex are optional.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("malformed JSON: %s" % exc) from exc
    if not isinstance(data, dict):
        raise ValidationError("graph JSON must be an object")
    for key in ("vertices", "edges"):
        if key not in data:
            raise ValidationError("graph JSON is missing %r" % key)
    unknown = set(data) - {"vertices", "edges", "base_edge", "coupler_vertex"}
    if unknown:
        raise ValidationError("unknown graph JSON keys: %s" % sorted(unknown))
    return make_graph(data["vertices"], data["edges"],
                      data.get("base_edge"), data.get("coupler_vertex"))


def serialize_graph(g: Graph) -> str:
    """Serialize to the JSON graph format (canonical field and list order)."""
    data: dict = {
        "vertices": g.sorted_vertices(),
        "edges": [list(e) for e in g.sorted_edges()],
    }
    if g.base_edge is not None:
        data["base_edge"] = list(g.base_edge)
    if g.coupler_vertex is not None:
        data["coupler_vertex"] = g.coupler_vertex
    return json.dumps(data, sort_keys=True)


def induced_subgraph(g: Graph, vs: Iterable[int]) -> Graph:
    """The subgraph on ``vs`` with every edge of ``g`` inside ``vs``."""
    vset = frozenset(int(v) for v in vs)
    missing = vset - g.vertices
    if missing:
        raise ValidationError("unknown vertex labels: %s" % sorted(missing))
    edges = frozenset(e for e in g.edges if e[0] in vset and e[1] in vset)
    base = g.base_edge if g.base_edge in edges else None
    coupler = g.coupler_vertex if g.coupler_vertex in vset else None
    return Graph(vset, edges, base, coupler)


# ---------------------------------------------------------------------------
# Catalog of named example graphs (linkage test fixtures).

def _cat(vertices, edges, base=None, coupler=None) -> Graph:
    return make_graph(vertices, edges, base, coupler)


_CATALOG: dict[str, Graph] = {
    # Smallest tight graph on three vertices.
    "triangle": _cat(
        [1, 2, 3],
        [[1, 2], [1, 3], [2, 3]]),
    # Four vertices, five edges; minimally rigid with four realizations.
    "fig_mr": _cat(
        [1, 2, 3, 4],
        [[1, 2], [1, 3], [1, 4], [2, 3], [3, 4]]),
    # Four-bar-with-coupler linkage: a triangle rides on a quadrilateral.
    "fig_coupler": _cat(
        [0, 1, 2, 3, 4],
        [[1, 2], [2, 4], [3, 4], [1, 3], [0, 3], [0, 4]],
        base=[1, 2], coupler=0),
    # Ten vertices, sixteen edges, eight max-tight parts.
    "fig_main1": _cat(
        list(range(10)),
        [[1, 2], [1, 3], [1, 4], [2, 4], [2, 3],
         [1, 7], [5, 7], [3, 5], [5, 6], [4, 6],
         [7, 8], [6, 8], [8, 9], [6, 9], [0, 8], [0, 9]],
        base=[1, 2], coupler=0),
    # Complete bipartite K_{3,3} on {1,4,5} x {0,2,3} minus the edge {1,0}.
    "fig_main2": _cat(
        [0, 1, 2, 3, 4, 5],
        [[1, 2], [1, 3], [2, 5], [0, 5], [3, 5], [2, 4], [0, 4], [3, 4]],
        base=[1, 2], coupler=0),
    # Same graph as fig_coupler in its role as the left factor of a split.
    "fig_split_H": _cat(
        [0, 1, 2, 3, 4],
        [[1, 2], [2, 4], [3, 4], [1, 3], [0, 3], [0, 4]],
        base=[1, 2], coupler=0),
    # The quadrilateral factor glued along {0, 1, 2}.
    "fig_split_C5": _cat(
        [0, 1, 2, 5],
        [[1, 2], [1, 5], [2, 5], [0, 5]],
        base=[1, 2], coupler=0),
    # The union of the two factors above; tight with 24 realizations.
    "fig_split_G": _cat(
        [0, 1, 2, 3, 4, 5],
        [[1, 2], [2, 4], [3, 4], [1, 3], [0, 3], [0, 4],
         [1, 5], [2, 5], [0, 5]],
        base=[1, 2], coupler=0),
    # One revolute arm; coupler multiplicity 1.
    "fig_m_left": _cat(
        [0, 1, 2],
        [[1, 2], [0, 1]],
        base=[1, 2], coupler=0),
    # Arm plus a dangling triangle vertex; coupler multiplicity 2.
    "fig_m_right": _cat(
        [0, 1, 2, 3],
        [[1, 2], [0, 1], [1, 3], [2, 3]],
        base=[1, 2], coupler=0),
    # Four-bar linkage whose coupler point traces circular arcs.
    "fig_real": _cat(
        [0, 1, 2, 3],
        [[1, 2], [0, 1], [2, 3], [0, 3]],
        base=[1, 2], coupler=0),
    # The three basic linkage pieces used by the class axioms.
    "L": _cat(
        [0, 1, 2],
        [[1, 2], [0, 1]],
        base=[1, 2], coupler=0),
    "R": _cat(
        [0, 1, 2],
        [[1, 2], [0, 2]],
        base=[1, 2], coupler=0),
    "C_v": _cat(
        [0, 1, 2, 3],
        [[1, 2], [1, 3], [2, 3], [0, 3]],
        base=[1, 2], coupler=0),
    # K_{2,3}; every max-tight part is a single edge.
    "fig_codim_G": _cat(
        [0, 1, 2, 3, 4],
        [[1, 4], [2, 4], [3, 4], [0, 1], [0, 2], [0, 3]]),
}


def catalog(name: str) -> Graph:
    """Look up a named example graph."""
    try:
        return _CATALOG[name]
    except KeyError:
        raise ValidationError(
            "unknown catalog graph %r (known: %s)" % (name, ", ".join(sorted(_CATALOG)))
        ) from None


def catalog_names() -> list[str]:
    return sorted(_CATALOG)


# ---------------------------------------------------------------------------
# Edge length assignments.

@dataclass(frozen=True)
class EdgeLengths:
    """Exact rational squared lengths, one per edge."""

    values: Mapping[Edge, Fraction]

    def __post_init__(self) -> None:
        for e, val in self.values.items():
            if e != edge_key(*e):
                raise ValidationError("length key %r is not a canonical edge" % (e,))
            if not isinstance(val, Fraction):
                raise ValidationError("length for %r is not an exact rational" % (e,))
            if val == 0:
                raise ValidationError("zero squared length on %r is degenerate" % (e,))

    def __getitem__(self, e: Edge) -> Fraction:
        return self.values[edge_key(*e)]

    def domain(self) -> frozenset[Edge]:
        return frozenset(self.values)

    def as_float(self, e: Edge) -> float:
        return float(self[e])

    def is_real_positive(self) -> bool:
        return all(v > 0 for v in self.values.values())


def check_lengths_domain(lengths: EdgeLengths, g: Graph) -> None:
    if lengths.domain() != g.edges:
        raise ValidationError("length assignment domain does not match the edge set")


def sample_lengths(g: Graph, seed: int, normalize_base: bool = True) -> EdgeLengths:
    """Sample general rational squared lengths, reproducibly from ``seed``.

    Each edge gets an independent uniform num/den ratio with numerator and
    denominator in [1, 1000].  When the graph declares a base edge and
    ``normalize_base`` is set, that edge is fixed to exactly 1.
    """
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    values: dict[Edge, Fraction] = {}
    for e in g.sorted_edges():
        if normalize_base and g.base_edge == e:
            values[e] = Fraction(1)
            continue
        num = int(rng.integers(1, 1001))
        den = int(rng.integers(1, 1001))
        values[e] = Fraction(num, den)
    return EdgeLengths(values)


def parse_lengths(text: str | bytes, g: Graph | None = None) -> EdgeLengths:
    """Parse the JSON lengths format: {"lengths": {"u-v": "p/q", ...}}."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("malformed JSON: %s" % exc) from exc
    if not isinstance(data, dict) or "lengths" not in data or not isinstance(data["lengths"], dict):
        raise ValidationError('lengths JSON must be an object with a "lengths" map')
    values: dict[Edge, Fraction] = {}
    for key, raw in data["lengths"].items():
        parts = key.split("-")
        if len(parts) != 2:
            raise ValidationError("length key %r is not of the form 'u-v'" % key)
        try:
            e = edge_key(int(parts[0]), int(parts[1]))
        except ValueError as exc:
            raise ValidationError("length key %r has non-integer endpoints" % key) from exc
        if key != "%d-%d" % e:
            raise ValidationError("length key %r is not in canonical 'min-max' form" % key)
        try:
            val = Fraction(raw) if isinstance(raw, str) else Fraction(raw)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ValidationError("length value %r for %r is not a rational" % (raw, key)) from exc
        if e in values:
            raise ValidationError("duplicate length key %r" % key)
        values[e] = val
    lengths = EdgeLengths(values)
    if g is not None:
        check_lengths_domain(lengths, g)
    return lengths


def serialize_lengths(lengths: EdgeLengths) -> str:
    data = {"lengths": {"%d-%d" % e: str(lengths.values[e])
                        for e in sorted(lengths.values)}}
    return json.dumps(data, sort_keys=True)


# ---------------------------------------------------------------------------
# Realizations.

Point = tuple[complex, complex]


@dataclass(frozen=True)
class Realization:
    """An assignment of a complex plane point to each vertex."""

    points: Mapping[int, Point]
    max_residual: float = field(default=float("nan"), compare=False)

    def __getitem__(self, v: int) -> Point:
        return self.points[v]

    def domain(self) -> frozenset[int]:
        return frozenset(self.points)


def squared_distance(p: Point, q: Point) -> complex:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def realization_residual(g: Graph, lengths: EdgeLengths, points: Mapping[int, Point]) -> float:
    """Largest |d(r_u, r_v) - lambda_uv| over the edges of ``g``."""
    worst = 0.0
    for e in g.sorted_edges():
        u, v = e
        err = abs(squared_distance(points[u], points[v]) - lengths.as_float(e))
        worst = max(worst, err)
    return worst


def make_realization(g: Graph, lengths: EdgeLengths, points: Mapping[int, Point]) -> Realization:
    if frozenset(points) != g.vertices:
        raise ValidationError("realization domain does not match the vertex set")
    pts = {v: (complex(points[v][0]), complex(points[v][1])) for v in points}
    return Realization(pts, realization_residual(g, lengths, pts))
