"""Pinned distance systems as batched quadratic forms.

Pinning a graph along one edge places its endpoints at (0, 0) and (c, 0)
with c the principal square root of that edge's squared length, leaving
2(|V| - 2) coordinate unknowns and one quadratic equation per remaining
edge.  Every equation (and any affine-linear slice added later) is stored
as a dense symmetric quadratic form

    f_k(z) = z A_k z + B_k z + C_k

so that a whole batch of points can be evaluated with one einsum.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .graphs import Edge, EdgeLengths, Graph, Realization, ValidationError, \
    check_lengths_domain, edge_key, make_realization

Coordinate = tuple[int, str]  # (vertex, "x" | "y")


@dataclass
class QuadraticSystem:
    """m equations in n unknowns, each of total degree <= 2."""

    quad: np.ndarray      # (m, n, n) complex, symmetric in the last two axes
    lin: np.ndarray       # (m, n) complex
    const: np.ndarray     # (m,) complex
    degrees: np.ndarray   # (m,) int, 2 for genuine quadrics, 1 for linear rows

    @property
    def n_equations(self) -> int:
        return self.quad.shape[0]

    @property
    def n_unknowns(self) -> int:
        return self.quad.shape[1]

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Values at a batch of points, shape (batch, n) -> (batch, m)."""
        return (np.einsum("pi,kij,pj->pk", points, self.quad, points, optimize=True)
                + points @ self.lin.T + self.const)

    def jacobian(self, points: np.ndarray) -> np.ndarray:
        """Jacobians at a batch of points, shape (batch, n) -> (batch, m, n)."""
        return 2.0 * np.einsum("kij,pj->pki", self.quad, points, optimize=True) + self.lin

    def appended(self, other: "QuadraticSystem") -> "QuadraticSystem":
        return QuadraticSystem(
            np.concatenate([self.quad, other.quad]),
            np.concatenate([self.lin, other.lin]),
            np.concatenate([self.const, other.const]),
            np.concatenate([self.degrees, other.degrees]),
        )


def empty_system(n_unknowns: int) -> QuadraticSystem:
    return QuadraticSystem(
        np.zeros((0, n_unknowns, n_unknowns), dtype=complex),
        np.zeros((0, n_unknowns), dtype=complex),
        np.zeros((0,), dtype=complex),
        np.zeros((0,), dtype=int),
    )


@dataclass
class PinnedSystem:
    """The square-free data of a pinned graph: unknowns, equations, pins."""

    graph: Graph
    lengths: EdgeLengths
    pinned_edge: Edge
    pin_points: dict[int, tuple[complex, complex]]
    unknowns: list[Coordinate]
    equation_edges: list[Edge]
    quadratics: QuadraticSystem

    @property
    def n_unknowns(self) -> int:
        return len(self.unknowns)

    @property
    def n_equations(self) -> int:
        return len(self.equation_edges)

    def fiber_dimension(self) -> int:
        """Expected dimension of the pinned solution set."""
        return self.n_unknowns - self.n_equations

    def coordinate_indices(self, vertices) -> list[int]:
        """Positions of the given vertices' coordinates among the unknowns."""
        wanted = set(vertices)
        return [i for i, (v, _) in enumerate(self.unknowns) if v in wanted]

    def realization_from_vector(self, z: np.ndarray) -> Realization:
        points: dict[int, tuple[complex, complex]] = dict(self.pin_points)
        for i, (v, axis) in enumerate(self.unknowns):
            x, y = points.get(v, (0j, 0j))
            if axis == "x":
                points[v] = (complex(z[i]), y)
            else:
                points[v] = (x, complex(z[i]))
        return make_realization(self.graph, self.lengths, points)

    def vector_from_realization(self, r: Realization) -> np.ndarray:
        z = np.zeros(self.n_unknowns, dtype=complex)
        for i, (v, axis) in enumerate(self.unknowns):
            z[i] = r[v][0] if axis == "x" else r[v][1]
        return z


def build_pinned_system(g: Graph, lengths: EdgeLengths, pinned_edge: Edge) -> PinnedSystem:
    """Pin ``pinned_edge`` and assemble the remaining distance equations."""
    pinned_edge = edge_key(*pinned_edge)
    if pinned_edge not in g.edges:
        raise ValidationError("pinned edge %r is not an edge of the graph" % (pinned_edge,))
    check_lengths_domain(lengths, g)

    u, v = pinned_edge
    c = cmath.sqrt(complex(lengths.as_float(pinned_edge)))
    pin_points = {u: (0j, 0j), v: (c, 0j)}

    free_vertices = [w for w in g.sorted_vertices() if w not in pinned_edge]
    unknowns: list[Coordinate] = []
    index: dict[Coordinate, int] = {}
    for w in free_vertices:
        for axis in ("x", "y"):
            index[(w, axis)] = len(unknowns)
            unknowns.append((w, axis))

    n = len(unknowns)
    equation_edges = [e for e in g.sorted_edges() if e != pinned_edge]
    m = len(equation_edges)
    quad = np.zeros((m, n, n), dtype=complex)
    lin = np.zeros((m, n), dtype=complex)
    const = np.zeros(m, dtype=complex)

    def term(k: int, a, b) -> None:
        """Add (a - b)^2 to equation k; a, b are coordinate names or constants."""
        a_idx = index.get(a) if isinstance(a, tuple) else None
        b_idx = index.get(b) if isinstance(b, tuple) else None
        if a_idx is not None and b_idx is not None:
            quad[k, a_idx, a_idx] += 1
            quad[k, b_idx, b_idx] += 1
            quad[k, a_idx, b_idx] -= 1
            quad[k, b_idx, a_idx] -= 1
        elif a_idx is not None:
            quad[k, a_idx, a_idx] += 1
            lin[k, a_idx] -= 2 * b
            const[k] += b * b
        elif b_idx is not None:
            quad[k, b_idx, b_idx] += 1
            lin[k, b_idx] -= 2 * a
            const[k] += a * a
        else:
            const[k] += (a - b) ** 2

    for k, (a, b) in enumerate(equation_edges):
        for axis_i, axis in enumerate(("x", "y")):
            ca = (a, axis) if a not in pin_points else pin_points[a][axis_i]
            cb = (b, axis) if b not in pin_points else pin_points[b][axis_i]
            term(k, ca, cb)
        const[k] -= lengths.as_float((a, b))

    quadratics = QuadraticSystem(quad, lin, const, np.full(m, 2, dtype=int))
    return PinnedSystem(g, lengths, pinned_edge, pin_points, unknowns,
                        equation_edges, quadratics)


def random_affine_slices(n_unknowns: int, n_slices: int, rng: np.random.Generator,
                         coordinate_indices: list[int] | None = None) -> QuadraticSystem:
    """Random complex affine-linear equations, optionally on a coordinate subset."""
    cols = list(range(n_unknowns)) if coordinate_indices is None else list(coordinate_indices)
    quad = np.zeros((n_slices, n_unknowns, n_unknowns), dtype=complex)
    lin = np.zeros((n_slices, n_unknowns), dtype=complex)
    const = np.zeros(n_slices, dtype=complex)
    for k in range(n_slices):
        coeffs = rng.normal(size=len(cols)) + 1j * rng.normal(size=len(cols))
        lin[k, cols] = coeffs
        const[k] = rng.normal() + 1j * rng.normal()
    return QuadraticSystem(quad, lin, const, np.full(n_slices, 1, dtype=int))
