"""Irreducible components of length fibers: product formula and classifiers.

The component number of a sparse graph is the product of the realization
counts of its max-tight parts.  Two compatible realizations lie in the
same component exactly when every part admits a direct isometry matching
their restrictions, which gives a cheap classifier; monodromy loops in
slice space give an independent grouping of witness points that can only
merge classes, so agreement of the two methods brackets the true count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import EdgeLengths, Graph, Realization, ValidationError, realization_residual
from .homotopy import TrackingError, track_between
from .isometry import Transformation, fit_direct_isometry
from .solver import (CertificationError, SolutionSet, _derived_seed, _seed_stream,
                     count_realizations, witness_points)
from .sparsity import TightDecomposition, is_sparse, max_tight_decomposition
from .systems import build_pinned_system, random_affine_slices
from .util import parallel_map

COMPAT_TOL = 1e-6
MONODROMY_TOL = 1e-6


@dataclass
class ComponentReport:
    """Product-formula result: per-part counts and their product."""

    decomposition: TightDecomposition | None
    per_part_counts: list[int]
    component_number: int
    fiber_dimension: int        # 2|V| - |E|, the unpinned fiber dimension
    sparse: bool


@dataclass
class ComponentLabel:
    """Evidence that a realization belongs to component class ``class_id``."""

    part_transformations: dict[int, Transformation] = field(default_factory=dict)
    class_id: int = -1


@dataclass
class SameComponentResult:
    """Boolean answer plus the per-part isometries that witness it."""

    matched: bool
    part_transformations: dict[int, Transformation]
    failed_parts: list[int]

    def __bool__(self) -> bool:
        return self.matched


def component_number(g: Graph, seed: int) -> ComponentReport:
    """Number of irreducible components of the fiber, for general lengths.

    A graph that is not sparse has empty general fiber: component number
    0.  Otherwise the number is the product over max-tight parts of their
    realization counts; single vertices and single edges contribute 1
    without any solving.
    """
    fiber_dim = 2 * g.n_vertices - g.n_edges
    if not is_sparse(g):
        return ComponentReport(None, [], 0, fiber_dim, False)
    dec = max_tight_decomposition(g)

    def count_part(indexed):
        i, part = indexed
        if part.n_vertices <= 2:
            return 1
        return count_realizations(part, _derived_seed(seed, 100 + i))

    counts = parallel_map(count_part, enumerate(dec.part_graphs(g)))
    number = 1
    for c in counts:
        number *= c
    return ComponentReport(dec, counts, number, fiber_dim, True)


def _check_compatible(g: Graph, lengths: EdgeLengths, r: Realization, name: str):
    residual = realization_residual(g, lengths, r.points)
    if residual > COMPAT_TOL:
        raise ValidationError(
            "realization %s is not compatible with the lengths "
            "(residual %.2e > %.0e)" % (name, residual, COMPAT_TOL))


def same_component(g: Graph, lengths: EdgeLengths, r: Realization,
                   s: Realization) -> SameComponentResult:
    """Do r and s lie in the same irreducible component of the fiber?

    True exactly when every max-tight part admits a direct isometry
    matching the two restrictions; single-vertex parts match by a
    translation.  Raises ValidationError when either realization fails to
    satisfy the lengths within tolerance.
    """
    _check_compatible(g, lengths, r, "r")
    _check_compatible(g, lengths, s, "s")
    dec = max_tight_decomposition(g)
    transformations: dict[int, Transformation] = {}
    failed: list[int] = []
    for i, (vs, _) in enumerate(dec.parts):
        if len(vs) == 1:
            w = next(iter(vs))
            dx = s.points[w][0] - r.points[w][0]
            dy = s.points[w][1] - r.points[w][1]
            transformations[i] = Transformation(1.0, 0.0, dx, dy)
            continue
        t = fit_direct_isometry(r, s, vs)
        if t is None:
            failed.append(i)
        else:
            transformations[i] = t
    return SameComponentResult(not failed, transformations, failed)


def classify_witnesses(g: Graph, lengths: EdgeLengths,
                       ws: SolutionSet) -> list[ComponentLabel]:
    """Partition witness points into component classes.

    Each point is compared against one representative per known class via
    same_component; the first match wins, otherwise a new class opens.
    """
    labels: list[ComponentLabel] = []
    representatives: list[Realization] = []
    for sol in ws.solutions:
        assigned = None
        for class_id, rep in enumerate(representatives):
            result = same_component(g, lengths, rep, sol)
            if result:
                assigned = ComponentLabel(result.part_transformations, class_id)
                break
        if assigned is None:
            representatives.append(sol)
            assigned = ComponentLabel({}, len(representatives) - 1)
        labels.append(assigned)
    return labels


def class_sizes(labels: list[ComponentLabel]) -> list[int]:
    sizes: dict[int, int] = {}
    for label in labels:
        sizes[label.class_id] = sizes.get(label.class_id, 0) + 1
    return [sizes[k] for k in sorted(sizes)]


def equal_degree_check(g: Graph, lengths: EdgeLengths, seed: int) -> bool:
    """Every component class receives equally many points on two lines.

    Slices the one-dimensional pinned fiber with two independently drawn
    random lines, classifies both witness sets, matches the classes across
    the runs via same_component on representatives, and compares counts.
    """
    ws_a = witness_points(g, lengths, 1, _derived_seed(seed, 50))
    ws_b = witness_points(g, lengths, 1, _derived_seed(seed, 51))
    labels_a = classify_witnesses(g, lengths, ws_a)
    labels_b = classify_witnesses(g, lengths, ws_b)

    reps_a: dict[int, Realization] = {}
    for sol, label in zip(ws_a.solutions, labels_a):
        reps_a.setdefault(label.class_id, sol)
    reps_b: dict[int, Realization] = {}
    for sol, label in zip(ws_b.solutions, labels_b):
        reps_b.setdefault(label.class_id, sol)
    if len(reps_a) != len(reps_b):
        return False

    counts_a = {cid: sum(1 for l in labels_a if l.class_id == cid) for cid in reps_a}
    counts_b = {cid: sum(1 for l in labels_b if l.class_id == cid) for cid in reps_b}
    matched_b: set[int] = set()
    for cid_a, rep_a in reps_a.items():
        match = None
        for cid_b, rep_b in reps_b.items():
            if cid_b in matched_b:
                continue
            if same_component(g, lengths, rep_a, rep_b):
                match = cid_b
                break
        if match is None:
            return False
        matched_b.add(match)
        if counts_a[cid_a] != counts_b[match]:
            return False
    return True


def monodromy_orbits(g: Graph, lengths: EdgeLengths, ws: SolutionSet, seed: int,
                     loops: int = 12) -> list[list[int]]:
    """Group witness points by monodromy loops in slice space.

    Each loop tracks the witness set around a triangle of slices
    L0 -> L1 -> L2 -> L0 and reads off the induced permutation; indices
    that exchange lie on one irreducible component, so orbits can only
    merge classes, never split them.  A circuit that loses a path is
    discarded and replaced (each completed circuit certifies itself by
    returning the witness set, so skipping a broken one cannot corrupt
    the result); a completed circuit that does not return the witness
    set raises CertificationError.
    """
    if ws.slices is None or ws.pinned_edge is None:
        raise ValidationError("monodromy needs a witness SolutionSet with stored slices")
    system = build_pinned_system(g, lengths, ws.pinned_edge)
    points = ws.points_matrix(system)
    n_points = len(points)
    if n_points == 0:
        return []
    base = system.quadratics.appended(ws.slices)
    n_slices = ws.slices.n_equations

    parent = list(range(n_points))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    completed = 0
    for attempt in range(2 * loops):
        if completed >= loops:
            break
        rng = np.random.default_rng(_seed_stream(seed, 40, attempt))
        stations = [base]
        for _ in range(2):
            rows = random_affine_slices(system.n_unknowns, n_slices, rng,
                                        ws.slice_columns)
            stations.append(system.quadratics.appended(rows))
        stations.append(base)
        current = points.copy()
        try:
            for leg in range(3):
                current = track_between(stations[leg], stations[leg + 1],
                                        current,
                                        _seed_stream(seed, 41, attempt, leg))
        except TrackingError:
            continue
        permutation = _match_permutation(points, current)
        if permutation is None:
            raise CertificationError(
                "monodromy circuit %d did not return the witness set" % attempt)
        for i, j in enumerate(permutation):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
        completed += 1
    if completed < loops:
        raise CertificationError(
            "only %d of %d monodromy circuits completed" % (completed, loops))

    orbits: dict[int, list[int]] = {}
    for i in range(n_points):
        orbits.setdefault(find(i), []).append(i)
    return sorted((sorted(members) for members in orbits.values()),
                  key=lambda orbit: orbit[0])


def _match_permutation(points: np.ndarray, arrived: np.ndarray):
    """Index permutation p with arrived[i] = points[p[i]], or None."""
    dist = np.abs(arrived[:, None, :] - points[None, :, :]).max(axis=2)
    permutation = []
    used = set()
    for i in range(len(points)):
        j = int(np.argmin(dist[i]))
        if dist[i, j] > MONODROMY_TOL or j in used:
            return None
        used.add(j)
        permutation.append(j)
    return permutation


__all__ = [
    "ComponentReport", "ComponentLabel", "SameComponentResult",
    "component_number", "same_component", "classify_witnesses", "class_sizes",
    "equal_degree_check", "monodromy_orbits", "COMPAT_TOL", "MONODROMY_TOL",
]
