"""Solution sets of pinned systems: counting, certification, witness points.

Counting runs are certified by an independent repeat with fresh randomness
(new length sample, new gamma, and a different pinned edge whenever the
graph has one); witness runs are certified by re-tracking with a second
gamma and matching the endpoint sets.  Disagreement raises
CertificationError: a count is either reproduced or refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import (Edge, EdgeLengths, Graph, Realization, ValidationError,
                     check_lengths_domain, sample_lengths)
from .homotopy import (CLUSTER_TOL, TrackingError, cluster_endpoints,
                       match_point_sets, newton_refine, track)
from .sparsity import is_sparse, is_tight
from .systems import (PinnedSystem, QuadraticSystem, build_pinned_system,
                      random_affine_slices)
from .util import parallel_map


class CertificationError(RuntimeError):
    """Independent numeric runs disagreed; the result cannot be trusted."""


@dataclass
class SolutionSet:
    """Distinct isolated solutions of a (possibly sliced) pinned system.

    Witness runs carry the slice rows they were computed with (and the
    coordinate support of those rows), so monodromy loops can start from
    the same sliced system.
    """

    solutions: list[Realization]
    count: int
    seed: int
    certification: dict = field(default_factory=dict)
    pinned_edge: Edge | None = None
    slices: QuadraticSystem | None = None
    slice_columns: list[int] | None = None

    def points_matrix(self, system: PinnedSystem) -> np.ndarray:
        return np.array([system.vector_from_realization(r) for r in self.solutions],
                        dtype=complex).reshape(len(self.solutions), system.n_unknowns)


def _seed_stream(seed: int, purpose: int, *rest: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(purpose, *rest))


def count_bound(n_vertices: int) -> int:
    """Upper bound binom(2n-4, n-2) on the realization count."""
    n = n_vertices
    return math.comb(2 * n - 4, n - 2)


def solve_pinned(system: PinnedSystem, seed: int) -> SolutionSet:
    """All isolated complex solutions of a square pinned system."""
    if system.n_equations != system.n_unknowns:
        raise ValidationError(
            "pinned system is not square (%d equations, %d unknowns); "
            "only tight graphs give square systems"
            % (system.n_equations, system.n_unknowns))
    result = track(system.quadratics, _seed_stream(seed, 0))
    reps, separation = cluster_endpoints(result.endpoints)
    solutions = [system.realization_from_vector(z) for z in reps]
    residual_max = max((r.max_residual for r in solutions), default=0.0)
    certification = {
        "paths": result.paths,
        "diverged": result.diverged,
        "residual_max": residual_max,
        "min_separation": separation,
        "certified": bool(residual_max < 1e-10),
    }
    return SolutionSet(solutions, len(solutions), seed, certification)


def _pinned_edge_choices(g: Graph) -> tuple[Edge, Edge]:
    """Primary and certification pinned edges (distinct when possible)."""
    edges = g.sorted_edges()
    primary = g.base_edge if g.base_edge is not None else edges[0]
    for e in edges:
        if e != primary:
            return primary, e
    return primary, primary


@dataclass
class CountReport:
    """Realization count with the evidence behind it."""

    c: int
    paths: int                 # homotopy paths tracked in each certifying run
    certified: bool
    pinned_edges: tuple[Edge, Edge] | None = None


def count_report(g: Graph, seed: int,
                 lengths: EdgeLengths | None = None) -> CountReport:
    """The number of realizations of a tight graph modulo direct isometries.

    Computed as the solution count of the pinned system for a random
    general rational length sample, then reproduced with an independent
    sample, gamma, and pinned edge.  Passing ``lengths`` fixes the length
    assignment for both runs instead of sampling.
    """
    if g.n_vertices < 2:
        raise ValidationError("realization counting needs at least 2 vertices")
    if not is_tight(g):
        raise ValidationError("realization counting is defined for tight graphs only")
    if lengths is not None:
        check_lengths_domain(lengths, g)
    if g.n_vertices == 2:
        return CountReport(1, 0, True)
    edge_a, edge_b = _pinned_edge_choices(g)
    bound = count_bound(g.n_vertices)

    def one_run(run_edge):
        run, edge = run_edge
        lam = lengths if lengths is not None \
            else sample_lengths(g, _derived_seed(seed, 10 + run))
        system = build_pinned_system(g, lam, edge)
        solset = solve_pinned(system, _derived_seed(seed, 20 + run))
        if not solset.certification["certified"]:
            raise CertificationError("residuals above tolerance in counting run %d" % run)
        if solset.count > bound:
            raise CertificationError(
                "count %d exceeds the bound %d; clustering failure suspected"
                % (solset.count, bound))
        return solset

    runs = parallel_map(one_run, enumerate((edge_a, edge_b)))
    counts = [s.count for s in runs]
    if counts[0] != counts[1]:
        raise CertificationError(
            "realization counts disagree across independent runs: %r" % (counts,))
    paths = max(s.certification["paths"] for s in runs)
    return CountReport(counts[0], paths, True, (edge_a, edge_b))


def count_realizations(g: Graph, seed: int) -> int:
    """Certified realization count; see count_report for the evidence."""
    return count_report(g, seed).c


def _derived_seed(seed: int, purpose: int) -> int:
    return int(_seed_stream(seed, purpose).generate_state(1, dtype=np.uint64)[0])


_SLICE_ATTEMPTS = 6


def witness_points(g: Graph, lengths: EdgeLengths, n_slices: int, seed: int,
                   slice_vertices=None) -> SolutionSet:
    """Witness points of the pinned fiber: slice with random lines and solve.

    ``n_slices`` must equal the fiber dimension of the pinned system.  When
    the fiber is a curve and the graph declares a coupler vertex, the slice
    is by default a random line in the coupler plane, so the witness count
    is the coupler multiplicity times the coupler curve degree; pass
    ``slice_vertices="all"`` for a slice supported on every coordinate (the
    degree of the fiber itself), or a vertex list for any other support.

    The run is certified by re-tracking with an independent gamma and
    matching the two endpoint sets exactly; every witness point must reach
    residual 1e-10.  A slice whose intersections land too far out for that
    residual to be reachable in double precision is discarded and redrawn
    (deterministically from the seed); the witness count does not depend on
    the choice of line.
    """
    if not is_sparse(g):
        raise ValidationError("witness points are defined for sparse graphs only")
    primary, _ = _pinned_edge_choices(g)
    system = build_pinned_system(g, lengths, primary)
    expected = system.fiber_dimension()
    if n_slices != expected:
        raise ValidationError(
            "n_slices=%d does not match the pinned fiber dimension %d"
            % (n_slices, expected))
    if slice_vertices is None and n_slices == 1 and g.coupler_vertex is not None:
        slice_vertices = [g.coupler_vertex]
    cols = None
    if slice_vertices is not None and slice_vertices != "all":
        cols = system.coordinate_indices(slice_vertices)
        if len(cols) < 1:
            raise ValidationError("slice vertices contribute no unknowns")

    failure = None
    for attempt in range(_SLICE_ATTEMPTS):
        rng = np.random.default_rng(_seed_stream(seed, 1, attempt))
        slices = random_affine_slices(system.n_unknowns, n_slices, rng, cols)
        sliced = system.quadratics.appended(slices)
        try:
            solset = _certified_witness_run(system, sliced, seed, attempt)
        except (CertificationError, TrackingError) as exc:
            failure = exc
            continue
        solset.pinned_edge = primary
        solset.slices = slices
        solset.slice_columns = cols
        return solset
    raise CertificationError(
        "witness runs failed on %d independent slices: %s"
        % (_SLICE_ATTEMPTS, failure))


def _certified_witness_run(system: PinnedSystem, sliced, seed: int,
                           attempt: int) -> SolutionSet:
    runs = []
    for run in range(2):
        result = track(sliced, _seed_stream(seed, 30 + run, attempt))
        reps, separation = cluster_endpoints(result.endpoints)
        runs.append((result, reps, separation))
    if not match_point_sets(runs[0][1], runs[1][1]):
        raise CertificationError(
            "witness point sets disagree across independent gammas "
            "(%d vs %d points)" % (len(runs[0][1]), len(runs[1][1])))

    result, reps, separation = runs[0]
    solutions = [system.realization_from_vector(z) for z in reps]
    residual_max = max((r.max_residual for r in solutions), default=0.0)
    if residual_max >= 1e-10:
        raise CertificationError("witness point residuals above tolerance")
    certification = {
        "paths": result.paths,
        "diverged": result.diverged,
        "residual_max": residual_max,
        "min_separation": separation,
        "runs": 2,
        "slice_attempt": attempt,
        "certified": True,
    }
    return SolutionSet(solutions, len(solutions), seed, certification)


def refine_on_system(system: PinnedSystem, extra, points: np.ndarray) -> np.ndarray:
    """Newton-polish points on the system (optionally with extra equations)."""
    target = system.quadratics if extra is None else system.quadratics.appended(extra)
    refined, ok = newton_refine(target, points)
    if not ok.all():
        raise CertificationError("refinement failed on %d points" % int((~ok).sum()))
    return refined


__all__ = [
    "CertificationError", "SolutionSet", "solve_pinned", "count_realizations",
    "witness_points", "count_bound", "CLUSTER_TOL",
]
