"""Calligraph classes, coupler-curve predictions, and curve tracing.

A calligraph is a graph with a declared base edge and coupler vertex
such that joining the coupler vertex to one of the base vertices gives
a tight graph.  Pinning the base edge leaves a one-dimensional family
of realizations, and the coupler vertex sweeps out a plane curve.

The class of a calligraph is an integer triple (a, b, c).  Its bilinear
pairing computes realization counts of glued calligraphs, and for thin
calligraphs it predicts the degree and genus of the coupler curve.  The
*_numeric operations and the tracer recover the same quantities from
witness points, which is what makes the predictions checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .components import component_number, same_component
from .graphs import Edge, EdgeLengths, Graph, Realization, ValidationError, \
    edge_key, make_graph, make_realization, sample_lengths
from .homotopy import cluster_endpoints, track, track_between
from .solver import CertificationError, _derived_seed, _seed_stream, \
    count_realizations, witness_points
from .sparsity import is_tight
from .svgout import curve_plot
from .systems import QuadraticSystem
from .util import parallel_map

PROJECTION_TOL = 1e-6   # coupler projections closer than this coincide
REAL_TOL = 1e-7         # imaginary parts below this count as real
_TRACE_SAMPLES = 720
_REVIVAL_COOLDOWN = 8


@dataclass(frozen=True)
class CalligraphClass:
    """The integer triple (a, b, c) attached to a calligraph."""

    a: int
    b: int
    c: int

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def pair(x, y):
    """The bilinear pairing 2(a1*a2 - b1*b2 - c1*c2) of two triples."""
    a1, b1, c1 = x
    a2, b2, c2 = y
    return 2 * (a1 * a2 - b1 * b2 - c1 * c2)


@dataclass(frozen=True)
class CouplerPrediction:
    """Degree and genus data of the coupler curve of a thin calligraph."""

    calligraph_class: CalligraphClass
    k: int                              # number of irreducible components
    degree_per_component: Fraction      # 2a/k
    total_degree: int                   # 2a
    multiplicity: int                   # m(G); 1 under the thin hypothesis

    def genus_bound(self, n_singular: int = 0):
        """Upper bound for the genus of each component, given |Sing C|."""
        alpha = (Fraction(self.calligraph_class.a, self.k),
                 Fraction(self.calligraph_class.b, self.k),
                 Fraction(self.calligraph_class.c, self.k))
        shifted = (alpha[0] - 2, alpha[1] - 1, alpha[2] - 1)
        value = Fraction(pair(alpha, shifted), 2) + 1 - n_singular
        return int(value) if value.denominator == 1 else value


def prediction_from_class(cls: CalligraphClass, k: int,
                          multiplicity: int = 1) -> CouplerPrediction:
    """Assemble the prediction for a known class and component count."""
    total = 2 * cls.a
    return CouplerPrediction(cls, k, Fraction(total, k), total, multiplicity)


def _roles(g: Graph) -> tuple[int, int, int]:
    """(coupler, first base vertex, second base vertex), labels required."""
    if g.base_edge is None or g.coupler_vertex is None:
        raise ValidationError(
            "calligraph operations need base_edge and coupler_vertex labels")
    v1, v2 = g.base_edge
    v0 = g.coupler_vertex
    if v0 in (v1, v2):
        raise ValidationError("the coupler vertex lies on the base edge")
    return v0, v1, v2


def is_calligraph(g: Graph) -> bool:
    """Does joining the coupler to a base vertex give a tight graph?"""
    v0, v1, v2 = _roles(g)
    if edge_key(v1, v2) not in g.edges or v0 not in g.vertices:
        return False
    for p in (v1, v2):
        e = edge_key(v0, p)
        candidate = g if e in g.edges else g.with_edges([e])
        if is_tight(candidate):
            return True
    return False


def _connected_without(g: Graph, removed) -> bool:
    remaining = [v for v in g.sorted_vertices() if v not in removed]
    if len(remaining) <= 1:
        return True
    adjacency = g.adjacency()
    seen = {remaining[0]}
    stack = [remaining[0]]
    while stack:
        u = stack.pop()
        for nb in adjacency[u]:
            if nb not in removed and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(remaining)


def is_thin(g: Graph) -> bool:
    """Single-edge removals of the doubly joined graph stay tight (when
    there are more than three vertices) and no two vertices disconnect it."""
    if not is_calligraph(g):
        raise ValidationError("thinness is defined for calligraphs")
    v0, v1, v2 = _roles(g)
    h = g.with_edges([edge_key(v0, v1), edge_key(v0, v2)])
    if g.n_vertices > 3:
        for e in h.sorted_edges():
            if not is_tight(h.without_edge(e)):
                return False
    for cut in combinations(h.sorted_vertices(), 2):
        if not _connected_without(h, set(cut)):
            return False
    return True


def _basic_shape(g: Graph, v0: int, v1: int, v2: int) -> CalligraphClass | None:
    """The axiomatic classes of the three basic calligraph shapes."""
    base = edge_key(v1, v2)
    if g.vertices == frozenset({v0, v1, v2}):
        if g.edges == frozenset({base, edge_key(v0, v1)}):
            return CalligraphClass(1, 1, 0)
        if g.edges == frozenset({base, edge_key(v0, v2)}):
            return CalligraphClass(1, 0, 1)
    if g.n_vertices == 4:
        (w,) = g.vertices - {v0, v1, v2}
        shape = frozenset({base, edge_key(v1, w), edge_key(v2, w),
                           edge_key(v0, w)})
        if g.edges == shape:
            return CalligraphClass(2, 0, 0)
    return None


def _union_count(g: Graph, extra_vertices, extra_edges, seed: int) -> int:
    """Realization count of g with extra edges glued on; 0 if not tight."""
    vertices = set(g.vertices) | set(extra_vertices)
    edges = [tuple(e) for e in g.sorted_edges()] + list(extra_edges)
    union = make_graph(vertices, edges, g.base_edge, g.coupler_vertex)
    if not is_tight(union):
        return 0
    return count_realizations(union, seed)


def _exact_half(count: int, what: str, divisor: int) -> int:
    quotient, remainder = divmod(count, divisor)
    if remainder:
        raise CertificationError(
            "count %d of the %s gluing is not divisible by %d"
            % (count, what, divisor))
    return quotient


def class_of(g: Graph, seed: int) -> CalligraphClass:
    """The class (a, b, c), computed by gluing and counting.

    The three basic shapes are answered axiomatically.  Otherwise the
    coupler vertex must be detached from both base vertices, and the
    counts of the three gluings determine the triple: a fresh triangle
    vertex joined to the coupler gives 4a, and joining the coupler to a
    base vertex gives 2(a-b) respectively 2(a-c).  A gluing that is not
    tight contributes count 0.
    """
    v0, v1, v2 = _roles(g)
    if not is_calligraph(g):
        raise ValidationError("class computation needs a calligraph")
    basic = _basic_shape(g, v0, v1, v2)
    if basic is not None:
        return basic
    e01, e02 = edge_key(v0, v1), edge_key(v0, v2)
    for e in (e01, e02):
        if e in g.edges:
            raise ValidationError(
                "class computation needs the coupler vertex detached from "
                "the base vertices, but %r is an edge" % (e,))
    fresh = max(g.vertices) + 1
    count_c = _union_count(
        g, {fresh},
        [edge_key(v1, fresh), edge_key(v2, fresh), edge_key(v0, fresh)],
        _derived_seed(seed, 60))
    count_l = _union_count(g, (), [e01], _derived_seed(seed, 61))
    count_r = _union_count(g, (), [e02], _derived_seed(seed, 62))
    a = _exact_half(count_c, "triangle", 4)
    b = a - _exact_half(count_l, "first base", 2)
    c = a - _exact_half(count_r, "second base", 2)
    return CalligraphClass(a, b, c)


def coupler_prediction(g: Graph, seed: int) -> CouplerPrediction:
    """Degree and genus prediction for the coupler curve of a thin calligraph."""
    if not is_thin(g):
        raise ValidationError("coupler predictions require a thin calligraph")
    cls = class_of(g, _derived_seed(seed, 63))
    k = component_number(g, _derived_seed(seed, 64)).component_number
    if k <= 0 or (2 * cls.a) % k != 0:
        raise CertificationError(
            "component count %d does not divide the total degree %d"
            % (k, 2 * cls.a))
    return prediction_from_class(cls, k, multiplicity=1)


def _group_sizes(points: np.ndarray, tol: float) -> list[int]:
    """Sizes of the clusters of a small point set under max-abs distance."""
    n = len(points)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if np.abs(points[i] - points[j]).max() <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    sizes: dict[int, int] = {}
    for i in range(n):
        sizes[find(i)] = sizes.get(find(i), 0) + 1
    return sorted(sizes.values())


def _line_census(g: Graph, lengths: EdgeLengths, seed: int) -> tuple[int, int]:
    """(multiplicity, coupler-curve degree) from one random line."""
    v0 = g.coupler_vertex
    ws = witness_points(g, lengths, 1, seed)
    projections = np.array([[r.points[v0][0], r.points[v0][1]]
                            for r in ws.solutions], dtype=complex)
    sizes = _group_sizes(projections, PROJECTION_TOL)
    if not sizes:
        raise CertificationError("no witness points above the random line")
    if sizes[0] != sizes[-1]:
        raise CertificationError(
            "fiber sizes above the coupler line are not uniform: %r" % (sizes,))
    return sizes[0], len(sizes)


def _coupler_census(g: Graph, seed: int) -> tuple[int, int]:
    """Multiplicity and degree, cross-checked on two independent lines."""
    if not is_calligraph(g):
        raise ValidationError("coupler operations need a calligraph")
    lengths = sample_lengths(g, _derived_seed(seed, 72))
    first, second = parallel_map(
        lambda purpose: _line_census(g, lengths, _derived_seed(seed, purpose)),
        (70, 71))
    if first != second:
        raise CertificationError(
            "independent coupler lines disagree: %r vs %r" % (first, second))
    return first


def coupler_multiplicity(g: Graph, seed: int) -> int:
    """m(G): the number of pinned realizations above a general coupler point."""
    return _coupler_census(g, seed)[0]


def coupler_degree_numeric(g: Graph, seed: int) -> int:
    """Coupler-curve degree as line intersections divided by multiplicity."""
    return _coupler_census(g, seed)[1]


def _driving_edge(g: Graph, v0: int, v1: int, v2: int) -> Edge:
    """The swept edge: a base vertex and a neighbor tied only to that side."""
    for p in (v1, v2):
        other = v2 if p == v1 else v1
        for w in g.neighbors(p):
            if w in (v1, v2):
                continue
            if edge_key(other, w) in g.edges:
                continue
            return (p, w)
    raise ValidationError(
        "no driving edge: every base neighbor is tied to both base vertices")


def _placed_system(g: Graph, lengths: EdgeLengths, placements, dropped):
    """Distance equations with some vertices placed at fixed points."""
    unknowns: list[tuple[int, str]] = []
    index: dict[tuple[int, str], int] = {}
    for w in g.sorted_vertices():
        if w in placements:
            continue
        for axis in ("x", "y"):
            index[(w, axis)] = len(unknowns)
            unknowns.append((w, axis))
    equation_edges = [e for e in g.sorted_edges() if e not in dropped]
    n, m = len(unknowns), len(equation_edges)
    quad = np.zeros((m, n, n), dtype=complex)
    lin = np.zeros((m, n), dtype=complex)
    const = np.zeros(m, dtype=complex)

    for k, (a, b) in enumerate(equation_edges):
        for axis_i, axis in enumerate(("x", "y")):
            ca = placements[a][axis_i] if a in placements else None
            cb = placements[b][axis_i] if b in placements else None
            if ca is None and cb is None:
                ia, ib = index[(a, axis)], index[(b, axis)]
                quad[k, ia, ia] += 1
                quad[k, ib, ib] += 1
                quad[k, ia, ib] -= 1
                quad[k, ib, ia] -= 1
            elif ca is None:
                ia = index[(a, axis)]
                quad[k, ia, ia] += 1
                lin[k, ia] -= 2 * cb
                const[k] += cb * cb
            elif cb is None:
                ib = index[(b, axis)]
                quad[k, ib, ib] += 1
                lin[k, ib] -= 2 * ca
                const[k] += ca * ca
            else:
                const[k] += (ca - cb) ** 2
        const[k] -= lengths.as_float((a, b))
    return unknowns, QuadraticSystem(quad, lin, const, np.full(m, 2, dtype=int))


@dataclass
class CouplerTrace:
    """Real arcs of a coupler curve, with one class id per arc."""

    chains: list[list[tuple[float, float]]]
    chain_classes: list[int]
    n_classes: int
    n_samples: int
    driving_edge: Edge
    svg: str

    @property
    def points(self) -> list[tuple[float, float]]:
        return [p for chain in self.chains for p in chain]


def _finite_rows(points: np.ndarray) -> np.ndarray:
    if points.shape[1] == 0:
        return np.ones(len(points), dtype=bool)
    return np.isfinite(points).all(axis=1)


def _real_rows(points: np.ndarray) -> np.ndarray:
    if points.shape[1] == 0:
        return np.ones(len(points), dtype=bool)
    finite = _finite_rows(points)
    real = np.zeros(len(points), dtype=bool)
    real[finite] = np.abs(points[finite].imag).max(axis=1) < REAL_TOL
    return real


def coupler_trace(g: Graph, lengths: EdgeLengths, n_samples: int = _TRACE_SAMPLES,
                  seed: int = 0) -> CouplerTrace:
    """Sweep the driving edge through a full turn and draw the real arcs.

    For each sampled angle the driven vertex is placed directly and the
    remaining square subsystem is solved, the first sample from scratch
    and later ones by continuation from their predecessor.  Fully real
    solutions contribute the coupler position to the current arc; a
    branch that loses realness (or is lost by the tracker) breaks its
    arc.  Arcs are joined across the turn boundary, each arc is
    classified by the irreducible component its realizations lie on,
    and the drawing colors arcs by class.
    """
    v0, v1, v2 = _roles(g)
    if not is_calligraph(g):
        raise ValidationError("coupler tracing needs a calligraph")
    if not lengths.is_real_positive():
        raise ValidationError("coupler tracing needs real positive lengths")
    if n_samples < 8:
        raise ValidationError("coupler tracing needs at least 8 samples")
    p, w = _driving_edge(g, v0, v1, v2)
    base_c = math.sqrt(lengths.as_float((v1, v2)).real)
    radius = math.sqrt(lengths.as_float((p, w)).real)
    anchor = {v1: (0.0 + 0j, 0.0 + 0j), v2: (base_c + 0j, 0.0 + 0j)}
    dropped = {edge_key(v1, v2), edge_key(p, w)}

    def system_at(j: int):
        theta = 2.0 * math.pi * j / n_samples
        px, py = anchor[p]
        placements = dict(anchor)
        placements[w] = (px + radius * math.cos(theta),
                         py + radius * math.sin(theta))
        unknowns, quadratics = _placed_system(g, lengths, placements, dropped)
        return placements, unknowns, quadratics

    placements0, unknowns, system0 = system_at(0)
    if len(unknowns) == 0:
        branch_points = [np.zeros((1, 0), dtype=complex)]
        systems = [system0]
        placement_list = [placements0]
        for j in range(1, n_samples):
            placements, _, quadratics = system_at(j)
            branch_points.append(np.zeros((1, 0), dtype=complex))
            systems.append(quadratics)
            placement_list.append(placements)
        closing = np.zeros((1, 0), dtype=complex)
    else:
        result = track(system0, _seed_stream(seed, 80))
        start, _ = cluster_endpoints(result.endpoints)
        if len(start) == 0:
            raise CertificationError("the sweep start system has no solutions")
        branch_points = [start]
        systems = [system0]
        placement_list = [placements0]
        cooldown = 0
        current = start
        previous = system0
        for j in range(1, n_samples):
            placements, _, quadratics = system_at(j)
            alive = _finite_rows(current)
            moved = np.full_like(current, np.nan + 0j)
            if alive.any():
                moved[alive] = track_between(previous, quadratics,
                                             current[alive],
                                             _seed_stream(seed, 81, j),
                                             strict=False)
            dead = ~_finite_rows(moved)
            if dead.any() and cooldown == 0:
                moved, filled = _revive(quadratics, moved,
                                        _seed_stream(seed, 82, j))
                if not filled:
                    cooldown = _REVIVAL_COOLDOWN
            elif cooldown > 0:
                cooldown -= 1
            branch_points.append(moved)
            systems.append(quadratics)
            placement_list.append(placements)
            current, previous = moved, quadratics
        _repair_row_order(branch_points)
        current = branch_points[-1]
        alive = _finite_rows(current)
        closing = np.full_like(current, np.nan + 0j)
        if alive.any():
            closing[alive] = track_between(previous, system0, current[alive],
                                           _seed_stream(seed, 81, n_samples),
                                           strict=False)

    chains, representatives = _assemble_chains(
        g, lengths, branch_points, closing, placement_list, unknowns, v0)
    chain_classes = _classify_chains(g, lengths, representatives)
    n_classes = len(set(chain_classes))
    markers = [(0.0, 0.0), (base_c, 0.0)]
    svg = curve_plot(chains, chain_classes, markers)
    return CouplerTrace(chains, chain_classes, n_classes, n_samples,
                        edge_key(p, w), svg)


def _revive(quadratics, moved: np.ndarray, seed_sequence):
    """Fill lost branch slots with freshly solved, unmatched solutions."""
    from .homotopy import TrackingError
    try:
        fresh, _ = cluster_endpoints(track(quadratics, seed_sequence).endpoints)
    except TrackingError:
        return moved, False
    alive_rows = moved[_finite_rows(moved)]
    unclaimed = []
    for candidate in fresh:
        if alive_rows.size and np.abs(alive_rows - candidate).max(axis=1).min() <= PROJECTION_TOL:
            continue
        unclaimed.append(candidate)
    dead_slots = np.flatnonzero(~_finite_rows(moved))
    filled = False
    for slot, candidate in zip(dead_slots, unclaimed):
        moved[slot] = candidate
        filled = True
    return moved, filled


def _repair_row_order(branch_points) -> None:
    """Restore path identity across samples by nearest-neighbor matching.

    A tracked leg can hop between paths that pass close to each other,
    leaving two rows swapped from that sample on.  Row identity is what
    assigns points to arcs, so each sample's rows are greedily matched
    to the previous sample's (dead rows pair with dead rows); where two
    solutions genuinely collide the assignment is ambiguous but both
    rows are complex there, so the arcs are unaffected.
    """
    if not branch_points or branch_points[0].shape[1] == 0:
        return
    n_branches = len(branch_points[0])
    if n_branches < 2:
        return
    for j in range(1, len(branch_points)):
        prev = branch_points[j - 1]
        cur = branch_points[j]
        finite_prev = _finite_rows(prev)
        finite_cur = _finite_rows(cur)
        gaps = np.full((n_branches, n_branches), np.inf)
        both = np.outer(finite_prev, finite_cur)
        if both.any():
            diff = np.abs(prev[:, None, :] - cur[None, :, :]).max(axis=2)
            gaps[both] = diff[both]
        gaps[np.outer(~finite_prev, ~finite_cur)] = 0.0
        order = np.full(n_branches, -1)
        used_prev = np.zeros(n_branches, dtype=bool)
        used_cur = np.zeros(n_branches, dtype=bool)
        for _ in range(n_branches):
            masked = np.where(np.outer(~used_prev, ~used_cur), gaps, np.inf)
            p, c = np.unravel_index(np.argmin(masked), masked.shape)
            if not np.isfinite(masked[p, c]):
                remaining_p = np.flatnonzero(~used_prev)
                remaining_c = np.flatnonzero(~used_cur)
                order[remaining_p] = remaining_c
                break
            order[p] = c
            used_prev[p] = True
            used_cur[c] = True
        branch_points[j] = cur[order]


def _assemble_chains(g, lengths, branch_points, closing, placement_list,
                     unknowns, v0):
    """Cut branches into real runs, then stitch runs into arcs.

    Two stitches exist.  A run ending at the last sample whose closing
    continuation is real links across the turn boundary into the run it
    lands on.  And when two branches lose realness after the same sample
    they have collided in a fold, so the real curve turns around there:
    their runs are linked end to end (the pairing is by mutual proximity
    among the branches that went complex, which is tolerance-free since
    exactly the folding pair collides).  The stitched port graph is then
    walked, reversing run orientation as needed.
    """
    n_samples = len(branch_points)
    n_branches = len(branch_points[0])

    def coupler_of(j: int, row: np.ndarray) -> tuple[float, float]:
        placements = placement_list[j]
        if v0 in placements:
            zx, zy = placements[v0]
        else:
            zx = row[unknowns.index((v0, "x"))]
            zy = row[unknowns.index((v0, "y"))]
        return (zx.real, zy.real)

    def realization_at(j: int, row: np.ndarray) -> Realization:
        points = dict(placement_list[j])
        for i, (vertex, axis) in enumerate(unknowns):
            x, y = points.get(vertex, (0j, 0j))
            points[vertex] = (row[i], y) if axis == "x" else (x, row[i])
        return make_realization(g, lengths, points)

    real_mask = np.array([_real_rows(pts) for pts in branch_points])

    runs = []          # (branch, start (inclusive), end (inclusive))
    for b in range(n_branches):
        column = real_mask[:, b]
        j = 0
        while j < n_samples:
            if not column[j]:
                j += 1
                continue
            start = j
            while j + 1 < n_samples and column[j + 1]:
                j += 1
            runs.append((b, start, j))
            j += 1

    links: dict[tuple[str, int], tuple[str, int]] = {}

    def connect(p, q):
        links[p] = q
        links[q] = p

    head_of = {}
    for idx, (b, start, end) in enumerate(runs):
        if start == 0:
            head_of[b] = idx

    def is_complex_row(row) -> bool:
        if row.shape[0] == 0:
            return False
        return bool(np.isfinite(row).all()
                    and np.abs(row.imag).max() >= REAL_TOL)

    # Turn-boundary links.
    start_rows = branch_points[0]
    for idx, (b, start, end) in enumerate(runs):
        if end != n_samples - 1:
            continue
        arrived = closing[b]
        if not np.isfinite(arrived).all() or is_complex_row(arrived):
            continue
        if start_rows.shape[1] == 0:
            target = 0
        else:
            gaps = np.abs(start_rows - arrived).max(axis=1)
            target = int(np.argmin(gaps))
            if gaps[target] > PROJECTION_TOL:
                continue
        if target in head_of:
            connect(("t", idx), ("h", head_of[target]))

    # Fold links: group candidate run ends by the sample they end (start)
    # at, then pair the closest candidates until at most one is left.
    tail_folds: dict[int, list[int]] = {}
    head_folds: dict[int, list[int]] = {}
    for idx, (b, start, end) in enumerate(runs):
        if end < n_samples - 1 and is_complex_row(branch_points[end + 1][b]):
            tail_folds.setdefault(end, []).append(idx)
        if start > 0 and is_complex_row(branch_points[start - 1][b]):
            head_folds.setdefault(start, []).append(idx)

    def pair_up(candidates, sample, side):
        while len(candidates) >= 2:
            best = None
            for a_pos in range(len(candidates)):
                for b_pos in range(a_pos + 1, len(candidates)):
                    ra, rb = candidates[a_pos], candidates[b_pos]
                    va = branch_points[sample][runs[ra][0]]
                    vb = branch_points[sample][runs[rb][0]]
                    gap = np.abs(va - vb).max() if va.shape[0] else 0.0
                    if best is None or gap < best[0]:
                        best = (gap, a_pos, b_pos)
            _, a_pos, b_pos = best
            ra, rb = candidates[a_pos], candidates[b_pos]
            connect((side, ra), (side, rb))
            candidates = [c for pos, c in enumerate(candidates)
                          if pos not in (a_pos, b_pos)]

    for sample, candidates in tail_folds.items():
        pair_up(candidates, sample, "t")
    for sample, candidates in head_folds.items():
        pair_up(candidates, sample, "h")

    # Walk the port graph: enter a run at one port, leave at the other,
    # hop the link if present.  Entering at the head means forward.
    visited: set[int] = set()
    chains: list[list[tuple[float, float]]] = []
    representatives: list[Realization] = []
    for first in range(len(runs)):
        if first in visited:
            continue
        entry = ("h", first)
        seen = {first}
        closed_walk = False
        while entry in links:
            neighbor = links[entry]
            if neighbor[1] in seen:
                closed_walk = True
                break
            seen.add(neighbor[1])
            entry = ("t" if neighbor[0] == "h" else "h", neighbor[1])
        points: list[tuple[float, float]] = []
        sequence: list[int] = []
        closed = False
        cursor = entry if not closed_walk else ("h", first)
        while True:
            side, idx = cursor
            visited.add(idx)
            sequence.append(idx)
            b, start, end = runs[idx]
            span = range(start, end + 1) if side == "h" \
                else range(end, start - 1, -1)
            for j in span:
                points.append(coupler_of(j, branch_points[j][b]))
            exit_port = ("t", idx) if side == "h" else ("h", idx)
            link = links.get(exit_port)
            if link is None:
                break
            if link[1] in visited:
                closed = True
                break
            cursor = ("h" if link[0] == "h" else "t", link[1])
        if closed and points:
            points.append(points[0])
        if not points:
            continue
        rb, rstart, rend = runs[sequence[len(sequence) // 2]]
        rmid = (rstart + rend) // 2
        chains.append(points)
        representatives.append(realization_at(rmid, branch_points[rmid][rb]))
    return chains, representatives


def _classify_chains(g, lengths, representatives) -> list[int]:
    class_reps: list[Realization] = []
    labels: list[int] = []
    for r in representatives:
        for cid, rep in enumerate(class_reps):
            if same_component(g, lengths, rep, r):
                labels.append(cid)
                break
        else:
            class_reps.append(r)
            labels.append(len(class_reps) - 1)
    return labels


__all__ = [
    "CalligraphClass", "CouplerPrediction", "CouplerTrace",
    "is_calligraph", "is_thin", "pair", "class_of", "prediction_from_class",
    "coupler_prediction", "coupler_multiplicity", "coupler_degree_numeric",
    "coupler_trace", "PROJECTION_TOL", "REAL_TOL",
]
