"""Total-degree homotopy continuation for small square quadratic systems.

All paths are tracked simultaneously with stacked numpy linear algebra.
The start system is z_k^{d_k} - r_k with random unit-modulus constants r_k,
joined to the target by a random-gamma convex combination.  With s = 1 - t
as the path parameter,

    H(z, s) = gamma s G(z) + (1 - s) F(z),      s: 1 -> 0.

Tracking happens in a random projective patch (coordinates Z = (z0, z),
affine point z / z0, patch . Z = 1) so paths heading to infinity stay
numerically bounded.  Paths advance with an Euler predictor and a short
Newton corrector under per-path adaptive steps; once s is small the step
turns geometric (s -> sigma s), which lets divergent paths drive the
affine norm past the truncation threshold instead of stalling against
floating-point resolution at t = 1.  Finite endpoints get a final Newton
polish on the affine target system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .systems import QuadraticSystem

TRUNCATION_NORM = 1e8       # paths beyond this norm are recorded as divergent
REFINE_TOL = 1e-10          # target residual after the final polish
CLUSTER_TOL = 1e-6          # pairwise distance below which endpoints coincide

_DT_INIT = 0.05
_DT_MIN = 1e-9
_DT_MAX = 0.1
_DT_GROW = 1.7
_DT_SHRINK = 0.35
_CORRECTOR_STEPS = 3
_CORRECTOR_TOL = 1e-9
_MAX_LOOPS = 20000
_ENDGAME_S = 0.1            # switch to geometric stepping below this s = 1 - t
_ENDGAME_S_DONE = 1e-40     # paths still bounded here count as converged
_ENDGAME_SHRINK = 0.4
_ENDGAME_MAX_REJECTS = 60
_SAFE_NORM = 1e4            # beyond this affine norm, follow paths loosely
_SETTLE_S = 1e-6            # earliest s at which a path may settle early
_SETTLE_TOL = 1e-9          # relative move below which a path has settled


class TrackingError(RuntimeError):
    """Path tracking did not converge within the retry budget."""


@dataclass
class TrackingResult:
    endpoints: np.ndarray          # (k, n) refined solutions with small residual
    paths: int                     # number of paths tracked
    diverged: int                  # truncated at large norm
    failed: int                    # stalled or unrefined paths (should be 0)
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _homogenize(system: QuadraticSystem) -> QuadraticSystem:
    """Embed an affine system into coordinates (z0, z1..zn), row-wise.

    Degree-2 rows become homogeneous quadrics, degree-1 rows homogeneous
    linear forms; index 0 is the homogenizing coordinate.  Each row is
    rescaled to unit maximum coefficient so corrector tolerances are
    relative regardless of the size of the length parameters.
    """
    m, n = system.n_equations, system.n_unknowns
    quad = np.zeros((m, n + 1, n + 1), dtype=complex)
    lin = np.zeros((m, n + 1), dtype=complex)
    const = np.zeros(m, dtype=complex)
    for k in range(m):
        if system.degrees[k] == 2:
            quad[k, 1:, 1:] = system.quad[k]
            quad[k, 0, 1:] = system.lin[k] / 2.0
            quad[k, 1:, 0] = system.lin[k] / 2.0
            quad[k, 0, 0] = system.const[k]
        else:
            lin[k, 1:] = system.lin[k]
            lin[k, 0] = system.const[k]
        size = max(np.abs(quad[k]).max(), np.abs(lin[k]).max(), 1e-300)
        quad[k] /= size
        lin[k] /= size
    return QuadraticSystem(quad, lin, const, system.degrees.copy())


def _start_system(degrees: np.ndarray, rng: np.random.Generator) -> tuple[QuadraticSystem, np.ndarray]:
    """Homogeneous start system z_k^{d_k} - r_k z0^{d_k} and its affine roots."""
    n = len(degrees)
    quad = np.zeros((n, n + 1, n + 1), dtype=complex)
    lin = np.zeros((n, n + 1), dtype=complex)
    const = np.zeros(n, dtype=complex)
    roots_per_var = []
    for k in range(n):
        r = np.exp(2j * np.pi * rng.random())
        d = int(degrees[k])
        if d == 2:
            quad[k, k + 1, k + 1] = 1.0
            quad[k, 0, 0] = -r
            base = np.sqrt(r)
            roots_per_var.append([base, -base])
        else:
            lin[k, k + 1] = 1.0
            lin[k, 0] = -r
            roots_per_var.append([r])
    starts = np.array([list(combo) for combo in product(*roots_per_var)], dtype=complex) \
        if n else np.zeros((1, 0), dtype=complex)
    system = QuadraticSystem(quad, lin, const, degrees.copy())
    return system, starts


def _batched_solve(jac: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve jac[p] x[p] = rhs[p] for all p; flag singular batch members."""
    ok = np.isfinite(jac).all(axis=(1, 2)) & np.isfinite(rhs).all(axis=1)
    out = np.zeros_like(rhs)
    try:
        out[ok] = np.linalg.solve(jac[ok], rhs[ok][..., None])[..., 0]
        bad = ~np.isfinite(out).all(axis=1)
        out[bad] = 0.0
        ok &= ~bad
    except np.linalg.LinAlgError:
        for p in np.nonzero(ok)[0]:
            try:
                out[p] = np.linalg.solve(jac[p], rhs[p][:, None])[:, 0]
            except np.linalg.LinAlgError:
                ok[p] = False
    return out, ok


def newton_refine(system: QuadraticSystem, points: np.ndarray, tol: float = REFINE_TOL,
                  max_iter: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Newton-polish a batch of points; returns (points, converged mask)."""
    z = points.copy()
    if z.shape[1] == 0:
        return z, np.ones(len(z), dtype=bool)
    for _ in range(max_iter):
        vals = system.evaluate(z)
        residual = np.abs(vals).max(axis=1)
        live = residual > tol
        if not live.any():
            break
        step, ok = _batched_solve(system.jacobian(z[live]), -vals[live])
        idx = np.nonzero(live)[0]
        z[idx[ok]] += step[ok]
        # Members with singular Jacobians cannot improve; leave them.
        if not ok.any():
            break
    residual = np.abs(system.evaluate(z)).max(axis=1) if len(z) else np.zeros(0)
    finite = np.isfinite(z).all(axis=1)
    return z, (residual <= tol) & finite


def track(target: QuadraticSystem, seed_sequence: np.random.SeedSequence,
          retries: int = 3) -> TrackingResult:
    """Track every total-degree path of the target system.

    The target must be square.  Stalled paths trigger a full re-run with a
    fresh gamma (up to ``retries``); a persistent stall raises TrackingError.
    """
    if target.n_equations != target.n_unknowns:
        raise ValueError("homotopy tracking needs a square system")
    last = None
    for attempt in range(retries):
        rng = np.random.default_rng(seed_sequence.spawn(1)[0])
        result = _track_once(target, rng)
        if result.failed == 0:
            return result
        last = result
    raise TrackingError("path tracking stalled on %d paths after %d attempts"
                        % (last.failed, retries))


def _affine_norm(zz: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        norm = np.abs(zz[:, 1:]).max(axis=1, initial=0.0) / np.abs(zz[:, 0])
    return np.where(np.isfinite(norm), norm, np.inf)


def _advance_paths(h_value, h_jacobian, h_ds, z: np.ndarray):
    """Drive all paths from s = 1 to s = 0 in the projective patch.

    ``h_value(zz, ss)`` / ``h_jacobian(zz, ss)`` evaluate the square
    homotopy (patch row included); ``h_ds(zz)`` is dH/ds without the patch
    row.  Returns (z, failed, truncated) masks over paths.
    """
    paths = len(z)
    s = np.ones(paths)
    dt = np.full(paths, _DT_INIT)
    sigma = np.full(paths, _ENDGAME_SHRINK)
    rejects = np.zeros(paths, dtype=int)
    active = np.ones(paths, dtype=bool)
    failed = np.zeros(paths, dtype=bool)
    truncated = np.zeros(paths, dtype=bool)

    loops = 0
    while active.any():
        loops += 1
        if loops > _MAX_LOOPS:
            failed |= active
            active[:] = False
            break
        idx = np.nonzero(active)[0]
        zz, ss = z[idx], s[idx]
        endgame = ss <= _ENDGAME_S
        step = np.where(endgame, ss * (1.0 - sigma[idx]),
                        np.minimum(dt[idx], ss - _ENDGAME_S))

        # Euler predictor: dZ/ds = -J^{-1} dH/ds, and s decreases by step,
        # so dZ = J^{-1} dH/ds step.  The patch row of H does not depend
        # on s.
        dh_ds = h_ds(zz)
        dh_ds = np.concatenate([dh_ds, np.zeros((len(zz), 1), dtype=complex)], axis=1)
        dz, ok = _batched_solve(h_jacobian(zz, ss), dh_ds * step[:, None])
        z_new = zz + dz
        s_new = ss - step

        # Newton corrector at the advanced parameter value.
        for _ in range(_CORRECTOR_STEPS):
            delta, c_ok = _batched_solve(h_jacobian(z_new, s_new), -h_value(z_new, s_new))
            ok &= c_ok
            z_new += delta
        correction = np.abs(h_value(z_new, s_new)).max(axis=1)
        # Paths far outside the ball of finite solutions are already
        # classified in spirit; follow them loosely until they cross the
        # truncation norm instead of letting the corrector stall.
        slack = 1.0 + np.minimum(_affine_norm(z_new) / _SAFE_NORM, 1e8) ** 2
        scale = (1.0 + np.abs(z_new).max(axis=1) ** 2) * slack
        accept = ok & (correction < _CORRECTOR_TOL * scale) & np.isfinite(z_new).all(axis=1)

        acc = idx[accept]
        z[acc] = z_new[accept]
        s[acc] = s_new[accept]
        p1_acc = idx[accept & ~endgame]
        dt[p1_acc] = np.minimum(dt[p1_acc] * _DT_GROW, _DT_MAX)
        p1_rej = idx[~accept & ~endgame]
        dt[p1_rej] *= _DT_SHRINK
        p2_acc = idx[accept & endgame]
        sigma[p2_acc] = np.maximum(sigma[p2_acc] ** 2, _ENDGAME_SHRINK)
        rejects[p2_acc] = 0
        p2_rej = idx[~accept & endgame]
        sigma[p2_rej] = np.sqrt(sigma[p2_rej])
        rejects[p2_rej] += 1

        stalled = ~accept & ~endgame & (dt[idx] < _DT_MIN)
        exhausted = ~accept & endgame & (rejects[idx] >= _ENDGAME_MAX_REJECTS)
        trunc = _affine_norm(z[idx]) > TRUNCATION_NORM
        done = s[idx] <= _ENDGAME_S_DONE
        # A path deep in the endgame that no longer moves and sits inside
        # the safe ball has reached its (finite) limit; stopping it early
        # keeps the deep endgame cheap for convergent paths.
        move = np.abs(z_new - zz).max(axis=1)
        settled = (accept & endgame & (s_new <= _SETTLE_S)
                   & (move <= _SETTLE_TOL * (1.0 + np.abs(z_new).max(axis=1)))
                   & (_affine_norm(z_new) <= _SAFE_NORM))
        truncated[idx[trunc]] = True
        failed[idx[(stalled | exhausted) & ~trunc]] = True
        active[idx[trunc | done | stalled | exhausted | settled]] = False
    return z, failed, truncated


def _track_once(target: QuadraticSystem, rng: np.random.Generator) -> TrackingResult:
    n = target.n_unknowns
    if n == 0:
        # Nothing to solve: the empty point is the unique solution.
        return TrackingResult(np.zeros((1, 0), dtype=complex), 1, 0, 0, np.zeros(1))

    # Track in a random projective patch so that paths heading to infinity
    # stay bounded: coordinates Z = (z0, z), z affine = z / z0, with the
    # affine patch equation patch . Z = 1 shared by start and target.
    start, affine_starts = _start_system(target.degrees, rng)
    target_h = _homogenize(target)
    patch = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    gamma = np.exp(2j * np.pi * rng.random())
    paths = len(affine_starts)

    z = np.concatenate([np.ones((paths, 1), dtype=complex), affine_starts], axis=1)
    z /= (z @ patch)[:, None]

    def h_value(zz, ss):
        rows = (gamma * ss[:, None] * start.evaluate(zz)
                + (1.0 - ss)[:, None] * target_h.evaluate(zz))
        patch_row = zz @ patch - 1.0
        return np.concatenate([rows, patch_row[:, None]], axis=1)

    def h_jacobian(zz, ss):
        rows = (gamma * ss[:, None, None] * start.jacobian(zz)
                + (1.0 - ss)[:, None, None] * target_h.jacobian(zz))
        patch_rows = np.broadcast_to(patch, (len(zz), 1, n + 1))
        return np.concatenate([rows, patch_rows], axis=1)

    def h_ds(zz):
        return gamma * start.evaluate(zz) - target_h.evaluate(zz)

    z, failed, truncated = _advance_paths(h_value, h_jacobian, h_ds, z)

    # Dehomogenize. Paths whose affine image left the truncation ball are
    # the divergent ones; everything else gets a final affine polish.
    finished = np.nonzero(~failed & ~truncated)[0]
    z0 = z[finished, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        affine = z[finished, 1:] / z0[:, None]
    norms = np.where(np.isfinite(affine).all(axis=1),
                     np.abs(affine).max(axis=1, initial=0.0), np.inf)
    in_ball = norms <= TRUNCATION_NORM
    diverged = int(truncated.sum()) + int((~in_ball).sum())

    refined, converged = newton_refine(target, affine[in_ball])
    norms2 = np.abs(refined).max(axis=1) if len(refined) else np.zeros(0)
    keep = converged & (norms2 <= TRUNCATION_NORM)
    # Far outside the safe ball the float64 evaluation floor exceeds the
    # refinement tolerance, so nothing certifiable lives there; an
    # endpoint that refuses to polish at such a norm is a slow divergence
    # and counts as such.  Refusal inside the ball sits over a singular
    # point of the target; treat it as a tracking failure so the caller
    # retries with fresh randomness rather than reporting a bad count.
    escaped = ~keep & (norms[in_ball] > _SAFE_NORM)
    diverged += int(escaped.sum())
    n_unrefined = int((~keep & ~escaped).sum())
    residuals = np.abs(target.evaluate(refined[keep])).max(axis=1) if keep.any() \
        else np.zeros(0)
    return TrackingResult(refined[keep], paths, diverged,
                          int(failed.sum()) + n_unrefined, residuals)


def track_between(source: QuadraticSystem, target: QuadraticSystem,
                  points: np.ndarray, seed_sequence: np.random.SeedSequence,
                  retries: int = 3, strict: bool = True) -> np.ndarray:
    """Continue known solutions of ``source`` to solutions of ``target``.

    Path order is preserved: row i of the result is where points[i]
    arrived, which is what monodromy permutation extraction relies on.
    In strict mode every path must arrive and refine; otherwise lost
    paths (divergent or stalled) come back as NaN rows.
    """
    if source.n_equations != target.n_equations or source.n_unknowns != target.n_unknowns:
        raise ValueError("systems of a continuation leg must have equal shape")
    n = target.n_unknowns
    if n == 0 or len(points) == 0:
        return points.copy()
    source_h = _homogenize(source)
    target_h = _homogenize(target)

    last_exc = None
    for attempt in range(retries):
        rng = np.random.default_rng(seed_sequence.spawn(1)[0])
        patch = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        gamma = np.exp(2j * np.pi * rng.random())
        z = np.concatenate([np.ones((len(points), 1), dtype=complex), points], axis=1)
        z /= (z @ patch)[:, None]

        def h_value(zz, ss):
            rows = (gamma * ss[:, None] * source_h.evaluate(zz)
                    + (1.0 - ss)[:, None] * target_h.evaluate(zz))
            patch_row = zz @ patch - 1.0
            return np.concatenate([rows, patch_row[:, None]], axis=1)

        def h_jacobian(zz, ss):
            rows = (gamma * ss[:, None, None] * source_h.jacobian(zz)
                    + (1.0 - ss)[:, None, None] * target_h.jacobian(zz))
            patch_rows = np.broadcast_to(patch, (len(zz), 1, n + 1))
            return np.concatenate([rows, patch_rows], axis=1)

        def h_ds(zz):
            return gamma * source_h.evaluate(zz) - target_h.evaluate(zz)

        z, failed, truncated = _advance_paths(h_value, h_jacobian, h_ds, z)
        lost = failed | truncated
        with np.errstate(divide="ignore", invalid="ignore"):
            affine = z[:, 1:] / z[:, 0][:, None]
        lost |= ~np.isfinite(affine).all(axis=1)
        affine[lost] = 0.0
        refined, converged = newton_refine(target, affine)
        lost |= ~converged
        if not lost.any():
            return refined
        if not strict:
            refined[lost] = np.nan
            return refined
        last_exc = TrackingError(
            "continuation lost %d of %d paths" % (int(lost.sum()), len(points)))
    raise last_exc


def cluster_endpoints(points: np.ndarray, tol: float = CLUSTER_TOL) -> tuple[np.ndarray, float]:
    """Deduplicate endpoints; returns (representatives, min separation).

    Points within ``tol`` of each other (chained) collapse to one
    representative.  Representatives are sorted lexicographically by
    rounded coordinates so the output order is reproducible.
    """
    if len(points) == 0:
        return points, float("inf")
    n = len(points)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if points.shape[1]:
        diff = points[:, None, :] - points[None, :, :]
        dist = np.abs(diff).max(axis=2)
    else:
        dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] < tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    reps = np.array([points[members[0]] for members in groups.values()])

    separation = float("inf")
    rep_idx = [members[0] for members in groups.values()]
    for a in range(len(rep_idx)):
        for b in range(a + 1, len(rep_idx)):
            separation = min(separation, dist[rep_idx[a], rep_idx[b]])

    if reps.shape[1]:
        keys = np.round(np.concatenate([reps.real, reps.imag], axis=1), 8)
        order = np.lexsort(keys.T[::-1])
        reps = reps[order]
    return reps, separation


def match_point_sets(a: np.ndarray, b: np.ndarray, tol: float = CLUSTER_TOL) -> bool:
    """True iff the two point sets coincide within ``tol`` (as sets)."""
    if len(a) != len(b):
        return False
    if len(a) == 0 or a.shape[1] == 0:
        return len(a) == len(b)
    dist = np.abs(a[:, None, :] - b[None, :, :]).max(axis=2)
    used = np.zeros(len(b), dtype=bool)
    for i in range(len(a)):
        candidates = np.nonzero((dist[i] < tol) & ~used)[0]
        if len(candidates) == 0:
            return False
        used[candidates[0]] = True
    return True
