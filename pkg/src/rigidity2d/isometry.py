"""Complex direct isometries of the plane and their fitting.

The transformation group acting on realizations consists of rotations
(c, s) with c^2 + s^2 = 1 and translations (u, v), all four parameters
complex; reflections are excluded.  In the split coordinates
zeta = x + iy, xi = x - iy a transformation acts as

    zeta -> alpha zeta + w0,        xi -> alpha^{-1} xi + w1,

with alpha = c + is, w0 = u + iv, w1 = u - iv, which is what makes the
two-anchor fitting below linear.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .graphs import Realization, ValidationError

FIT_TOL = 1e-8


@dataclass(frozen=True)
class Transformation:
    """Direct isometry z -> R z + t with R = [[c, -s], [s, c]], c^2+s^2=1."""

    c: complex
    s: complex
    u: complex
    v: complex

    def apply(self, point: tuple[complex, complex]) -> tuple[complex, complex]:
        x, y = point
        return (self.c * x - self.s * y + self.u,
                self.s * x + self.c * y + self.v)

    def apply_realization(self, r: Realization) -> Realization:
        points = {w: self.apply(p) for w, p in r.points.items()}
        return Realization(points, r.max_residual)

    def compose(self, other: "Transformation") -> "Transformation":
        """self after other: self.compose(other).apply(p) = self(other(p))."""
        c = self.c * other.c - self.s * other.s
        s = self.s * other.c + self.c * other.s
        u = self.c * other.u - self.s * other.v + self.u
        v = self.s * other.u + self.c * other.v + self.v
        return Transformation(c, s, u, v)

    def inverse(self) -> "Transformation":
        return Transformation(self.c, -self.s,
                              -(self.c * self.u + self.s * self.v),
                              self.s * self.u - self.c * self.v)

    def is_valid(self, tol: float = FIT_TOL) -> bool:
        return abs(self.c ** 2 + self.s ** 2 - 1.0) < tol

    def max_deviation(self, r: Realization, s: Realization, vs) -> float:
        dev = 0.0
        for w in vs:
            image = self.apply(r.points[w])
            target = s.points[w]
            dev = max(dev, abs(image[0] - target[0]), abs(image[1] - target[1]))
        return dev


IDENTITY = Transformation(1.0, 0.0, 0.0, 0.0)


def _split(point: tuple[complex, complex]) -> tuple[complex, complex]:
    x, y = point
    return x + 1j * y, x - 1j * y


def _from_split(alpha: complex, w0: complex, w1: complex) -> Transformation:
    inv = 1.0 / alpha
    return Transformation((alpha + inv) / 2.0, (alpha - inv) / 2j,
                          (w0 + w1) / 2.0, (w0 - w1) / 2j)


def _fit_from_anchors(zr, zs, vs, tol):
    """alpha from the best-separated anchor pair, one split side at a time."""
    best_zeta = (0.0, None)
    best_xi = (0.0, None)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            a, b = vs[i], vs[j]
            dz = abs(zr[b][0] - zr[a][0])
            dx = abs(zr[b][1] - zr[a][1])
            if dz > best_zeta[0]:
                best_zeta = (dz, (a, b))
            if dx > best_xi[0]:
                best_xi = (dx, (a, b))
    if best_zeta[1] is not None:
        a, b = best_zeta[1]
        dz_r = zr[b][0] - zr[a][0]
        dz_s = zs[b][0] - zs[a][0]
        if dz_s == 0:
            return None
        alpha = dz_s / dz_r
        dx_r = zr[b][1] - zr[a][1]
        dx_s = zs[b][1] - zs[a][1]
        if dx_r != 0 and dx_s != 0:
            # Balance the split sides: the one-sided ratio carries the
            # full length discrepancy into the xi direction, amplified by
            # 1/|dz|.  The geometric mean of the two one-sided ratios
            # spreads it evenly, which keeps both deviations proportional
            # to the point scale.
            balanced = cmath.sqrt(alpha * dx_r / dx_s)
            alpha = balanced if abs(balanced - alpha) <= abs(balanced + alpha) \
                else -balanced
        return alpha
    if best_xi[1] is not None:
        a, b = best_xi[1]
        dx_s = zs[b][1] - zs[a][1]
        if dx_s == 0:
            return None
        return (zr[b][1] - zr[a][1]) / dx_s
    raise ValidationError("isometry fitting needs two distinct points")


def fit_direct_isometry(r: Realization, s: Realization, vs,
                        tol: float = FIT_TOL) -> Transformation | None:
    """The unique direct isometry with t(r_w) = s_w on vs, or None.

    alpha is fitted from the best-separated anchor pair in split
    coordinates, the translations from one anchor point, and the result
    verified on every vertex of vs.  The verification tolerance scales
    with the magnitude of the points involved, so that point sets far
    from the origin are judged by the same relative standard as small
    ones.  Verification failure (for instance when the two point sets
    are related only by a reflection) returns None.
    """
    vs = sorted(vs)
    if len(vs) < 2:
        raise ValidationError("isometry fitting needs at least two vertices")
    zr = {w: _split(r.points[w]) for w in vs}
    zs = {w: _split(s.points[w]) for w in vs}

    alpha = _fit_from_anchors(zr, zs, vs, tol)
    if alpha is None or alpha == 0:
        return None
    anchor = vs[0]
    w0 = zs[anchor][0] - alpha * zr[anchor][0]
    w1 = zs[anchor][1] - zr[anchor][1] / alpha

    scale = 1.0
    for pts in (zr, zs):
        for z, x in pts.values():
            scale = max(scale, abs(z), abs(x))
    bound = tol * scale
    for w in vs:
        z, x = zr[w]
        if abs(alpha * z + w0 - zs[w][0]) > bound:
            return None
        if abs(x / alpha + w1 - zs[w][1]) > bound:
            return None
    return _from_split(alpha, w0, w1)


def random_transformation(rng) -> Transformation:
    """A random element of the transformation group (complex parameters)."""
    alpha = 0.0
    while abs(alpha) < 1e-3:
        alpha = complex(rng.normal(), rng.normal())
    w0 = complex(rng.normal(), rng.normal())
    w1 = complex(rng.normal(), rng.normal())
    return _from_split(alpha, w0, w1)


__all__ = ["Transformation", "fit_direct_isometry", "random_transformation",
           "IDENTITY", "FIT_TOL"]
