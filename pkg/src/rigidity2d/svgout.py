"""Minimal deterministic SVG output for plane-curve plots.

Only the handful of elements a curve plot needs are emitted, with
coordinates rounded to a fixed precision, so identical inputs produce
byte-identical documents.
"""

from __future__ import annotations

PALETTE = [
    "#c62828",  # red
    "#1565c0",  # blue
    "#2e7d32",  # green
    "#ef6c00",  # orange
    "#6a1b9a",  # purple
    "#00838f",  # teal
    "#ad1457",  # pink
    "#558b2f",  # olive
]


def color_for_class(class_id: int) -> str:
    return PALETTE[class_id % len(PALETTE)]


def _fmt(x: float) -> str:
    text = "%.4f" % x
    return "0.0000" if text == "-0.0000" else text


class _Frame:
    """Affine map from data coordinates onto the canvas (y flipped)."""

    def __init__(self, points, width: int, height: int, margin: float):
        xs = [p[0] for p in points] or [0.0, 1.0]
        ys = [p[1] for p in points] or [0.0, 1.0]
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
        span_x = max(x_hi - x_lo, 1e-9)
        span_y = max(y_hi - y_lo, 1e-9)
        self.scale = min((width - 2 * margin) / span_x,
                         (height - 2 * margin) / span_y)
        self.x_mid = (x_lo + x_hi) / 2.0
        self.y_mid = (y_lo + y_hi) / 2.0
        self.cx = width / 2.0
        self.cy = height / 2.0

    def map(self, p) -> tuple[float, float]:
        return (self.cx + (p[0] - self.x_mid) * self.scale,
                self.cy - (p[1] - self.y_mid) * self.scale)


def curve_plot(chains, chain_classes, markers=(), width: int = 480,
               height: int = 480, margin: float = 30.0) -> str:
    """An SVG document with one polyline per chain, colored by class.

    ``chains`` is a sequence of point sequences (real x, y pairs),
    ``chain_classes`` a parallel sequence of integer class ids, and
    ``markers`` an optional sequence of (x, y) anchor points drawn as
    small filled dots.
    """
    everything = [p for chain in chains for p in chain] + list(markers)
    frame = _Frame(everything, width, height, margin)
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect width="%d" height="%d" fill="white"/>' % (width, height),
    ]
    for chain, class_id in zip(chains, chain_classes):
        if len(chain) < 2:
            continue
        coords = " ".join("%s,%s" % tuple(map(_fmt, frame.map(p))) for p in chain)
        lines.append('<polyline fill="none" stroke="%s" stroke-width="1.5" '
                     'points="%s"/>' % (color_for_class(class_id), coords))
    for p in markers:
        x, y = frame.map(p)
        lines.append('<circle cx="%s" cy="%s" r="3" fill="#37474f"/>'
                     % (_fmt(x), _fmt(y)))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


__all__ = ["curve_plot", "color_for_class", "PALETTE"]
