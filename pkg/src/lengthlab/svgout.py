"""Deterministic SVG rendering of domains, paths, and sampled fields.

Output contains no timestamps or host data; identical inputs produce
byte-identical documents.
"""

import numpy as np

_PATH_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def render_domain_svg(domain, polylines=(), points=None, point_values=None,
                      width: int = 560, max_points: int = 4000) -> str:
    """Render a domain with optional path polylines and field dots.

    ``polylines`` is a sequence of (m, 2) coordinate arrays; ``points``
    and ``point_values`` sample a scalar field as grayscale dots (the
    sample is strided deterministically down to ``max_points``).
    """
    x0, y0, x1, y1 = domain.bbox
    span_x, span_y = x1 - x0, y1 - y0
    height = int(round(width * span_y / span_x))
    margin = 8
    sx = (width - 2 * margin) / span_x
    sy = (height - 2 * margin) / span_y

    def tx(x):
        return margin + (x - x0) * sx

    def ty(y):
        return margin + (y1 - y) * sy  # flip: SVG y grows downward

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 0}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{_fmt(tx(x0))}" y="{_fmt(ty(y1))}" width="{_fmt(span_x * sx)}" '
        f'height="{_fmt(span_y * sy)}" fill="#ffffff" stroke="#333333"/>',
    ]

    if points is not None and len(points):
        pts = np.asarray(points, dtype=float)
        stride = max(1, len(pts) // max_points)
        pts = pts[::stride]
        if point_values is not None:
            vals = np.asarray(point_values, dtype=float)[::stride]
            finite = np.isfinite(vals)
            lo = vals[finite].min() if finite.any() else 0.0
            hi = vals[finite].max() if finite.any() else 1.0
            span = hi - lo if hi > lo else 1.0
            for (px, py), v in zip(pts, vals):
                g = 230 if not np.isfinite(v) else int(round(230 * (1 - (v - lo) / span)))
                out.append(
                    f'<circle cx="{_fmt(tx(px))}" cy="{_fmt(ty(py))}" r="1.2" '
                    f'fill="rgb({g},{g},{g})"/>'
                )
        else:
            for px, py in pts:
                out.append(
                    f'<circle cx="{_fmt(tx(px))}" cy="{_fmt(ty(py))}" r="1.2" fill="#bbbbbb"/>'
                )

    from .domains import Polygon

    for obs in domain.obstacles:
        if isinstance(obs, Polygon):
            pts = " ".join(f"{_fmt(tx(vx))},{_fmt(ty(vy))}" for vx, vy in obs.vertices)
            out.append(f'<polygon points="{pts}" fill="#d62728" stroke="#d62728"/>')
        else:
            (ax, ay), (bx, by) = obs.p0, obs.p1
            out.append(
                f'<line x1="{_fmt(tx(ax))}" y1="{_fmt(ty(ay))}" x2="{_fmt(tx(bx))}" '
                f'y2="{_fmt(ty(by))}" stroke="#d62728" stroke-width="2.5"/>'
            )

    for k, line in enumerate(polylines):
        coords = np.asarray(line, dtype=float)
        pts = " ".join(f"{_fmt(tx(px))},{_fmt(ty(py))}" for px, py in coords)
        color = _PATH_COLORS[k % len(_PATH_COLORS)]
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.8"/>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"
