"""Vectorized planar predicates: orientation, intersection, distances.

All batch arguments are (m, 2) float arrays.  Exactness is float-level:
the grid coordinates and obstacle vertices used in this package are small
rationals, for which the sign tests below are reliable; degenerate
touching cases (an endpoint exactly on a segment) count as intersections
because obstacles are closed sets.
"""

import numpy as np


def orient(a, b, p) -> np.ndarray:
    """Cross product sign of (b - a) x (p - a); p may be a batch."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = np.asarray(p, dtype=float)
    return (b[0] - a[0]) * (p[..., 1] - a[1]) - (b[1] - a[1]) * (p[..., 0] - a[0])


def _on_segment(a, b, p, d) -> np.ndarray:
    # collinear points (d == 0) inside the segment's bounding box
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    inside = (
        (p[..., 0] >= lo[0]) & (p[..., 0] <= hi[0])
        & (p[..., 1] >= lo[1]) & (p[..., 1] <= hi[1])
    )
    return (d == 0.0) & inside


def segments_intersect(P, Q, a, b) -> np.ndarray:
    """Whether each segment P[k]-Q[k] meets the fixed segment a-b.

    Touching endpoints and collinear overlap count as intersection.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d1 = orient(a, b, P)
    d2 = orient(a, b, Q)
    d3 = np.empty(len(P))
    d4 = np.empty(len(P))
    # orientation of a and b against each batch segment
    d3 = (Q[:, 0] - P[:, 0]) * (a[1] - P[:, 1]) - (Q[:, 1] - P[:, 1]) * (a[0] - P[:, 0])
    d4 = (Q[:, 0] - P[:, 0]) * (b[1] - P[:, 1]) - (Q[:, 1] - P[:, 1]) * (b[0] - P[:, 0])
    proper = ((d1 > 0) != (d2 > 0)) & ((d1 < 0) != (d2 < 0)) \
        & ((d3 > 0) != (d4 > 0)) & ((d3 < 0) != (d4 < 0))
    touch = _on_segment(a, b, P, d1) | _on_segment(a, b, Q, d2)
    lo = np.minimum(P, Q)
    hi = np.maximum(P, Q)
    a_in = (d3 == 0.0) & (a[0] >= lo[:, 0]) & (a[0] <= hi[:, 0]) \
        & (a[1] >= lo[:, 1]) & (a[1] <= hi[:, 1])
    b_in = (d4 == 0.0) & (b[0] >= lo[:, 0]) & (b[0] <= hi[:, 0]) \
        & (b[1] >= lo[:, 1]) & (b[1] <= hi[:, 1])
    return proper | touch | a_in | b_in


def point_segment_distance(P, a, b) -> np.ndarray:
    """Euclidean distance from each point to the closed segment a-b."""
    P = np.asarray(P, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        diff = P - a
        return np.sqrt(np.einsum("...i,...i->...", diff, diff))
    t = np.clip(((P - a) @ ab) / denom, 0.0, 1.0)
    proj = a + t[..., None] * ab
    diff = P - proj
    return np.sqrt(np.einsum("...i,...i->...", diff, diff))


def point_in_polygon(P, vertices) -> np.ndarray:
    """Whether each point lies in the closed polygon (boundary included)."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    V = np.asarray(vertices, dtype=float)
    inside = np.zeros(len(P), dtype=bool)
    on_edge = np.zeros(len(P), dtype=bool)
    m = len(V)
    for k in range(m):
        a = V[k]
        b = V[(k + 1) % m]
        d = orient(a, b, P)
        on_edge |= _on_segment(a, b, P, d)
        y_crosses = (a[1] > P[:, 1]) != (b[1] > P[:, 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = a[0] + (P[:, 1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
        inside ^= y_crosses & (P[:, 0] < x_at)
    return inside | on_edge
