"""Dyadic near-geodesics by repeated approximate-midpoint bisection.

Each level halves the segments under a geometrically shrinking slack, so
the finished path has controlled per-level steps and total length within
(1 + eps) of the endpoint distance.
"""

import numpy as np

from lengthlab import (
    FiniteMetricSpace,
    MidpointNotFoundError,
    bisect_geodesic,
    path_length,
    punctured_plane,
    sample_grid,
)

# a fine even lattice: every dyadic midpoint is a lattice node
m = 16
xs = np.arange(m + 1) / m
X, Y = np.meshgrid(xs, xs)
lattice = FiniteMetricSpace.from_coords(np.column_stack([X.ravel(), Y.ravel()]))
a = 0
b = lattice.n - 1  # opposite corner
path = bisect_geodesic(lattice, a, b, eps=0.1, depth=4)
print(f"lattice corner pair: {len(path)} samples, "
      f"length {path_length(lattice, path):.6f}, d = {lattice.dist(a, b):.6f}")

# the punctured domain: the construction routes around the hole, so the
# result is strictly longer than the straight chord
gs = sample_grid(punctured_plane((-3, -3, 3, 3), 0.05), 0.05, 16)
space = gs.space()
pa, pb = gs.node_at(-1, 0), gs.node_at(1, 0)
path = bisect_geodesic(space, pa, pb, eps=0.1, depth=2)
coords = [tuple(gs.xy[s]) for s in path.samples]
print("punctured pair path:", coords)
print(f"length {path_length(space, path):.6f} > 2 strictly")

# a space with no midpoints at all fails loudly, naming the stuck pair
two = FiniteMetricSpace.from_matrix([[0, 1], [1, 0]])
try:
    bisect_geodesic(two, 0, 1, eps=0.1, depth=2)
except MidpointNotFoundError as err:
    print("two-point space:", err)
