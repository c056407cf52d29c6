"""Wide-sense metrics, balls, and sampled path lengths.

A metric here may take the value inf between points that no finite chain
connects; the constructors, the validator, and the length functional all
treat that value exactly (never as a large float).
"""

import numpy as np

from lengthlab import (
    Ball,
    FiniteMetricSpace,
    INF,
    Path,
    ball_members,
    path_length,
    refine_path,
    validate_wide_metric,
)

# three colinear points with the Euclidean metric: a valid metric space
line = FiniteMetricSpace.from_coords([[0, 0], [1, 0], [2, 0]])
print("validate colinear:", validate_wide_metric(line).to_json())

# break the triangle inequality and watch the witness come back
broken = FiniteMetricSpace.from_matrix([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
print("validate broken:  ", validate_wide_metric(broken).to_json())

# two clusters at infinite distance still form a wide-sense metric
clusters = FiniteMetricSpace.from_matrix(
    [[0, 1, INF], [1, 0, INF], [INF, INF, 0]])
print("validate clusters:", validate_wide_metric(clusters).to_json())

# balls: closed vs open membership on the unit-spaced line
space = FiniteMetricSpace.from_coords([[i, 0] for i in range(4)])
print("closed B(1,1):", ball_members(space, Ball(1, 1.0)).tolist())
print("open   U(1,1):", ball_members(space, Ball(1, 1.0, "open")).tolist())

# path length is the chained sum; refining by a collinear midpoint is free,
# refining by a detour point costs extra length
bend = FiniteMetricSpace.from_coords([[0, 0], [2, 0], [1, 0], [1, 1]])
straight = Path((0, 1), (0.0, 1.0))
print("straight length:", path_length(bend, straight))
collinear = refine_path(bend, straight, [(0.5, 2)])
print("with midpoint:  ", path_length(bend, collinear))
detour = refine_path(bend, straight, [(0.5, 3)])
print("with detour:    ", path_length(bend, detour))

# the length of any sampled path dominates the endpoint distance
rng = np.random.default_rng(0)
ids = rng.integers(0, 4, size=6)
walk = Path(tuple(ids), tuple(float(t) for t in range(6)))
print("random walk length >= endpoint distance:",
      path_length(bend, walk) >= bend.dist(int(ids[0]), int(ids[-1])))
