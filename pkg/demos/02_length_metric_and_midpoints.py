"""The induced length metric at a chaining scale, and approximate midpoints.

The chord (straight-line) metric on a slit domain sample disagrees with
its own length metric: chains must walk around the slit.  That single gap
is what the midpoint and ball-intersection criteria detect pair by pair.
"""

import math

from lengthlab import (
    approximate_midpoint,
    check_ball_intersection,
    induced_length_metric,
    is_length_space,
    sample_grid,
    slit_plane,
)

SQRT2 = math.sqrt(2)

gs = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), h=0.1, stencil=16)
space = gs.space()
a, b = gs.node_at(-1, 0), gs.node_at(1, 0)

# chord distance is 2; the shortest chain bends at a slit tip, length 2*sqrt(2)
res = induced_length_metric(space, 0.1 * SQRT2 * (1 + 1e-9), a)
print(f"chord d(a,b)  = {space.dist(a, b):.6f}")
print(f"length d(a,b) = {res.dl[b]:.6f}   (bend oracle {2 * SQRT2:.6f})")

# the verdict report names the worst pair
report = is_length_space(space, 0.1 * SQRT2 * (1 + 1e-9), tol=0.5, sources=[a])
print("is_length_space:", report.to_json())
print("witness coords:", gs.xy[report.witness[0]], gs.xy[report.witness[1]])

# midpoints: absent for the marquee pair on a coarse sample
coarse = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), h=0.25, stencil=16)
ca, cb = coarse.node_at(-1, 0), coarse.node_at(1, 0)
print("midpoint of (-1,0),(1,0) at eps=0.1:",
      approximate_midpoint(coarse.space(), ca, cb, 0.1))

# ball-intersection failures concentrate on cross-slit pairs
mid = sample_grid(slit_plane(1.0, (-1.5, -1.5, 1.5, 1.5)), h=0.15, stencil=16)
ball_report = check_ball_intersection(mid.space(), eps=0.1)
print(f"ball-intersection failures: {len(ball_report.failures)} "
      f"of {ball_report.pairs_checked} pairs")
i, j = ball_report.failures[0]
print("first failing pair:", mid.xy[i], mid.xy[j])
