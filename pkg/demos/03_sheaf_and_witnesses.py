"""The 1-Lipschitz sheaf decision, its witnesses, and the dual formula.

A field that is 1-Lipschitz inside every cover set need not be globally
1-Lipschitz; the sheaf check decides whether that can happen for a given
cover and, when it can, hands back a concrete offending field.
"""

import numpy as np

from lengthlab import (
    Cover,
    FiniteMetricSpace,
    ScalarField,
    bump_witness,
    chain_metric,
    dual_distance,
    dual_distance_over,
    is_lip1_loc,
    lipschitz_constant,
    mcshane_extend,
    sample_grid,
    sheaf_check,
    slit_plane,
)

# two intervals on the line, covered separately: the cover sees no cross
# pairs, so any cross-cluster slope is locally invisible
space = FiniteMetricSpace.from_coords([[0], [1], [10], [11]])
cover = Cover.explicit([[0, 1], [2, 3]])
verdict = sheaf_check(space, cover, tol=0.0)
print("two intervals:", verdict.to_json())
wf = verdict.witness_field
print("witness field values:", sorted(set(wf.values.tolist())))
print("witness is cover-local:", is_lip1_loc(space, wf, cover)[0])
x, y = verdict.witness_pair
print("global violation:", abs(wf[y] - wf[x]), ">", space.dist(x, y))

# the slit: the clearance cover is honest about the obstacle, and the
# chain metric exposes the cross-slit gap
gs = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), h=0.1, stencil=16)
sspace = gs.space()
clearance_cover = Cover.clearance(gs, r0=0.2)
src = gs.node_at(-0.1, 0.0)
sv = sheaf_check(sspace, clearance_cover, tol=0.5, sources=[src])
print("slit sheaf:", sv.to_json())

# the half-plane cone is the classic locally-but-not-globally example
xcoord, ycoord = gs.xy[:, 0], gs.xy[:, 1]
cone = ScalarField(np.where(xcoord < 0,
                            np.maximum(1 - np.hypot(xcoord, ycoord), 0.0), 0.0))
print("cone local?", is_lip1_loc(sspace, cone, clearance_cover)[0],
      " global constant:", round(lipschitz_constant(sspace, cone), 3))

# the explicit two-bump witness used in the midpoint argument
a, b = gs.node_at(-1, 0), gs.node_at(1, 0)
bump = bump_witness(sspace, a, b, r1=1.3, r2=1.3, delta=0.05)
print("bump endpoints:", bump[a], bump[b])

# duality: the capped distance profile recovers d exactly; a family of
# projections undershoots it
print("dual_distance == d:", dual_distance(sspace, a, b) == sspace.dist(a, b))
print("projections only:",
      dual_distance_over(sspace, a, b, [gs.xy[:, 0], gs.xy[:, 1]]),
      "<", sspace.dist(a, b))

# McShane extension: the maximal 1-Lipschitz interpolation
ext = mcshane_extend(sspace, {a: 0.0, b: 1.0})
print("extension constant:", round(lipschitz_constant(sspace, ext.values), 6))
