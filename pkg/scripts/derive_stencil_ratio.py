"""Derive the worst-direction overestimate ratio of the 8/16 stencils.

A straight segment in direction theta is rendered on a stencil as a
combination of the two neighboring stencil rays; the rendered length over
the true length is the direction's overestimate ratio.  This script sweeps
directions densely, solves the 2x2 decomposition against every adjacent
ray pair, and records the maxima in tests/fixtures/stencil_ratios.json.

Run from the repository root:

    python3 scripts/derive_stencil_ratio.py
"""

import json
import math
from pathlib import Path

import numpy as np

OFFSETS = {
    8: [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)],
    16: [(1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1),
         (-1, 0), (-2, -1), (-1, -1), (-1, -2), (0, -1), (1, -2), (1, -1),
         (2, -1)],
}


def direction_cost(theta: float, offsets) -> float:
    """Cheapest nonnegative two-ray rendering of the unit vector at theta."""
    e = np.array([math.cos(theta), math.sin(theta)])
    best = math.inf
    for u in offsets:
        for v in offsets:
            if u == v:
                continue
            M = np.array([[u[0], v[0]], [u[1], v[1]]], dtype=float)
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) < 1e-12:
                continue
            a = (e[0] * M[1, 1] - e[1] * M[0, 1]) / det
            b = (-e[0] * M[1, 0] + e[1] * M[0, 0]) / det
            if a < -1e-12 or b < -1e-12:
                continue
            cost = max(a, 0.0) * math.hypot(*u) + max(b, 0.0) * math.hypot(*v)
            best = min(best, cost)
    return best


def worst_ratio(stencil: int, sweep: int = 20000) -> float:
    offsets = OFFSETS[stencil]
    thetas = np.linspace(0.0, math.pi / 4.0, sweep)  # symmetry: one octant
    return max(direction_cost(float(t), offsets) for t in thetas)


def main():
    out = {}
    for stencil in (8, 16):
        ratio = worst_ratio(stencil)
        out[str(stencil)] = ratio
        print(f"{stencil}-stencil worst-direction ratio: {ratio:.12f}")
    out["sweep_points"] = 20000
    out["closed_form"] = {
        "8": "sqrt(4 - 2*sqrt(2))",
        "16": "sqrt(10 - 4*sqrt(5))",
    }
    path = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "stencil_ratios.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
