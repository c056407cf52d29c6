"""Domain predicates, grid sampling, stencil metrics, trial families."""

import json
import math
from pathlib import Path as FsPath

import numpy as np
import pytest
from scipy.sparse.csgraph import floyd_warshall

from lengthlab import (
    STENCIL_RATIO,
    build_trial_family,
    clearance,
    contains,
    convex_box,
    domain_from_json,
    domain_to_json,
    euclidean_length_metric,
    lipschitz_constant,
    punctured_plane,
    sample_grid,
    shortest_stencil_path,
    slit_plane,
    verify_dual_length_identity,
)
from lengthlab.domains import _lattice
from lengthlab.errors import EmptySampleError
from lengthlab.sheaf import ScalarField

SQRT2 = math.sqrt(2.0)
FIXTURES = FsPath(__file__).parent / "fixtures"


# -- contains / clearance -----------------------------------------------------

def test_point_on_slit_is_outside():
    dom = slit_plane(1.0)
    assert not contains(dom, [(0.0, 0.5)])[0]
    assert contains(dom, [(0.0, 1.5)])[0]


def test_clearance_to_slit():
    dom = slit_plane(1.0)
    assert clearance(dom, [(0.3, 0.0)])[0] == pytest.approx(0.3)
    assert clearance(dom, [(0.0, 1.5)])[0] == pytest.approx(0.5)


def test_bbox_corner_has_zero_clearance():
    dom = convex_box((0, 0, 1, 1))
    assert clearance(dom, [(0.0, 0.0)])[0] == 0.0
    assert not contains(dom, [(0.0, 0.0)])[0]


def test_point_inside_polygon_obstacle_excluded():
    dom = punctured_plane((-1, -1, 1, 1), h=0.4)  # square of side 0.2
    assert not contains(dom, [(0.0, 0.0)])[0]
    assert contains(dom, [(0.3, 0.0)])[0]
    assert clearance(dom, [(0.3, 0.0)])[0] == pytest.approx(0.2)


# -- lattice anchoring --------------------------------------------------------

def test_lattice_hits_exact_floats():
    xs = _lattice(-3.0, 3.0, 0.02)
    assert -1.0 in xs and 1.0 in xs and 0.0 in xs


def test_lattice_fallback_for_irrational_spacing():
    xs = _lattice(0.0, 1.0, 0.3)
    assert np.allclose(xs, [0.0, 0.3, 0.6, 0.9])


# -- sampling -----------------------------------------------------------------

def test_small_box_sample_fully_connected():
    gs = sample_grid(convex_box((0, 0, 2, 2)), 0.5, 8)
    assert gs.n == 9
    # all 8-stencil edges between retained nodes are valid in a convex box
    assert len(gs.w) == 4 + 4 + 4 + 8  # horizontals, verticals, two diagonals


def test_empty_sample_raises():
    with pytest.raises(EmptySampleError):
        sample_grid(convex_box((0, 0, 1, 1)), 5.0, 8)


def _independent_crossings(P, Q, a, b):
    # parametric 2x2 solve, independent of the library's orientation tests
    P, Q = np.asarray(P, float), np.asarray(Q, float)
    a, b = np.asarray(a, float), np.asarray(b, float)
    d1 = Q - P
    d2 = b - a
    det = d1[:, 0] * (-d2[1]) - d1[:, 1] * (-d2[0])
    rhs = a - P
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (rhs[:, 0] * (-d2[1]) - rhs[:, 1] * (-d2[0])) / det
        s = (d1[:, 0] * rhs[:, 1] - d1[:, 1] * rhs[:, 0]) / det
    eps = 1e-12
    return (np.abs(det) > 0) & (t >= -eps) & (t <= 1 + eps) & (s >= -eps) & (s <= 1 + eps)


def test_no_slit_edge_crosses_the_segment():
    gs = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), 0.1, 16)
    crossings = _independent_crossings(gs.xy[gs.iu], gs.xy[gs.ju],
                                       (0.0, -1.0), (0.0, 1.0))
    assert int(crossings.sum()) == 0


def test_puncture_removes_origin_node_only():
    dom = punctured_plane((-1, -1, 1, 1), h=0.1)
    gs = sample_grid(dom, 0.1, 16)
    coords = set(map(tuple, gs.xy))
    assert (0.0, 0.0) not in coords
    assert (0.1, 0.0) in coords and (0.0, -0.1) in coords
    # no retained edge touches the obstacle square
    half = 0.1 / 4
    square = [((-half, -half), (half, -half)), ((half, -half), (half, half)),
              ((half, half), (-half, half)), ((-half, half), (-half, -half))]
    for a, b in square:
        assert int(_independent_crossings(gs.xy[gs.iu], gs.xy[gs.ju], a, b).sum()) == 0


# -- stencil length metric ----------------------------------------------------

def test_convex_ratio_bound_and_oracle():
    gs = sample_grid(convex_box((0, 0, 1, 1)), 0.1, 16)
    space = gs.space()
    src = gs.node_at(0.1, 0.1)
    dl = euclidean_length_metric(gs, src)
    # independent oracle: floyd-warshall over the same validated edges
    dense = gs.graph.toarray()
    FW = floyd_warshall(np.maximum(dense, dense.T), directed=False)
    assert np.allclose(dl, FW[src], atol=1e-9)
    d = space.dist_row(src)
    mask = d > 0.3  # keep the O(h) boundary slack term small
    ratio = float((dl[mask] / d[mask]).max())
    assert ratio <= STENCIL_RATIO[16] + 3 * 0.1 / 0.3


def test_slit_stencil_metric_hits_bend_oracle():
    gs = sample_grid(slit_plane(1.0, (-3, -3, 3, 3)), 0.05, 16)
    a, b = gs.node_at(-1, 0), gs.node_at(1, 0)
    dl = euclidean_length_metric(gs, a)
    assert 2 * SQRT2 - 1e-9 <= dl[b] <= 2 * SQRT2 * 1.05


def test_punctured_metric_strictly_detours():
    gs = sample_grid(punctured_plane((-3, -3, 3, 3), 0.05), 0.05, 16)
    a, b = gs.node_at(-1, 0), gs.node_at(1, 0)
    dl = euclidean_length_metric(gs, a)
    assert 2.0 < dl[b] <= 2.05
    path, length = shortest_stencil_path(gs, a, b)
    assert length == pytest.approx(dl[b])
    assert length > 2.0


def test_domain_monotonicity_removing_obstacle():
    box = (-2, -2, 2, 2)
    gs_free = sample_grid(convex_box(box), 0.1, 16)
    gs_obst = sample_grid(punctured_plane(box, 0.1), 0.1, 16)
    a_free = gs_free.node_at(-1, 0)
    a_obst = gs_obst.node_at(-1, 0)
    dl_free = euclidean_length_metric(gs_free, a_free)
    dl_obst = euclidean_length_metric(gs_obst, a_obst)
    free_index = {tuple(p): i for i, p in enumerate(gs_free.xy)}
    for j, p in enumerate(map(tuple, gs_obst.xy)):
        assert dl_free[free_index[p]] <= dl_obst[j] + 1e-9


# -- trial family -------------------------------------------------------------

def test_trial_family_members_respect_gradient_bound():
    gs = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), 0.1, 16)
    fam = build_trial_family(gs, [gs.node_at(-1, 0)])
    tags = [m.tag for m in fam.members]
    assert "proj_x" in tags and any(t.startswith("dist_profile+") for t in tags)
    for m in fam.members:
        diffs = np.abs(m.field.values[gs.iu] - m.field.values[gs.ju])
        assert (diffs <= gs.w * (1 + 1e-9)).all()


def test_profile_difference_equals_length_metric():
    gs = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), 0.1, 16)
    a, b = gs.node_at(-1, 0), gs.node_at(1, 0)
    fam = build_trial_family(gs, [a])
    prof = next(m.field for m in fam.members if m.tag == f"dist_profile+@{a}")
    dl = euclidean_length_metric(gs, a)
    assert prof[b] - prof[a] == dl[b]


def test_halfplane_cone_passes_edgewise_but_not_globally():
    # the canonical witness: no stencil edge crosses the slit, so the
    # edge-wise bound holds although the global constant is large
    gs = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), 0.1, 16)
    x, y = gs.xy[:, 0], gs.xy[:, 1]
    f = np.where(x < 0, np.maximum(1.0 - np.hypot(x, y), 0.0), 0.0)
    diffs = np.abs(f[gs.iu] - f[gs.ju])
    assert (diffs <= gs.w * (1 + 1e-9)).all()
    assert lipschitz_constant(gs.space(), f) > 1.0


# -- the two-sided identity ---------------------------------------------------

def test_dual_identity_on_convex_box():
    gs = sample_grid(convex_box((0, 0, 1, 1)), 0.1, 16)
    rng = np.random.default_rng(0)
    pairs = [(int(a), int(b)) for a, b in rng.integers(0, gs.n, size=(25, 2))]
    report = verify_dual_length_identity(gs, pairs, tol=0.05)
    assert report.passed
    for row in report.rows:
        if row.x != row.y:
            assert row.lower == row.upper
            assert row.attained_by.startswith("dist_profile+")


def test_dual_identity_on_slit_marquee_pair():
    gs = sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), 0.1, 16)
    a, b = gs.node_at(-1, 0), gs.node_at(1, 0)
    report = verify_dual_length_identity(gs, [(a, b), (a, a)], tol=0.05)
    assert report.passed
    row = report.rows[0]
    assert row.lower == row.upper
    assert row.lower > 2.5  # far above the chord distance 2
    assert report.rows[1].lower == report.rows[1].upper == 0.0


# -- stencil ratio fixture ----------------------------------------------------

def test_stencil_ratios_match_derivation_fixture():
    fixture = json.loads((FIXTURES / "stencil_ratios.json").read_text())
    assert STENCIL_RATIO[8] == pytest.approx(fixture["8"], abs=1e-7)
    assert STENCIL_RATIO[16] == pytest.approx(fixture["16"], abs=1e-7)


def test_straight_lines_rendered_within_ratio():
    # fine angle sweep on an obstacle-free box: the stencil metric stays
    # within the worst-direction ratio plus boundary slack
    gs = sample_grid(convex_box((-1.2, -1.2, 1.2, 1.2)), 0.1, 16)
    src = gs.node_at(0.0, 0.0)
    dl = euclidean_length_metric(gs, src)
    d = gs.space().dist_row(src)
    mask = d >= 0.9
    assert float((dl[mask] / d[mask]).max()) <= STENCIL_RATIO[16] + 0.04


# -- JSON ----------------------------------------------------------------------

def test_domain_json_round_trip():
    dom = slit_plane(1.0, (-2, -2, 2, 2))
    doc = domain_to_json(dom)
    again = domain_from_json(json.loads(json.dumps(doc)))
    assert again == dom
    dom2 = punctured_plane((-1, -1, 1, 1), 0.2)
    assert domain_from_json(domain_to_json(dom2)) == dom2
