"""Lipschitz constants, covers, the sheaf decision, duality, McShane."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lengthlab import (
    Cover,
    FiniteMetricSpace,
    INF,
    NotLipschitzError,
    ScalarField,
    bump_witness,
    chain_metric,
    dual_distance,
    dual_distance_over,
    induced_length_metric,
    is_lip1_loc,
    lipschitz_constant,
    mcshane_extend,
    sample_grid,
    sheaf_check,
    slit_plane,
)
from lengthlab.instances import random_dyadic_metric_space

SQRT2 = math.sqrt(2.0)


@pytest.fixture(scope="module")
def slit_sample():
    return sample_grid(slit_plane(1.0, (-2, -2, 2, 2)), 0.1, 16)


def slit_halfplane_field(gs):
    # the canonical locally-but-not-globally 1-Lipschitz field: a unit cone
    # on the left halfplane, zero on the right
    x, y = gs.xy[:, 0], gs.xy[:, 1]
    r = np.hypot(x, y)
    return ScalarField(np.where(x < 0, np.maximum(1.0 - r, 0.0), 0.0))


# -- lipschitz_constant -------------------------------------------------------

def test_distance_profile_is_one_lipschitz():
    space = random_dyadic_metric_space(3, 10)
    f = space.dist_row(0)
    assert lipschitz_constant(space, f) <= 1.0 + 1e-12


def test_doubled_coordinate_has_constant_two():
    space = FiniteMetricSpace.from_coords([[0, 0], [1, 0], [2, 0], [1, 1]])
    f = 2.0 * space.coords[:, 0]
    assert lipschitz_constant(space, f) == pytest.approx(2.0)


def test_infinite_pairs_impose_no_constraint():
    m = [[0, 1, INF, INF], [1, 0, INF, INF], [INF, INF, 0, 1], [INF, INF, 1, 0]]
    space = FiniteMetricSpace.from_matrix(m)
    f = np.array([0.0, 0.0, 100.0, 100.0])
    assert lipschitz_constant(space, f) == 0.0


def test_singleton_subset_is_zero():
    space = random_dyadic_metric_space(5, 6)
    assert lipschitz_constant(space, np.zeros(6), subset=[2]) == 0.0


# -- is_lip1_loc --------------------------------------------------------------

def test_halfplane_field_is_cover_local(slit_sample):
    space = slit_sample.space()
    field = slit_halfplane_field(slit_sample)
    cover = Cover.clearance(slit_sample, 0.2)
    ok, witness = is_lip1_loc(space, field, cover)
    assert ok and witness is None


def test_halfplane_field_fails_with_wide_balls(slit_sample):
    space = slit_sample.space()
    field = slit_halfplane_field(slit_sample)
    ok, witness = is_lip1_loc(space, field, Cover.balls(space, 1.0))
    assert not ok
    set_idx, (u, v) = witness
    assert set_idx is not None
    # the violating pair straddles the slit
    assert slit_sample.xy[u][0] * slit_sample.xy[v][0] <= 0


def test_globally_lipschitz_passes_every_cover():
    space = random_dyadic_metric_space(11, 12)
    f = space.dist_row(4)
    for cover in (Cover.balls(space, 1.0), Cover.explicit([range(12), [0, 5, 7]])):
        ok, _ = is_lip1_loc(space, f, cover)
        assert ok


# -- chain metric -------------------------------------------------------------

def test_full_cover_chain_equals_distance():
    space = random_dyadic_metric_space(7, 12)
    cover = Cover.explicit([list(range(12))])
    for src in (0, 3):
        assert np.array_equal(chain_metric(space, cover, src), space.dist_row(src))


def test_separated_cover_gives_infinite_chain():
    space = FiniteMetricSpace.from_coords([[0], [1], [10], [11]])
    cover = Cover.explicit([[0, 1], [2, 3]])
    ch = chain_metric(space, cover, 0)
    assert ch[1] == 1.0 and ch[2] == INF and ch[3] == INF


def test_slit_chain_tracks_length_metric(slit_sample):
    space = slit_sample.space()
    a, b = slit_sample.node_at(-1, 0), slit_sample.node_at(1, 0)
    cover = Cover.clearance(slit_sample, 0.2)
    ch = chain_metric(space, cover, a)
    dl = induced_length_metric(space, 0.1 * SQRT2 * (1 + 1e-9), a).dl
    assert abs(ch[b] - dl[b]) <= 2 * 0.1
    assert ch[b] >= 2 * SQRT2 - 1e-9


# -- sheaf_check --------------------------------------------------------------

def test_connected_graph_metric_holds_with_zero_gap():
    space = random_dyadic_metric_space(2, 15)
    h = float(np.median(space.dist_matrix()))
    verdict = sheaf_check(space, Cover.balls(space, h), tol=0.0)
    assert verdict.holds and verdict.max_gap <= 0.0


def test_two_intervals_fail_with_capped_witness():
    space = FiniteMetricSpace.from_coords([[0], [1], [10], [11]])
    cover = Cover.explicit([[0, 1], [2, 3]])
    verdict = sheaf_check(space, cover, tol=0.0)
    assert not verdict.holds and verdict.max_gap == INF
    wf = verdict.witness_field
    # capped at twice the finite diameter (22 here), constant per cluster
    assert sorted(set(wf.values.tolist())) in ([0.0, 22.0], [0.0, 1.0, 22.0])
    ok, _ = is_lip1_loc(space, wf, cover)
    assert ok
    x, y = verdict.witness_pair
    assert abs(wf[y] - wf[x]) > space.dist(x, y)


def test_full_cover_always_holds():
    space = random_dyadic_metric_space(9, 10)
    verdict = sheaf_check(space, Cover.explicit([list(range(10))]), tol=0.0)
    assert verdict.holds and verdict.max_gap <= 0.0


def test_slit_sheaf_fails_at_cross_slit_pair(slit_sample):
    space = slit_sample.space()
    cover = Cover.clearance(slit_sample, 0.2)
    src = slit_sample.node_at(-0.1, 0.0)
    verdict = sheaf_check(space, cover, tol=0.5, sources=[src])
    assert not verdict.holds
    x, y = verdict.witness_pair
    assert slit_sample.xy[x][0] < 0 < slit_sample.xy[y][0]
    # the witness certifies itself: cover-local yet globally violating
    ok, _ = is_lip1_loc(space, verdict.witness_field, cover)
    assert ok
    wf = verdict.witness_field
    assert abs(wf[y] - wf[x]) > space.dist(x, y) + 0.5


# -- bump witness -------------------------------------------------------------

def test_bump_values_on_slit_sample(slit_sample):
    space = slit_sample.space()
    x, y = slit_sample.node_at(-1, 0), slit_sample.node_at(1, 0)
    f = bump_witness(space, x, y, r1=1.3, r2=1.3, delta=0.05)
    assert f[x] == pytest.approx(-1.25)
    assert f[y] == pytest.approx(1.25)
    dx, dy = space.dist_row(x), space.dist_row(y)
    outside = (dx > 1.25) & (dy > 1.25)
    assert np.all(f.values[outside] == 0.0)


def test_bump_pieces_are_lipschitz_when_balls_disjoint(slit_sample):
    space = slit_sample.space()
    x, y = slit_sample.node_at(-1, 0), slit_sample.node_at(1, 0)
    r, delta = 0.9, 0.05
    f = bump_witness(space, x, y, r, r, delta)
    dx, dy = space.dist_row(x), space.dist_row(y)
    for piece in (np.flatnonzero(dx < r), np.flatnonzero(dy < r),
                  np.flatnonzero((dx > r - delta) & (dy > r - delta))):
        assert lipschitz_constant(space, f, subset=piece) <= 1.0 + 1e-12


def test_bump_degenerate_radii_vanish():
    space = random_dyadic_metric_space(4, 8)
    f = bump_witness(space, 0, 1, 0.5, 0.5, 0.5)
    assert np.all(f.values == 0.0)


# -- duality ------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_dual_distance_exact(seed):
    space = random_dyadic_metric_space(seed, 9)
    for x, y in itertools.combinations(range(space.n), 2):
        assert dual_distance(space, x, y) == space.dist(x, y)


def test_dual_over_projections_is_suboptimal():
    space = FiniteMetricSpace.from_coords([[0, 0], [3, 4]])
    fields = [space.coords[:, 0], space.coords[:, 1]]
    val = dual_distance_over(space, 0, 1, fields)
    assert val == 4.0 < space.dist(0, 1)


def test_dual_over_empty_family_is_zero():
    space = random_dyadic_metric_space(1, 6)
    assert dual_distance_over(space, 0, 1, []) == 0.0


def test_dual_over_rejects_non_lipschitz_member():
    space = FiniteMetricSpace.from_coords([[0, 0], [1, 0]])
    with pytest.raises(NotLipschitzError):
        dual_distance_over(space, 0, 1, [np.array([0.0, 5.0])])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_dual_over_never_exceeds_distance(seed):
    space = random_dyadic_metric_space(seed, 8)
    fields = [space.dist_row(k) for k in range(4)]
    for x, y in itertools.combinations(range(8), 2):
        assert dual_distance_over(space, x, y, fields) <= space.dist(x, y) + 1e-12


# -- McShane extension --------------------------------------------------------

def test_single_anchor_gives_distance_profile():
    space = random_dyadic_metric_space(6, 10)
    f = mcshane_extend(space, {3: 0.0})
    assert np.array_equal(f.values, space.dist_row(3))


def test_full_anchor_set_is_identity():
    space = random_dyadic_metric_space(8, 7)
    vals = space.dist_row(2)
    f = mcshane_extend(space, dict(enumerate(vals)))
    assert np.array_equal(f.values, vals)


def test_extension_rejects_bad_input():
    space = FiniteMetricSpace.from_coords([[0], [1], [5]])
    with pytest.raises(NotLipschitzError):
        mcshane_extend(space, {0: 0.0, 1: 9.0})


def test_extension_rejects_unreachable_points():
    m = [[0, 1, INF], [1, 0, INF], [INF, INF, 0]]
    space = FiniteMetricSpace.from_matrix(m)
    with pytest.raises(Exception):
        mcshane_extend(space, {0: 0.0})


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_extension_lipschitz_and_pointwise_maximal(seed):
    # brute force: the extension dominates every grid value a 1-Lipschitz
    # extension could take at each point
    rng = np.random.default_rng(seed)
    space = random_dyadic_metric_space(seed, 6)
    anchors = {0: 0.0, 3: float(space.dist(0, 3)) * float(rng.random())}
    f = mcshane_extend(space, anchors)
    assert lipschitz_constant(space, f.values) <= 1.0 + 1e-12
    ids = np.array(sorted(anchors))
    vals = np.array([anchors[i] for i in ids])
    for y in range(space.n):
        if y in anchors:
            continue
        dy = space.dist_rows(ids)[:, y]
        for v in np.linspace(f[y] + 1e-6, f[y] + 5.0, 23):
            # any larger value breaks the bound against some anchor
            assert (np.abs(v - vals) > dy).any()


# -- containment property -----------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_global_lipschitz_implies_cover_local(seed):
    rng = np.random.default_rng(seed)
    space = random_dyadic_metric_space(seed, 10)
    raw = rng.normal(size=10)
    c = lipschitz_constant(space, raw)
    f = raw / c if c > 1 else raw
    cover = Cover.balls(space, float(rng.uniform(0.5, 4.0)))
    ok, _ = is_lip1_loc(space, f, cover)
    assert ok
