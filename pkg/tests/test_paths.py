"""Path lengths, refinement monotonicity, and validity errors."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lengthlab import (
    FiniteMetricSpace,
    InvalidPathError,
    Path,
    path_length,
    refine_path,
)
from lengthlab.instances import random_dyadic_metric_space


def plane(*pts):
    return FiniteMetricSpace.from_coords([list(map(float, p)) for p in pts])


def test_single_segment():
    space = plane((0, 0), (1, 0))
    assert path_length(space, Path((0, 1), (0.0, 1.0))) == 1.0


def test_two_unit_segments():
    space = plane((0, 0), (1, 0), (1, 1))
    assert path_length(space, Path((0, 1, 2), (0.0, 0.5, 1.0))) == 2.0


def test_collinear_midpoint_leaves_length_unchanged():
    space = plane((0, 0), (2, 0), (1, 0))
    straight = Path((0, 1), (0.0, 1.0))
    refined = refine_path(space, straight, [(0.5, 2)])
    assert path_length(space, refined) == path_length(space, straight) == 2.0


def test_detour_point_strictly_increases_length():
    space = plane((0, 0), (2, 0), (1, 1))
    straight = Path((0, 1), (0.0, 1.0))
    refined = refine_path(space, straight, [(0.5, 2)])
    assert path_length(space, refined) > 2.0


def test_insertion_length_identity():
    # new length = old - d(a,b) + d(a,z) + d(z,b) for a single insertion
    space = plane((0, 0), (3, 0), (1, 2))
    old = path_length(space, Path((0, 1), (0.0, 1.0)))
    new = path_length(space, refine_path(space, Path((0, 1), (0.0, 1.0)), [(0.5, 2)]))
    expected = old - space.dist(0, 1) + space.dist(0, 2) + space.dist(2, 1)
    assert new == pytest.approx(expected, abs=1e-12)


def test_degenerate_single_sample_path():
    space = plane((0, 0), (1, 0))
    assert path_length(space, Path((0,), (0.0,))) == 0.0


def test_param_collision_rejected():
    space = plane((0, 0), (1, 0), (2, 0))
    with pytest.raises(InvalidPathError):
        refine_path(space, Path((0, 1), (0.0, 1.0)), [(1.0, 2)])


def test_params_must_increase():
    with pytest.raises(InvalidPathError):
        Path((0, 1), (0.5, 0.5))


def test_infinite_consecutive_distance_rejected():
    space = FiniteMetricSpace.from_matrix([[0, float("inf")], [float("inf"), 0]])
    with pytest.raises(InvalidPathError):
        path_length(space, Path((0, 1), (0.0, 1.0)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.lists(st.integers(0, 11), min_size=2, max_size=8))
def test_length_at_least_endpoint_distance(seed, ids):
    space = random_dyadic_metric_space(seed, 12)
    path = Path(tuple(ids), tuple(float(k) for k in range(len(ids))))
    length = path_length(space, path)
    assert length >= space.dist(ids[0], ids[-1]) - 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000),
       st.lists(st.integers(0, 11), min_size=2, max_size=6),
       st.integers(0, 11))
def test_refinement_never_decreases_length(seed, ids, extra):
    space = random_dyadic_metric_space(seed, 12)
    path = Path(tuple(ids), tuple(float(k) for k in range(len(ids))))
    refined = refine_path(space, path, [(0.5, extra)])
    assert path_length(space, refined) >= path_length(space, path) - 1e-12
