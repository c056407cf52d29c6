"""Finitely sampled paths and the length functional.

A path is an ordered list of point ids with strictly increasing parameter
values.  For such a finite sample the supremum over sub-partitions of the
chained distances is attained by the finest partition (triangle
inequality), so the length is the plain consecutive sum.  A single-sample
path is allowed as the degenerate case produced by bisecting a pair with
equal endpoints; its length is zero.
"""

from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPathError
from .extreal import INF
from .spaces import FiniteMetricSpace


@dataclass(frozen=True)
class Path:
    samples: tuple
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(int(s) for s in self.samples))
        object.__setattr__(self, "params", tuple(float(t) for t in self.params))
        if len(self.samples) != len(self.params):
            raise InvalidPathError("samples and params must have equal length")
        if not self.samples:
            raise InvalidPathError("a path needs at least one sample")
        if any(b <= a for a, b in zip(self.params, self.params[1:])):
            raise InvalidPathError("params must be strictly increasing")

    def __len__(self) -> int:
        return len(self.samples)

    def to_json(self) -> dict:
        return {"samples": list(self.samples), "params": list(self.params)}

    @classmethod
    def from_json(cls, doc: dict) -> "Path":
        return cls(tuple(doc["samples"]), tuple(doc["params"]))


def validate_path(space: FiniteMetricSpace, path: Path) -> None:
    """Raise InvalidPathError unless the path is valid in the space."""
    for s in path.samples:
        space.check_id(s)
    for a, b in zip(path.samples, path.samples[1:]):
        if space.dist(a, b) == INF:
            raise InvalidPathError(f"consecutive samples {a}, {b} at infinite distance")


def path_length(space: FiniteMetricSpace, path: Path) -> float:
    """Sum of consecutive sample distances (0 for a degenerate path)."""
    validate_path(space, path)
    return float(sum(space.dist(a, b) for a, b in zip(path.samples, path.samples[1:])))


def refine_path(space: FiniteMetricSpace, path: Path, insertions) -> Path:
    """Insert extra samples, keeping params strictly increasing.

    ``insertions`` is an iterable of (param, point_id) pairs.  A param that
    collides with an existing or previously inserted one is an error.
    Refinement never decreases the length (triangle inequality).
    """
    params = list(path.params)
    samples = list(path.samples)
    for t, pid in insertions:
        t = float(t)
        pid = space.check_id(pid)
        k = bisect_left(params, t)
        if k < len(params) and params[k] == t:
            raise InvalidPathError(f"parameter collision at t={t}")
        params.insert(k, t)
        samples.insert(k, pid)
    refined = Path(tuple(samples), tuple(params))
    validate_path(space, refined)
    return refined


def path_coords(space: FiniteMetricSpace, path: Path) -> np.ndarray:
    """Coordinates of the path samples (coordinate-backed spaces only)."""
    if not space.has_coords:
        raise InvalidPathError("path_coords needs a coordinate-backed space")
    return space.coords[list(path.samples)]
