"""Finite wide-sense metric spaces, balls, and metric-axiom validation.

A :class:`FiniteMetricSpace` is a finite point set with a symmetric distance
function taking values in [0, inf].  It is backed either by a dense matrix
or by point coordinates with the Euclidean (chord) metric; the contract is
the distance function, not the storage.  Points are identified by dense
integer ids assigned in input order; construction merges duplicate points
(distance zero with identical distance rows, or identical coordinates) so
that d(x, y) = 0 implies x = y afterwards.

All instances are immutable after construction and safe for concurrent
read-only use.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, UnknownPointError
from .extreal import INF

# dense all-pairs material above this size is refused; callers must work
# row-wise (grid samples are far too large for dense storage)
_DENSE_LIMIT = 4096


class FiniteMetricSpace:
    """Finite point set with a wide-sense metric."""

    __slots__ = ("n", "labels", "_matrix", "_coords")

    def __init__(self, *, matrix=None, coords=None, labels=None):
        if (matrix is None) == (coords is None):
            raise ValueError("provide exactly one of matrix= or coords=")
        if matrix is not None:
            m = np.array(matrix, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError("matrix must be square")
            m.setflags(write=False)
            self._matrix = m
            self._coords = None
            self.n = m.shape[0]
        else:
            c = np.array(coords, dtype=float)
            if c.ndim != 2:
                raise ValueError("coords must be a 2-d array of shape (n, k)")
            if not np.isfinite(c).all():
                raise ValueError("coordinates must be finite")
            c.setflags(write=False)
            self._coords = c
            self._matrix = None
            self.n = c.shape[0]
        if self.n == 0:
            raise ValueError("a metric space needs at least one point")
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels length must match point count")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_matrix(cls, matrix, labels=None, dedupe=True):
        """Build from a dense symmetric matrix; ``inf`` entries allowed.

        Deduplication merges i and j when d(i, j) = d(j, i) = 0 and the two
        distance rows are identical.  Zero-distance pairs with differing
        rows are kept so that validation can report the triangle violation
        they imply.
        """
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if dedupe:
            keep = []
            for i in range(m.shape[0]):
                dup = False
                for j in keep:
                    if m[i, j] == 0.0 and m[j, i] == 0.0 and np.array_equal(m[i], m[j]):
                        dup = True
                        break
                if not dup:
                    keep.append(i)
            if len(keep) < m.shape[0]:
                idx = np.array(keep)
                m = m[np.ix_(idx, idx)]
                if labels is not None:
                    labels = [labels[i] for i in keep]
        return cls(matrix=m, labels=labels)

    @classmethod
    def from_coords(cls, coords, labels=None, dedupe=True):
        """Build from point coordinates with the Euclidean metric."""
        c = np.array(coords, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        if dedupe:
            seen = {}
            keep = []
            for i, row in enumerate(map(tuple, c)):
                if row not in seen:
                    seen[row] = i
                    keep.append(i)
            if len(keep) < c.shape[0]:
                c = c[keep]
                if labels is not None:
                    labels = [labels[i] for i in keep]
        return cls(coords=c, labels=labels)

    # -- distances ---------------------------------------------------------

    @property
    def coords(self):
        return self._coords

    @property
    def has_coords(self) -> bool:
        return self._coords is not None

    def check_id(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self.n:
            raise UnknownPointError(f"point id {i} not in [0, {self.n})")
        return i

    def dist(self, i: int, j: int) -> float:
        i, j = self.check_id(i), self.check_id(j)
        if self._matrix is not None:
            return float(self._matrix[i, j])
        diff = self._coords[i] - self._coords[j]
        return float(np.sqrt(np.dot(diff, diff)))

    def dist_row(self, i: int) -> np.ndarray:
        """Distances from point i to every point, as a length-n array."""
        i = self.check_id(i)
        if self._matrix is not None:
            return self._matrix[i].copy()
        diff = self._coords - self._coords[i]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def dist_rows(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=int)
        out = np.empty((len(ids), self.n))
        for k, i in enumerate(ids):
            out[k] = self.dist_row(int(i))
        return out

    def dist_matrix(self) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix.copy()
        if self.n > _DENSE_LIMIT:
            raise MemoryError(
                f"refusing dense {self.n}x{self.n} matrix; use dist_row/dist_rows"
            )
        return self.dist_rows(np.arange(self.n))

    def diameter_bound(self) -> float:
        """An upper bound on the largest finite distance in the space."""
        if self._matrix is not None:
            finite = self._matrix[np.isfinite(self._matrix)]
            return float(finite.max()) if finite.size else 0.0
        span = self._coords.max(axis=0) - self._coords.min(axis=0)
        return float(np.sqrt(np.dot(span, span)))

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        backing = "coords" if self.has_coords else "matrix"
        return f"FiniteMetricSpace(n={self.n}, backing={backing})"


# -- balls -----------------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    """A closed or open metric ball."""

    center: int
    radius: float
    kind: str = "closed"  # "closed" | "open"

    def __post_init__(self):
        if self.kind not in ("closed", "open"):
            raise ValueError(f"ball kind must be 'closed' or 'open', got {self.kind!r}")
        if self.radius < 0:
            raise ValueError("ball radius must be nonnegative")


def ball_members(space: FiniteMetricSpace, ball: Ball) -> np.ndarray:
    """Point ids inside the ball, in ascending id order."""
    row = space.dist_row(ball.center)
    if ball.kind == "closed":
        mask = row <= ball.radius
    else:
        mask = row < ball.radius
    return np.flatnonzero(mask)


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class MetricValidationReport:
    status: str                 # "pass" | "fail"
    axiom: str | None = None    # violated axiom when status == "fail"
    witness: tuple | None = None
    mode: str = "exhaustive"    # "exhaustive" | "sampled"

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"status": self.status, "mode": self.mode}
        if self.axiom is not None:
            out["axiom"] = self.axiom
        if self.witness is not None:
            out["witness"] = [int(i) for i in self.witness]
        return out


def _triangle_violation(D: np.ndarray, tol: float):
    # saturating arithmetic: inf legs make the bound inf, never a violation
    n = D.shape[0]
    for k in range(n):
        bound = D[:, k][:, None] + D[k][None, :]
        bad = D > bound + tol
        if bad.any():
            i, j = np.unravel_index(np.argmax(bad), bad.shape)
            return int(i), int(k), int(j)
    return None


def validate_wide_metric(space: FiniteMetricSpace, tol: float = 0.0,
                         sample_triples: int = 20000, seed: int = 0) -> MetricValidationReport:
    """Check the wide-sense metric axioms, reporting the first violation.

    Axioms are checked in order: nonnegativity, zero diagonal, symmetry,
    separation (zero distance between distinct ids), triangle inequality.
    Spaces small enough for dense storage are checked exhaustively; larger
    ones are checked on a seeded sample of triples.
    """
    if space.n <= _DENSE_LIMIT // 8:
        D = space.dist_matrix()
        neg = np.argwhere(np.isnan(D) | (D < 0))
        if neg.size:
            i, j = neg[0]
            return MetricValidationReport("fail", "nonnegative", (int(i), int(j)))
        diag = np.flatnonzero(np.diag(D) != 0)
        if diag.size:
            i = int(diag[0])
            return MetricValidationReport("fail", "zero-diagonal", (i, i))
        asym = np.argwhere(D != D.T)
        if asym.size:
            i, j = asym[0]
            return MetricValidationReport("fail", "symmetry", (int(i), int(j)))
        zeros = np.argwhere((D == 0) & ~np.eye(space.n, dtype=bool))
        if zeros.size:
            i, j = zeros[0]
            return MetricValidationReport("fail", "separation", (int(i), int(j)))
        tri = _triangle_violation(D, tol)
        if tri is not None:
            return MetricValidationReport("fail", "triangle", tri)
        return MetricValidationReport("pass")

    # sampled mode for large spaces
    rng = np.random.default_rng(seed)
    for _ in range(max(1, sample_triples // 64)):
        ids = rng.integers(0, space.n, size=(64, 3))
        for x, y, z in ids:
            dxy = space.dist(int(x), int(y))
            dyx = space.dist(int(y), int(x))
            if dxy < 0 or dxy != dxy:
                return MetricValidationReport("fail", "nonnegative", (int(x), int(y)), "sampled")
            if dxy != dyx:
                return MetricValidationReport("fail", "symmetry", (int(x), int(y)), "sampled")
            if x != y and dxy == 0:
                return MetricValidationReport("fail", "separation", (int(x), int(y)), "sampled")
            dxz = space.dist(int(x), int(z))
            dzy = space.dist(int(z), int(y))
            if dxy > dxz + dzy + tol:
                return MetricValidationReport("fail", "triangle", (int(x), int(z), int(y)), "sampled")
    return MetricValidationReport("pass", mode="sampled")


# -- JSON ingestion ---------------------------------------------------------

def space_from_json(doc: dict) -> FiniteMetricSpace:
    """Build a space from its JSON document.

    Accepted shapes: ``{"coords": [[x, y], ...], "metric": "euclidean"}``
    or ``{"matrix": [[...]]}`` where ``null`` entries mean infinity.
    """
    if not isinstance(doc, dict):
        raise InputFormatError("space document must be a JSON object")
    labels = doc.get("labels")
    if "coords" in doc:
        metric = doc.get("metric", "euclidean")
        if metric != "euclidean":
            raise InputFormatError(f"unsupported metric {metric!r}")
        return FiniteMetricSpace.from_coords(doc["coords"], labels=labels)
    if "matrix" in doc:
        rows = doc["matrix"]
        m = [[INF if v is None else float(v) for v in row] for row in rows]
        return FiniteMetricSpace.from_matrix(m, labels=labels)
    raise InputFormatError("space document needs a 'coords' or 'matrix' key")


def space_to_json(space: FiniteMetricSpace) -> dict:
    if space.has_coords:
        doc = {"coords": space.coords.tolist(), "metric": "euclidean"}
    else:
        m = space.dist_matrix()
        doc = {"matrix": [[None if v == INF else float(v) for v in row] for row in m]}
    if space.labels is not None:
        doc["labels"] = space.labels
    return doc
