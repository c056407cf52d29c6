"""1-Lipschitz fields, covers, the sheaf decision procedure, and duality.

A field is locally 1-Lipschitz relative to a cover when it is 1-Lipschitz
inside every cover set.  The extremal cover-locally-1-Lipschitz profile
from a source is the chain metric: shortest paths in the graph whose edges
are the pairs co-resident in at least one cover set, weighted by distance.
The sheaf property (every cover-local 1-Lipschitz field is globally
1-Lipschitz) therefore reduces to comparing the chain metric against the
metric itself, and every failure ships a self-certifying witness field.

Pairs at infinite distance impose no Lipschitz constraint (the wide-sense
convention), and a finite-distance pair whose chain distance is infinite
is itself a sheaf violation.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import InfiniteDistanceError, LengthLabError, NotLipschitzError
from .extreal import INF, to_json
from .spaces import FiniteMetricSpace

# relative slack absorbing float rounding in shortest-path sums
_FLOAT_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A finite real value per point id."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("field values must be a 1-d array")
        if not np.isfinite(v).all():
            raise ValueError("field values must all be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_mapping(cls, n: int, mapping) -> "ScalarField":
        v = np.zeros(n)
        for k, val in mapping.items():
            v[int(k)] = float(val)
        return cls(v)

    def to_json(self) -> dict:
        return {str(i): float(v) for i, v in enumerate(self.values)}


def _as_values(field) -> np.ndarray:
    if isinstance(field, ScalarField):
        return field.values
    return np.asarray(field, dtype=float)


class Cover:
    """A family of point-id subsets defining locality.

    Kinds: ``explicit`` (sets given outright), ``balls`` (a ball of fixed
    radius around every point), ``clearance-balls`` (point-dependent radii
    derived from a grid sample's obstacle clearance, see
    :meth:`clearance`).  Every point belongs at least to its own ball in
    the ball kinds; explicit covers are checked for totality lazily.
    """

    def __init__(self, kind: str, sets=None, radii=None, h: float | None = None):
        self.kind = kind
        self._sets = None if sets is None else [np.asarray(s, dtype=int) for s in sets]
        self.radii = None if radii is None else np.asarray(radii, dtype=float)
        self.h = h
        self._pair_cache = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def explicit(cls, sets) -> "Cover":
        sets = [np.asarray(s, dtype=int) for s in sets]
        if any(len(s) == 0 for s in sets):
            raise ValueError("cover sets must be nonempty")
        return cls("explicit", sets=sets)

    @classmethod
    def balls(cls, space: FiniteMetricSpace, r: float) -> "Cover":
        if r <= 0:
            raise ValueError("ball radius must be positive")
        return cls("balls", radii=np.full(space.n, float(r)))

    @classmethod
    def clearance(cls, gridsample, r0: float) -> "Cover":
        """Clearance-ball cover of a grid sample.

        Radii are min(r0, clearance/2) with a floor of 9h/8 so that every
        node keeps its axis neighbors co-resident (without the floor,
        nodes hugging the boundary isolate and every sample would fail
        vacuously).  The floor stays below the 2h separation that an
        excluded lattice line enforces, so obstacles are never bridged.
        """
        if r0 <= 0:
            raise ValueError("r0 must be positive")
        h = gridsample.h
        radii = np.minimum(r0, np.maximum(gridsample.clearances / 2.0, 9.0 * h / 8.0))
        return cls("clearance-balls", radii=radii, h=h)

    # -- resolution --------------------------------------------------------

    @property
    def default_tol(self) -> float:
        return 2.0 * self.h if self.h is not None else 0.0

    def sets(self, space: FiniteMetricSpace):
        """Materialize the cover sets (ascending member ids)."""
        if self._sets is not None:
            return self._sets
        if space.has_coords:
            from scipy.spatial import cKDTree

            tree = cKDTree(space.coords)
            found = tree.query_ball_point(space.coords, self.radii, return_sorted=True)
            return [np.asarray(m, dtype=int) for m in found]
        D = space.dist_matrix()
        return [np.flatnonzero(D[c] <= self.radii[c]) for c in range(space.n)]

    def corresident_pairs(self, space: FiniteMetricSpace):
        """Unique pairs (i < j) co-resident in at least one cover set."""
        if self._pair_cache is not None and self._pair_cache[0] is space:
            return self._pair_cache[1], self._pair_cache[2]
        if self._sets is not None:
            chunks_i, chunks_j = [], []
            for s in self._sets:
                if len(s) < 2:
                    continue
                a, b = np.triu_indices(len(s), k=1)
                chunks_i.append(s[a])
                chunks_j.append(s[b])
            if chunks_i:
                iu = np.concatenate(chunks_i)
                ju = np.concatenate(chunks_j)
                lo, hi = np.minimum(iu, ju), np.maximum(iu, ju)
                keys = np.unique(lo.astype(np.int64) * space.n + hi)
                iu, ju = keys // space.n, keys % space.n
            else:
                iu = ju = np.empty(0, dtype=int)
        else:
            member = self._membership(space)
            prod = (member @ member.T).tocoo()
            mask = prod.row < prod.col
            iu, ju = prod.row[mask].astype(np.int64), prod.col[mask].astype(np.int64)
        self._pair_cache = (space, iu, ju)
        return iu, ju

    def _membership(self, space: FiniteMetricSpace) -> csr_matrix:
        # membership[p, c] = 1 iff p lies in the ball around center c
        if space.has_coords:
            from scipy.spatial import cKDTree

            tree = cKDTree(space.coords)
            found = tree.query_ball_point(space.coords, self.radii)
            lens = np.fromiter((len(m) for m in found), dtype=np.int64, count=space.n)
            cols = np.repeat(np.arange(space.n, dtype=np.int64), lens)
            rows = np.concatenate([np.asarray(m, dtype=np.int64) for m in found]) \
                if lens.sum() else np.empty(0, dtype=np.int64)
        else:
            D = space.dist_matrix()
            rows_list = [np.flatnonzero(D[c] <= self.radii[c]) for c in range(space.n)]
            lens = np.array([len(m) for m in rows_list], dtype=np.int64)
            cols = np.repeat(np.arange(space.n, dtype=np.int64), lens)
            rows = np.concatenate(rows_list) if lens.sum() else np.empty(0, dtype=np.int64)
        data = np.ones(len(rows), dtype=np.int32)
        return csr_matrix((data, (rows, cols)), shape=(space.n, space.n))

    def locate_set(self, space: FiniteMetricSpace, u: int, v: int):
        """Index of some cover set containing both u and v, or None."""
        if self._sets is not None:
            for k, s in enumerate(self._sets):
                if u in s and v in s:
                    return k
            return None
        du, dv = space.dist_row(u), space.dist_row(v)
        both = np.flatnonzero((du <= self.radii) & (dv <= self.radii))
        return int(both[0]) if both.size else None


def _pair_weights(space: FiniteMetricSpace, iu, ju) -> np.ndarray:
    if space.has_coords:
        diff = space.coords[iu] - space.coords[ju]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))
    D = space.dist_matrix()
    return D[iu, ju]


# -- Lipschitz checking ------------------------------------------------------

def lipschitz_constant(space: FiniteMetricSpace, field, subset=None) -> float:
    """Max of |f(x)-f(y)| / d(x,y) over pairs of the subset.

    Pairs at infinite distance contribute nothing (the wide-sense
    constraint is vacuous); singletons give 0.
    """
    f = _as_values(field)
    ids = np.arange(space.n) if subset is None else np.asarray(subset, dtype=int)
    if len(ids) < 2:
        return 0.0
    D = space.dist_rows(ids)[:, ids]
    diffs = np.abs(f[ids][:, None] - f[ids][None, :])
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(np.isfinite(D) & (D > 0), diffs / np.where(D > 0, D, 1.0), 0.0)
    return float(ratios.max())


def is_lip1_loc(space: FiniteMetricSpace, field, cover: Cover,
                rel_slack: float = _FLOAT_SLACK):
    """Cover-local 1-Lipschitz check.

    Returns (True, None) when the field is 1-Lipschitz inside every cover
    set, else (False, (set_index, (u, v))) naming the first violating set
    and pair.  ``rel_slack`` absorbs float rounding in computed fields.
    """
    f = _as_values(field)
    iu, ju = cover.corresident_pairs(space)
    if len(iu) == 0:
        return True, None
    w = _pair_weights(space, iu, ju)
    diffs = np.abs(f[iu] - f[ju])
    ok = ~np.isfinite(w) | (diffs <= w * (1.0 + rel_slack))
    if ok.all():
        return True, None
    k = int(np.argmin(ok))
    u, v = int(iu[k]), int(ju[k])
    return False, (cover.locate_set(space, u, v), (u, v))


# -- chain metric and the sheaf decision ------------------------------------

def chain_metric(space: FiniteMetricSpace, cover: Cover, source: int) -> np.ndarray:
    """Shortest-path distances over co-resident pairs, inf where chainless."""
    source = space.check_id(source)
    graph = _chain_graph(space, cover)
    return dijkstra(graph, directed=False, indices=[source])[0]


def _chain_graph(space: FiniteMetricSpace, cover: Cover) -> csr_matrix:
    iu, ju = cover.corresident_pairs(space)
    w = _pair_weights(space, iu, ju)
    finite = np.isfinite(w)
    return csr_matrix((w[finite], (iu[finite], ju[finite])), shape=(space.n, space.n))


@dataclass(frozen=True, eq=False)
class SheafVerdict:
    holds: bool
    max_gap: float
    tol: float
    witness_pair: tuple | None = None
    witness_field: ScalarField | None = None
    mode: str = "exhaustive"

    def to_json(self) -> dict:
        return {
            "verdict": "PASS" if self.holds else "FAIL",
            "max_gap": to_json(self.max_gap),
            "witness": None if self.witness_pair is None else list(map(int, self.witness_pair)),
            "tol": self.tol,
            "mode": self.mode,
        }


def sheaf_check(space: FiniteMetricSpace, cover: Cover, tol: float | None = None,
                sources=None) -> SheafVerdict:
    """Decide whether cover-local 1-Lipschitz implies globally 1-Lipschitz.

    Holds iff chain_metric - d is at most ``tol`` over finite-distance
    pairs and no finite-distance pair has infinite chain distance.  On
    failure the verdict carries the worst pair (x, y) and the witness
    field chain_metric(x, .) capped at twice the finite diameter, which is
    cover-locally 1-Lipschitz by construction yet violates the global
    bound at the witness pair.
    """
    if tol is None:
        tol = cover.default_tol
    graph = _chain_graph(space, cover)
    if sources is None:
        src = np.arange(space.n)
        mode = "exhaustive"
    else:
        src = np.array([space.check_id(s) for s in np.atleast_1d(sources)])
        mode = "sources"
    CH = np.atleast_2d(dijkstra(graph, directed=False, indices=src))
    D = space.dist_rows(src)

    finite_d = np.isfinite(D)
    mismatch = finite_d & ~np.isfinite(CH)
    if mismatch.any():
        r, c = np.unravel_index(np.argmax(mismatch), mismatch.shape)
        x, y = int(src[r]), int(c)
        return SheafVerdict(False, INF, tol, (x, y),
                            _capped_chain_field(space, CH[r]), mode)

    gaps = np.where(finite_d, CH - D, -INF)
    r, c = np.unravel_index(np.argmax(gaps), gaps.shape)
    max_gap = float(gaps[r, c])
    if max_gap <= tol:
        return SheafVerdict(True, max_gap, tol, None, None, mode)
    x, y = int(src[r]), int(c)
    return SheafVerdict(False, max_gap, tol, (x, y),
                        _capped_chain_field(space, CH[r]), mode)


def _capped_chain_field(space: FiniteMetricSpace, chain_row: np.ndarray) -> ScalarField:
    cap = 2.0 * space.diameter_bound()
    return ScalarField(np.minimum(chain_row, cap))


# -- witnesses and duality ---------------------------------------------------

def bump_witness(space: FiniteMetricSpace, x: int, y: int, r1: float, r2: float,
                 delta: float) -> ScalarField:
    """The two-bump field -((r1-delta) - d(x,.))_+ + ((r2-delta) - d(.,y))_+.

    Vanishes outside the two shrunken balls; when they are disjoint it is
    1-Lipschitz on each ball and on the outside region, hence cover-local
    for any cover subordinate to that decomposition.
    """
    if min(r1, r2, delta) <= 0:
        raise ValueError("r1, r2, delta must be positive")
    dx = space.dist_row(space.check_id(x))
    dy = space.dist_row(space.check_id(y))
    left = np.maximum((r1 - delta) - dx, 0.0)
    right = np.maximum((r2 - delta) - dy, 0.0)
    left[~np.isfinite(dx)] = 0.0
    right[~np.isfinite(dy)] = 0.0
    return ScalarField(right - left)


def dual_distance(space: FiniteMetricSpace, x: int, y: int) -> float:
    """d(x, y) recovered as f(y) - f(x) for the capped distance profile.

    The profile f = min(d(x, .), cap) is 1-Lipschitz and attains the dual
    supremum exactly, so the return value equals d(x, y) with no error.
    """
    x, y = space.check_id(x), space.check_id(y)
    dx = space.dist_row(x)
    if not np.isfinite(dx[y]):
        raise InfiniteDistanceError(f"pair ({x}, {y}) at infinite distance")
    finite = dx[np.isfinite(dx)]
    cap = float(finite.max())
    f = np.minimum(dx, cap)
    return float(f[y] - f[x])


def dual_distance_over(space: FiniteMetricSpace, x: int, y: int, fields,
                       check: bool = True) -> float:
    """Max of f(y) - f(x) over the supplied 1-Lipschitz family.

    The zero field is implicitly included, so an empty family gives 0.
    With ``check`` (default) each member is verified to be globally
    1-Lipschitz first; a violator raises NotLipschitzError naming it.
    The result never exceeds d(x, y).
    """
    x, y = space.check_id(x), space.check_id(y)
    best = 0.0
    for k, field in enumerate(fields):
        f = _as_values(field)
        if check:
            c = lipschitz_constant(space, f)
            if c > 1.0 + _FLOAT_SLACK:
                raise NotLipschitzError(
                    f"family member {k} has Lipschitz constant {c:.6g} > 1",
                    member=k,
                )
        best = max(best, float(f[y] - f[x]))
    return best


def mcshane_extend(space: FiniteMetricSpace, anchor_values) -> ScalarField:
    """Maximal 1-Lipschitz extension f~(y) = min_u (f(u) + d(u, y)).

    ``anchor_values`` maps point ids to values and must itself be
    1-Lipschitz on its domain; every point of the space must be at finite
    distance from some anchor.
    """
    items = sorted((space.check_id(k), float(v)) for k, v in dict(anchor_values).items())
    if not items:
        raise ValueError("anchor set must be nonempty")
    ids = np.array([i for i, _ in items])
    vals = np.array([v for _, v in items])
    DU = space.dist_rows(ids)
    sub = DU[:, ids]
    diffs = np.abs(vals[:, None] - vals[None, :])
    bad = np.isfinite(sub) & (diffs > sub)
    if bad.any():
        a, b = np.unravel_index(np.argmax(bad), bad.shape)
        raise NotLipschitzError(
            f"anchor values not 1-Lipschitz at pair ({ids[a]}, {ids[b]})",
            pair=(int(ids[a]), int(ids[b])),
        )
    ext = (vals[:, None] + DU).min(axis=0)
    unreachable = ~np.isfinite(ext)
    if unreachable.any():
        i = int(np.argmax(unreachable))
        raise LengthLabError(f"point {i} at infinite distance from every anchor")
    ext[ids] = vals  # exact agreement on the anchors
    return ScalarField(ext)
