"""Planar domains, obstacle-respecting grid samples, and the dual identity.

A :class:`PlanarDomain` is an open axis-aligned box minus a list of closed
obstacles (polygons and segments; a segment may be a degenerate slit of
zero area).  ``sample_grid`` lays an origin-anchored lattice over the
domain, keeps nodes with clearance at least h/2, and connects them with a
stencil graph whose edges are certified not to touch any obstacle, by
sub-sampling at step h/4 plus exact segment-intersection tests (the exact
test is authoritative; pure sampling misses degenerate slits).

Shortest paths over the validated stencil edges approximate the domain's
intrinsic length metric from below within the stencil's worst-direction
ratio; distance profiles from anchors feed the gradient-bounded trial
family whose dual supremum recovers the same metric from the other side.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import EmptySampleError, InputFormatError, LengthLabError, UnknownPointError
from .geometry import point_in_polygon, point_segment_distance, segments_intersect
from .paths import Path
from .sheaf import ScalarField
from .spaces import FiniteMetricSpace

# worst-direction length overestimate of a stencil path over a straight
# line, in closed form; rederived numerically by scripts/derive_stencil_ratio.py
STENCIL_RATIO = {
    8: math.sqrt(4.0 - 2.0 * math.sqrt(2.0)),
    16: math.sqrt(10.0 - 4.0 * math.sqrt(5.0)),
}

# canonical half-stencils; the full neighborhood is these offsets and their
# negations
_STENCIL_OFFSETS = {
    8: ((1, 0), (0, 1), (1, 1), (1, -1)),
    16: ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)),
}

# edge-wise gradient-bound slack for trial families
TRIAL_SLACK = 1e-9


@dataclass(frozen=True)
class Segment:
    p0: tuple
    p1: tuple

    def edges(self):
        return ((np.asarray(self.p0, float), np.asarray(self.p1, float)),)


@dataclass(frozen=True)
class Polygon:
    vertices: tuple

    def edges(self):
        V = np.asarray(self.vertices, float)
        return tuple((V[k], V[(k + 1) % len(V)]) for k in range(len(V)))


@dataclass(frozen=True)
class PlanarDomain:
    bbox: tuple  # (x0, y0, x1, y1)
    obstacles: tuple = ()

    def __post_init__(self):
        x0, y0, x1, y1 = self.bbox
        if not (x1 > x0 and y1 > y0):
            raise ValueError("bbox must be nondegenerate")


def convex_box(bbox) -> PlanarDomain:
    return PlanarDomain(tuple(float(v) for v in bbox))


def slit_plane(halflength: float = 1.0, bbox=(-3.0, -3.0, 3.0, 3.0)) -> PlanarDomain:
    if halflength <= 0:
        raise ValueError("slit halflength must be positive")
    a = float(halflength)
    return PlanarDomain(tuple(float(v) for v in bbox),
                        (Segment((0.0, -a), (0.0, a)),))


def punctured_plane(bbox=(-3.0, -3.0, 3.0, 3.0), h: float = 0.02) -> PlanarDomain:
    # a point puncture is invisible to a grid; a square of side h/2 keeps
    # the strict detour at every finite spacing
    s = h / 4.0
    square = Polygon(((-s, -s), (s, -s), (s, s), (-s, s)))
    return PlanarDomain(tuple(float(v) for v in bbox), (square,))


def contains(domain: PlanarDomain, pts) -> np.ndarray:
    """Whether each point is strictly inside the box and off every obstacle."""
    P = np.atleast_2d(np.asarray(pts, dtype=float))
    x0, y0, x1, y1 = domain.bbox
    ok = (P[:, 0] > x0) & (P[:, 0] < x1) & (P[:, 1] > y0) & (P[:, 1] < y1)
    for obs in domain.obstacles:
        if isinstance(obs, Polygon):
            ok &= ~point_in_polygon(P, obs.vertices)
        else:
            ok &= point_segment_distance(P, obs.p0, obs.p1) > 0.0
    return ok


def clearance(domain: PlanarDomain, pts) -> np.ndarray:
    """Distance to the box complement and the obstacles (0 outside)."""
    P = np.atleast_2d(np.asarray(pts, dtype=float))
    x0, y0, x1, y1 = domain.bbox
    c = np.minimum.reduce([P[:, 0] - x0, x1 - P[:, 0], P[:, 1] - y0, y1 - P[:, 1]])
    c = np.maximum(c, 0.0)
    for obs in domain.obstacles:
        if isinstance(obs, Polygon):
            d = np.minimum.reduce([point_segment_distance(P, a, b) for a, b in obs.edges()])
            d[point_in_polygon(P, obs.vertices)] = 0.0
        else:
            d = point_segment_distance(P, obs.p0, obs.p1)
        c = np.minimum(c, d)
    return c


# -- grid sampling -----------------------------------------------------------

def _lattice(lo: float, hi: float, h: float) -> np.ndarray:
    """Origin-anchored lattice multiples of h covering [lo, hi].

    When 1/h is an integer the coordinates are produced by exact division,
    so marquee nodes like (+-1, 0) at h = 0.02 land on exact floats.
    """
    lo_i = math.ceil(lo / h - 1e-9)
    hi_i = math.floor(hi / h + 1e-9)
    idx = np.arange(lo_i, hi_i + 1, dtype=float)
    inv = 1.0 / h
    if abs(inv - round(inv)) < 1e-9 and round(inv) != 0:
        return idx / round(inv)
    return idx * h


@dataclass(eq=False)
class GridSample:
    """Retained lattice nodes of a domain with a validated stencil graph."""

    domain: PlanarDomain
    h: float
    stencil: int
    xy: np.ndarray            # (n, 2) node coordinates, row-major order
    clearances: np.ndarray    # (n,) obstacle clearance per node
    iu: np.ndarray            # edge endpoints (undirected, stored once)
    ju: np.ndarray
    w: np.ndarray             # edge lengths
    graph: csr_matrix = field(repr=False)
    _space: FiniteMetricSpace | None = field(default=None, repr=False)
    _index: dict | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.xy)

    def space(self) -> FiniteMetricSpace:
        """The chord-metric space of the sample (plain Euclidean distance)."""
        if self._space is None:
            self._space = FiniteMetricSpace.from_coords(self.xy, dedupe=False)
        return self._space

    def node_at(self, x: float, y: float) -> int:
        """Id of the node at exactly (x, y); raises if absent."""
        if self._index is None:
            self._index = {(px, py): i for i, (px, py) in enumerate(map(tuple, self.xy))}
        try:
            return self._index[(float(x), float(y))]
        except KeyError:
            raise UnknownPointError(f"no grid node at ({x}, {y})") from None

    def nearest_node(self, x: float, y: float) -> int:
        diff = self.xy - np.array([float(x), float(y)])
        return int(np.argmin(np.einsum("ij,ij->i", diff, diff)))


def _valid_edges(domain: PlanarDomain, P: np.ndarray, Q: np.ndarray, h: float) -> np.ndarray:
    ok = np.ones(len(P), dtype=bool)
    if len(P) == 0:
        return ok
    length = float(np.hypot(*(Q[0] - P[0])))
    nsub = max(1, math.ceil(length / (h / 4.0)))
    for k in range(1, nsub):
        t = k / nsub
        ok &= contains(domain, P + t * (Q - P))
    for obs in domain.obstacles:
        for a, b in obs.edges():
            ok &= ~segments_intersect(P, Q, a, b)
    return ok


def sample_grid(domain: PlanarDomain, h: float, stencil: int = 16) -> GridSample:
    """Sample the domain on an origin-anchored lattice of spacing h.

    Nodes are lattice points strictly inside with clearance at least h/2,
    in row-major order; stencil edges whose straight segment leaves the
    domain or touches an obstacle are dropped.
    """
    if h <= 0:
        raise ValueError("grid spacing must be positive")
    if stencil not in _STENCIL_OFFSETS:
        raise ValueError(f"stencil must be one of {sorted(_STENCIL_OFFSETS)}")
    x0, y0, x1, y1 = domain.bbox
    xs = _lattice(x0, x1, h)
    ys = _lattice(y0, y1, h)
    if len(xs) == 0 or len(ys) == 0:
        raise EmptySampleError("spacing too large for the domain box")
    X, Y = np.meshgrid(xs, ys)            # row-major: y varies over rows
    pts = np.column_stack([X.ravel(), Y.ravel()])
    clear = clearance(domain, pts)
    keep = contains(domain, pts) & (clear >= h / 2.0)
    if not keep.any():
        raise EmptySampleError("no lattice node clears the obstacles")

    ids = np.full(len(pts), -1, dtype=np.int64)
    ids[keep] = np.arange(int(keep.sum()))
    idgrid = ids.reshape(len(ys), len(xs))
    xy = pts[keep]
    clear = clear[keep]

    all_iu, all_ju = [], []
    ny, nx = idgrid.shape
    for dx, dy in _STENCIL_OFFSETS[stencil]:
        r0, r1 = max(0, -dy), ny - max(0, dy)
        c0, c1 = max(0, -dx), nx - max(0, dx)
        a = idgrid[r0:r1, c0:c1]
        b = idgrid[r0 + dy:r1 + dy, c0 + dx:c1 + dx]
        m = (a >= 0) & (b >= 0)
        iu, ju = a[m], b[m]
        valid = _valid_edges(domain, xy[iu], xy[ju], h)
        all_iu.append(iu[valid])
        all_ju.append(ju[valid])

    iu = np.concatenate(all_iu)
    ju = np.concatenate(all_ju)
    diff = xy[iu] - xy[ju]
    w = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    graph = csr_matrix((w, (iu, ju)), shape=(len(xy), len(xy)))
    return GridSample(domain, float(h), stencil, xy, clear, iu, ju, w, graph)


# -- length metric on the stencil graph --------------------------------------

def euclidean_length_metric(gs: GridSample, source: int,
                            return_predecessors: bool = False):
    """Shortest-path distances over the validated stencil edges.

    Overestimates the domain's length metric by at most the stencil's
    worst-direction ratio plus O(h) boundary slack; unreachable nodes
    report inf.
    """
    if not 0 <= int(source) < gs.n:
        raise UnknownPointError(f"node id {source} not in [0, {gs.n})")
    out = dijkstra(gs.graph, directed=False, indices=[int(source)],
                   return_predecessors=return_predecessors)
    if return_predecessors:
        return out[0][0], out[1][0]
    return out[0]


def _walk_predecessors(gs: GridSample, pred: np.ndarray, source: int, target: int):
    chain = [int(target)]
    while chain[-1] != int(source):
        chain.append(int(pred[chain[-1]]))
    chain.reverse()
    if len(chain) == 1:
        return Path((chain[0],), (0.0,)), 0.0
    coords = gs.xy[chain]
    steps = np.sqrt(np.einsum("ij,ij->i", np.diff(coords, axis=0), np.diff(coords, axis=0)))
    cum = np.concatenate([[0.0], np.cumsum(steps)])
    total = float(cum[-1])
    return Path(tuple(chain), tuple(cum / total)), total


def shortest_stencil_path(gs: GridSample, source: int, target: int):
    """Reconstructed shortest stencil path and its length."""
    dist, pred = euclidean_length_metric(gs, source, return_predecessors=True)
    target = int(target)
    if not 0 <= target < gs.n:
        raise UnknownPointError(f"node id {target} not in [0, {gs.n})")
    if not np.isfinite(dist[target]):
        raise LengthLabError(f"node {target} unreachable from {source}")
    return _walk_predecessors(gs, pred, source, target)


# -- gradient-bounded trial family -------------------------------------------

@dataclass(frozen=True, eq=False)
class TrialMember:
    tag: str
    field: ScalarField


@dataclass(frozen=True, eq=False)
class TrialFamily:
    members: tuple
    slack: float = TRIAL_SLACK

    def fields(self):
        return [m.field for m in self.members]


def _edge_gradient_ok(gs: GridSample, values: np.ndarray, slack: float) -> bool:
    diffs = np.abs(values[gs.iu] - values[gs.ju])
    return bool((diffs <= gs.w * (1.0 + slack)).all())


def build_trial_family(gs: GridSample, anchors, cone_radius: float = 1.0) -> TrialFamily:
    """Distance profiles, coordinate projections, and clipped cones.

    Every member is validated against the edge-wise gradient bound
    |f(u) - f(v)| <= |u - v| * (1 + slack); a failure is a construction
    bug and raises.
    """
    anchors = [int(a) for a in np.atleast_1d(anchors)]
    for a in anchors:
        if not 0 <= a < gs.n:
            raise UnknownPointError(f"anchor id {a} not in [0, {gs.n})")
    members = []
    if anchors:
        profs = np.atleast_2d(dijkstra(gs.graph, directed=False, indices=anchors))
        cap = 2.0 * gs.space().diameter_bound()
        for a, prof in zip(anchors, profs):
            prof = np.minimum(prof, cap)  # unreachable components sit at the cap
            members.append(TrialMember(f"dist_profile+@{a}", ScalarField(prof)))
            members.append(TrialMember(f"dist_profile-@{a}", ScalarField(-prof)))
    members.append(TrialMember("proj_x", ScalarField(gs.xy[:, 0])))
    members.append(TrialMember("proj_y", ScalarField(gs.xy[:, 1])))
    for a in anchors:
        diff = gs.xy - gs.xy[a]
        cone = np.maximum(cone_radius - np.sqrt(np.einsum("ij,ij->i", diff, diff)), 0.0)
        members.append(TrialMember(f"cone@{a}", ScalarField(cone)))
    for m in members:
        if not _edge_gradient_ok(gs, m.field.values, TRIAL_SLACK):
            raise LengthLabError(f"trial member {m.tag} fails the gradient bound")
    return TrialFamily(tuple(members))


# -- two-sided identity: dual supremum vs path infimum ------------------------

@dataclass(frozen=True)
class DualLengthRow:
    x: int
    y: int
    lower: float
    upper: float
    attained_by: str

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "lower": self.lower,
                "upper": self.upper, "attained_by": self.attained_by}


@dataclass(frozen=True)
class DualLengthReport:
    rows: tuple
    tol: float
    passed: bool
    spot_checks: int

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "tol": self.tol,
            "pairs": len(self.rows),
            "spot_checks": self.spot_checks,
            "rows": [r.to_json() for r in self.rows],
        }


def verify_dual_length_identity(gs: GridSample, pairs, tol: float = 0.05) -> DualLengthReport:
    """Bracket the length metric between the trial dual sup and path lengths.

    For each pair (x, y): LOWER is the best f(y) - f(x) over the trial
    family anchored at x (members validated edge-wise at construction),
    UPPER is the stencil shortest-path value.  The identity holds when
    LOWER <= UPPER <= LOWER * (1 + tol); the distance profile attains
    LOWER = UPPER exactly.  Each pair also spot-verifies the upper-bound
    mechanism: f(y) - f(x) <= L(path) * (1 + slack) for every member f.
    """
    pairs = [(int(x), int(y)) for x, y in pairs]
    by_anchor = {}
    for x, y in pairs:
        by_anchor.setdefault(x, []).append(y)

    rows = []
    spot = 0
    passed = True
    for x, targets in sorted(by_anchor.items()):
        dist, pred = euclidean_length_metric(gs, x, return_predecessors=True)
        family = build_trial_family(gs, [x])
        values = [m.field.values for m in family.members]
        tags = [m.tag for m in family.members]
        for y in targets:
            upper = float(dist[y])
            diffs = [float(v[y] - v[x]) for v in values]
            k = int(np.argmax(diffs))
            lower = max(0.0, diffs[k])
            attained = tags[k] if lower > 0 else "zero_field"
            rows.append(DualLengthRow(x, y, lower, upper, attained))
            if x == y:
                ok = lower == 0.0 and upper == 0.0
            else:
                ok = lower <= upper * (1.0 + 1e-12) and upper <= lower * (1.0 + tol)
            passed &= ok
            # spot-verify the path integral bound for this pair's path
            if np.isfinite(upper) and x != y:
                _, plen = _walk_predecessors(gs, pred, x, y)
                for v in values:
                    spot += 1
                    if float(v[y] - v[x]) > plen * (1.0 + TRIAL_SLACK) + 1e-12:
                        passed = False
    return DualLengthReport(tuple(rows), float(tol), bool(passed), spot)


# -- JSON --------------------------------------------------------------------

def domain_from_json(doc: dict) -> PlanarDomain:
    if not isinstance(doc, dict) or "bbox" not in doc:
        raise InputFormatError("domain document needs a 'bbox' key")
    obstacles = []
    for item in doc.get("obstacles", []):
        if "polygon" in item:
            obstacles.append(Polygon(tuple(tuple(map(float, v)) for v in item["polygon"])))
        elif "segment" in item:
            (a, b) = item["segment"]
            obstacles.append(Segment(tuple(map(float, a)), tuple(map(float, b))))
        else:
            raise InputFormatError("obstacle needs a 'polygon' or 'segment' key")
    return PlanarDomain(tuple(float(v) for v in doc["bbox"]), tuple(obstacles))


def domain_to_json(domain: PlanarDomain) -> dict:
    obstacles = []
    for obs in domain.obstacles:
        if isinstance(obs, Polygon):
            obstacles.append({"polygon": [list(v) for v in obs.vertices]})
        else:
            obstacles.append({"segment": [list(obs.p0), list(obs.p1)]})
    return {"bbox": list(domain.bbox), "obstacles": obstacles}
