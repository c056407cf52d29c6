"""Seeded generators of finite metric spaces for tests and demos.

Dyadic-valued matrices keep float arithmetic exact: random entries are
quarters, and the shortest-path closure of such a matrix is a metric whose
triangle inequality holds with no rounding slack at all.
"""

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .extreal import INF
from .spaces import FiniteMetricSpace


def random_dyadic_metric_space(seed: int, n: int = 30) -> FiniteMetricSpace:
    """Random n-point metric with dyadic distances (exact float closure)."""
    rng = np.random.default_rng(seed)
    A = rng.integers(1, 33, size=(n, n)).astype(float) / 4.0  # quarters in [0.25, 8]
    A = np.minimum(A, A.T)
    np.fill_diagonal(A, 0.0)
    D = shortest_path(A, method="FW")
    return FiniteMetricSpace.from_matrix(D, dedupe=False)


def random_geometric_graph_space(seed: int, n: int | None = None):
    """Connected geometric graph metric; returns (space, h).

    Points are uniform in the unit square; edges join pairs within a
    radius grown until the graph connects; d is the shortest-path metric
    over Euclidean edge weights.  ``h`` is the connection radius, an upper
    bound on every edge weight.
    """
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(20, 61))
    pts = rng.random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    E = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    radius = 1.3 * np.sqrt(np.log(max(n, 2)) / n)
    while True:
        mask = (E <= radius) & ~np.eye(n, dtype=bool)
        graph = csr_matrix(np.where(mask, E, 0.0))
        ncomp, _ = connected_components(graph, directed=False)
        if ncomp == 1:
            break
        radius *= 1.3
    D = shortest_path(graph, method="D", directed=False)
    return FiniteMetricSpace.from_matrix(D, dedupe=False), float(radius)


def bridged_two_cluster_space(seed: int, n: int | None = None):
    """Two geometric clusters joined by one long bridge edge; (space, h).

    Every cross-cluster distance runs through the bridge and far exceeds
    2h, so neither step chains at scale h nor radius-h ball covers reach
    across, while the metric itself stays finite.
    """
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(20, 61))
    half = n // 2
    space_a, ra = random_geometric_graph_space(int(rng.integers(1 << 30)), half)
    space_b, rb = random_geometric_graph_space(int(rng.integers(1 << 30)), n - half)
    h = max(ra, rb)
    Da, Db = space_a.dist_matrix(), space_b.dist_matrix()
    bridge = 5.0 * h + 1.0
    D = np.full((n, n), INF)
    D[:half, :half] = Da
    D[half:, half:] = Db
    # bridge joins node 0 of each cluster
    cross = Da[:, [0]] + bridge + Db[[0], :]
    D[:half, half:] = cross
    D[half:, :half] = cross.T
    return FiniteMetricSpace.from_matrix(D, dedupe=False), float(h)


def two_component_space(seed: int, n: int | None = None):
    """Two components at mutual distance inf; returns (space, h)."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(16, 41))
    half = n // 2
    space_a, ra = random_geometric_graph_space(int(rng.integers(1 << 30)), half)
    space_b, rb = random_geometric_graph_space(int(rng.integers(1 << 30)), n - half)
    D = np.full((n, n), INF)
    D[:half, :half] = space_a.dist_matrix()
    D[half:, half:] = space_b.dist_matrix()
    return FiniteMetricSpace.from_matrix(D, dedupe=False), float(max(ra, rb))


def midpoint_rich_instance(seed: int):
    """A space admitting the bisection slack schedule; (space, x, y, depth).

    Three families, all with exact or lattice-fine midpoints along the
    chosen pair: even cycles (graph metric), fine 1-d chains (chord
    metric), and even square lattices (chord metric).
    """
    rng = np.random.default_rng(seed)
    kind = int(rng.integers(3))
    if kind == 0:
        # even cycle, antipodal pair at a power-of-two graph distance; the
        # dyadic edge weight stays below 0.2 so odd-distance pairs still
        # admit 0.1-approximate midpoints (defect is half an edge, exactly)
        depth = int(rng.integers(3, 6))
        m = 1 << depth
        n = 2 * m
        idx = np.arange(n)
        hops = np.abs(idx[:, None] - idx[None, :])
        D = np.minimum(hops, n - hops).astype(float)
        w = float(rng.integers(1, 4)) / 16.0
        space = FiniteMetricSpace.from_matrix(D * w, dedupe=False)
        return space, 0, m, depth
    if kind == 1:
        # fine 1-d chain; slack at the deepest level still beats the spacing
        depth = 4
        m = 2048
        xs = np.arange(m + 1, dtype=float) / m
        space = FiniteMetricSpace.from_coords(xs[:, None], dedupe=False)
        return space, 0, m, depth
    # even square lattice, corner-to-corner pair: every dyadic midpoint of
    # the diagonal is itself a lattice node
    depth = int(rng.integers(3, 6))
    m = 1 << depth
    xs = np.arange(m + 1, dtype=float) / m
    X, Y = np.meshgrid(xs, xs)
    coords = np.column_stack([X.ravel(), Y.ravel()])
    space = FiniteMetricSpace.from_coords(coords, dedupe=False)
    return space, 0, space.n - 1, depth
