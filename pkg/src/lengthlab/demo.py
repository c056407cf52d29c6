"""End-to-end demo scenarios on the three canonical planar domains.

Each scenario samples its domain, compares the chord metric against the
induced length metric, runs the sheaf decision with a clearance cover,
brackets the length metric with the trial-function dual supremum, and
renders an SVG.  Reports are plain dicts ready for JSON emission, with no
timestamps, and each scenario checks its findings against the domain's
documented expectations (``ok`` field).

Tolerances at grid scale must absorb the stencil's direction quantization,
which grows with distance: a straight segment rendered on a stencil is
longer by up to the worst-direction ratio.  The scenarios therefore use
tol = (ratio_8 - 1) * diameter + O(h) rather than the bare 2h suitable for
exact graph metrics.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import (
    GridSample,
    STENCIL_RATIO,
    build_trial_family,
    convex_box,
    euclidean_length_metric,
    punctured_plane,
    sample_grid,
    shortest_stencil_path,
    slit_plane,
    verify_dual_length_identity,
)
from .extreal import to_json
from .lengthmetric import bisect_geodesic, is_length_space
from .paths import Path, path_length
from .sheaf import Cover, is_lip1_loc, sheaf_check
from .svgout import render_domain_svg

DEMO_NAMES = ("slit", "punctured", "convex")

_SQRT2 = math.sqrt(2.0)


@dataclass
class DemoResult:
    report: dict
    svg: str
    witness_field: object = None
    paths: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.report.get("ok"))


def _length_tol(space, step: float) -> float:
    return (STENCIL_RATIO[8] - 1.0) * space.diameter_bound() + 2.0 * step


def _sheaf_tol(space, h: float) -> float:
    return (STENCIL_RATIO[8] - 1.0) * space.diameter_bound() + 4.0 * h


def _cover_local_ratio(space, cover, fieldvals) -> float:
    iu, ju = cover.corresident_pairs(space)
    if len(iu) == 0:
        return 0.0
    diff = space.coords[iu] - space.coords[ju]
    w = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    v = fieldvals.values if hasattr(fieldvals, "values") else np.asarray(fieldvals)
    return float((np.abs(v[iu] - v[ju]) / w).max())


def _seeded_pairs(gs: GridSample, seed: int, n_anchors: int, per_anchor: int,
                  include=()):
    rng = np.random.default_rng(seed)
    anchors = rng.choice(gs.n, size=min(n_anchors, gs.n), replace=False)
    pairs = list(include)
    for a in anchors:
        targets = rng.choice(gs.n, size=min(per_anchor, gs.n), replace=False)
        pairs.extend((int(a), int(t)) for t in targets)
    return pairs


def _run_common(name: str, domain, h: float, stencil: int, seed: int,
                marquee: tuple, sheaf_sources, dual_anchors: int = 4,
                dual_targets: int = 26):
    gs = sample_grid(domain, h, stencil)
    space = gs.space()
    a = gs.node_at(*marquee[0])
    b = gs.node_at(*marquee[1])
    d_ab = space.dist(a, b)

    dist_a, pred_a = euclidean_length_metric(gs, a, return_predecessors=True)
    d_ell = float(dist_a[b])
    stencil_path, stencil_len = shortest_stencil_path(gs, a, b)

    step = h * _SQRT2 * (1.0 + 1e-9)
    ls_report = is_length_space(space, step, tol=_length_tol(space, step), sources=[a])

    cover = Cover.clearance(gs, 2.0 * h)
    sheaf_verdict = sheaf_check(space, cover, tol=_sheaf_tol(space, h),
                                sources=[gs.node_at(*s) for s in sheaf_sources])

    pairs = _seeded_pairs(gs, seed, dual_anchors, dual_targets, include=[(a, b)])
    dual = verify_dual_length_identity(gs, pairs, tol=0.05)

    report = {
        "demo": name,
        "h": h,
        "stencil": stencil,
        "seed": seed,
        "nodes": gs.n,
        "edges": int(len(gs.w)),
        "marquee": [[float(c) for c in p] for p in marquee],
        "d": float(d_ab),
        "d_ell": d_ell,
        "length_space": bool(ls_report.ok),
        "length_space_report": ls_report.to_json(),
        "sheaf": bool(sheaf_verdict.holds),
        "sheaf_report": sheaf_verdict.to_json(),
        "dgamma_check": "pass" if dual.passed else "fail",
        "dgamma_pairs": len(dual.rows),
        "dgamma_spot_checks": dual.spot_checks,
        "paths": [{"kind": "stencil_shortest", "length": float(stencil_len),
                   "samples": len(stencil_path)}],
    }

    witness_field = None
    if not sheaf_verdict.holds and sheaf_verdict.witness_field is not None:
        wf = sheaf_verdict.witness_field
        wx, wy = sheaf_verdict.witness_pair
        dxy = space.dist(wx, wy)
        ok_local, _ = is_lip1_loc(space, wf, cover)
        report["sheaf_witness"] = {
            "pair": [int(wx), int(wy)],
            "pair_coords": [gs.xy[wx].tolist(), gs.xy[wy].tolist()],
            "gap": to_json(sheaf_verdict.max_gap),
            "local_constant": _cover_local_ratio(space, cover, wf),
            "locally_lipschitz": bool(ok_local),
            "global_constant": float(abs(wf[wy] - wf[wx]) / dxy) if dxy > 0 else 0.0,
        }
        witness_field = wf

    return gs, space, a, b, report, [stencil_path], witness_field


def demo_slit(h: float = 0.02, stencil: int = 16, seed: int = 0) -> DemoResult:
    """The slit domain: not a length space, and the sheaf property fails."""
    domain = slit_plane(1.0, (-3.0, -3.0, 3.0, 3.0))
    gs, space, a, b, report, paths, witness = _run_common(
        "slit", domain, h, stencil, seed,
        marquee=((-1.0, 0.0), (1.0, 0.0)),
        sheaf_sources=((-h, 0.0),),
    )
    expected = {"length_space": False, "sheaf": False, "dgamma_check": "pass"}
    report["expected"] = expected
    report["verdict"] = "not a length space"
    report["ok"] = all(report[k] == v for k, v in expected.items())

    polylines = [gs.xy[list(p.samples)] for p in paths]
    values = witness.values if witness is not None else None
    svg = render_domain_svg(domain, polylines, points=gs.xy, point_values=values)
    return DemoResult(report, svg, witness, paths)


def demo_punctured(h: float = 0.02, stencil: int = 16, seed: int = 0,
                   eps: float = 0.1, depth: int = 2) -> DemoResult:
    """The punctured domain: a length space whose infimum is never attained."""
    # depth is capped by the slack schedule: splitting level n needs
    # eps * d * 4**-(n+1) to exceed the lattice midpoint defect of about
    # h/2, which at h = 0.02 and d = 2 stops the recursion after level 1
    domain = punctured_plane((-3.0, -3.0, 3.0, 3.0), h)
    gs, space, a, b, report, paths, witness = _run_common(
        "punctured", domain, h, stencil, seed,
        marquee=((-1.0, 0.0), (1.0, 0.0)),
        sheaf_sources=((-1.0, 0.0),),
    )

    bis = bisect_geodesic(space, a, b, eps=eps, depth=depth)
    bis_len = path_length(space, bis)
    paths.append(bis)
    report["paths"].append({"kind": "bisection", "eps": eps, "depth": depth,
                            "length": float(bis_len), "samples": len(bis)})

    d = report["d"]
    strict = all(p["length"] > d for p in report["paths"]) and report["d_ell"] > d
    report["paths_strictly_longer"] = bool(strict)
    expected = {"length_space": True, "sheaf": True, "dgamma_check": "pass",
                "paths_strictly_longer": True}
    report["expected"] = expected
    report["ok"] = all(report[k] == v for k, v in expected.items())
    report["verdict"] = "length, not geodesic" if report["ok"] else "unexpected"

    polylines = [gs.xy[list(p.samples)] for p in paths]
    svg = render_domain_svg(domain, polylines, points=gs.xy)
    return DemoResult(report, svg, witness, paths)


def demo_convex(h: float = 0.05, stencil: int = 16, seed: int = 0) -> DemoResult:
    """A convex box: length space, sheaf holds, dual identity closes."""
    domain = convex_box((0.0, 0.0, 1.0, 1.0))
    gs = sample_grid(domain, h, stencil)
    lo = float(gs.xy[:, 0].min())
    hi = float(gs.xy[:, 0].max())
    gs2, space, a, b, report, paths, witness = _run_common(
        "convex", domain, h, stencil, seed,
        marquee=((lo, lo), (hi, hi)),
        sheaf_sources=((lo, lo),),
    )
    # small convex samples afford the exhaustive sheaf decision
    if gs2.n <= 3000:
        cover = Cover.clearance(gs2, 2.0 * h)
        verdict = sheaf_check(space, cover, tol=_sheaf_tol(space, h))
        report["sheaf"] = bool(verdict.holds)
        report["sheaf_report"] = verdict.to_json()

    expected = {"length_space": True, "sheaf": True, "dgamma_check": "pass"}
    report["expected"] = expected
    report["verdict"] = "length space"
    report["ok"] = all(report[k] == v for k, v in expected.items())

    polylines = [gs2.xy[list(p.samples)] for p in paths]
    svg = render_domain_svg(domain, polylines, points=gs2.xy)
    return DemoResult(report, svg, witness, paths)


def run_demo(name: str, **kwargs) -> DemoResult:
    if name == "slit":
        kwargs.pop("eps", None)
        kwargs.pop("depth", None)
        return demo_slit(**kwargs)
    if name == "punctured":
        return demo_punctured(**kwargs)
    if name == "convex":
        kwargs.pop("eps", None)
        kwargs.pop("depth", None)
        return demo_convex(**kwargs)
    raise ValueError(f"unknown demo {name!r}; pick one of {DEMO_NAMES}")
