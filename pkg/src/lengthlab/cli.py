"""Deterministic command-line front end.

Subcommands: validate, length, sheaf, geodesic, demo.  Inputs are the JSON
documents described in the README; outputs are JSON (default), CSV for
tabular reports, and SVG for domain-backed runs.  Exit codes: 0 a passing
or completed run, 1 a FAIL verdict, 2 a usage or input error.  Identical
invocations produce byte-identical outputs.
"""

import argparse
import json
import sys
from pathlib import Path as FsPath

import numpy as np

from .demo import DEMO_NAMES, run_demo
from .domains import domain_from_json, euclidean_length_metric, sample_grid
from .errors import LengthLabError
from .extreal import INF, to_json
from .lengthmetric import bisect_geodesic, induced_length_metric, is_length_space
from .paths import path_length
from .sheaf import Cover, ScalarField, sheaf_check
from .spaces import space_from_json, validate_wide_metric
from .svgout import render_domain_svg


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return to_json(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out:
        FsPath(out).parent.mkdir(parents=True, exist_ok=True)
        FsPath(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _fail_usage(message: str) -> int:
    sys.stdout.write(_dump_json({"error": message}))
    return 2


def _parse_point(spec: str, gs):
    if "," in spec:
        x, y = (float(v) for v in spec.split(",", 1))
        return gs.node_at(x, y)
    return int(spec)


def _csv_rows(rows) -> str:
    lines = [",".join(rows[0])]
    for row in rows[1:]:
        lines.append(",".join("" if v is None else str(v) for v in row))
    return "\n".join(lines) + "\n"


# -- subcommands --------------------------------------------------------------

def _cmd_validate(args) -> int:
    space = space_from_json(_load_json(args.space))
    report = validate_wide_metric(space)
    _emit(_dump_json(report.to_json()), args.out)
    return 0 if report.ok else 1


def _cmd_length(args) -> int:
    doc = _load_json(args.input)
    if "bbox" in doc:
        domain = domain_from_json(doc)
        gs = sample_grid(domain, args.h, args.stencil)
        space = gs.space()
        source = _parse_point(args.source, gs)
        dl = euclidean_length_metric(gs, source)
        mode = "stencil"
    else:
        space = space_from_json(doc)
        gs = None
        source = int(args.source)
        dl = induced_length_metric(space, args.h, source).dl
        mode = "step-graph"
    report = is_length_space(space, args.h, tol=args.tol, sources=[source]).to_json()
    report["mode_metric"] = mode
    report["source"] = int(source)
    if args.target is not None:
        target = _parse_point(args.target, gs) if gs is not None else int(args.target)
        report["target"] = int(target)
        report["d"] = to_json(space.dist(source, target))
        report["d_ell"] = to_json(float(dl[target]))
    if args.format == "csv":
        rows = [("id", "d", "d_ell")]
        drow = space.dist_row(source)
        rows += [(i, to_json(float(drow[i])), to_json(float(dl[i]))) for i in range(space.n)]
        _emit(_csv_rows(rows), args.out)
    else:
        _emit(_dump_json(report), args.out)
    return 0 if report["verdict"] == "PASS" else 1


def _resolve_cover(spec: str, space, gs):
    if spec.startswith("balls:"):
        return Cover.balls(space, float(spec.split(":", 1)[1]))
    if spec.startswith("clearance:"):
        if gs is None:
            raise LengthLabError("clearance covers need a domain input")
        return Cover.clearance(gs, float(spec.split(":", 1)[1]))
    doc = _load_json(spec)
    if isinstance(doc, dict) and doc.get("kind") == "clearance":
        if gs is None:
            raise LengthLabError("clearance covers need a domain input")
        return Cover.clearance(gs, float(doc["r0"]))
    if isinstance(doc, dict) and doc.get("kind") == "balls":
        return Cover.balls(space, float(doc["r"]))
    return Cover.explicit(doc)


def _cmd_sheaf(args) -> int:
    doc = _load_json(args.space)
    if "bbox" in doc:
        domain = domain_from_json(doc)
        gs = sample_grid(domain, args.h, args.stencil)
        space = gs.space()
    else:
        space = space_from_json(doc)
        gs = None
    cover = _resolve_cover(args.cover, space, gs)
    verdict = sheaf_check(space, cover, tol=args.tol)
    _emit(_dump_json(verdict.to_json()), args.out)
    if verdict.witness_field is not None and args.witness_out:
        _emit(_dump_json(verdict.witness_field.to_json()), args.witness_out)
    return 0 if verdict.holds else 1


def _cmd_geodesic(args) -> int:
    space = space_from_json(_load_json(args.space))
    path = bisect_geodesic(space, args.x, args.y, eps=args.eps, depth=args.depth)
    report = {
        "path": path.to_json(),
        "length": path_length(space, path),
        "d": to_json(space.dist(args.x, args.y)),
        "eps": args.eps,
        "depth": args.depth,
    }
    _emit(_dump_json(report), args.out)
    return 0


def _cmd_demo(args) -> int:
    kwargs = {"h": args.h, "stencil": args.stencil, "seed": args.seed}
    if args.name == "punctured":
        kwargs.update(eps=args.eps, depth=args.depth)
    result = run_demo(args.name, **kwargs)
    if args.format == "svg":
        _emit(result.svg, args.out)
    else:
        _emit(_dump_json(result.report), args.out)
    if args.out:
        stem = FsPath(args.out)
        base = stem.with_suffix("")
        if args.format != "svg":
            FsPath(f"{base}.svg").write_text(result.svg)
        if result.witness_field is not None:
            FsPath(f"{base}_witness.json").write_text(
                _dump_json(result.witness_field.to_json()))
    return 0 if result.ok else 1


# -- parser -------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lengthlab",
        description="length metrics, Lipschitz sheaf checks, and planar-domain demos",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the wide-sense metric axioms")
    v.add_argument("space", help="space JSON file")
    v.add_argument("--out")
    v.set_defaults(func=_cmd_validate)

    ln = sub.add_parser("length", help="induced length metric and verdict")
    ln.add_argument("input", help="space or domain JSON file")
    ln.add_argument("--h", type=float, required=True)
    ln.add_argument("--stencil", type=int, default=16, choices=(8, 16))
    ln.add_argument("--source", required=True, help="point id or x,y")
    ln.add_argument("--target", default=None, help="point id or x,y")
    ln.add_argument("--tol", type=float, default=None)
    ln.add_argument("--format", default="json", choices=("json", "csv"))
    ln.add_argument("--out")
    ln.set_defaults(func=_cmd_length)

    sh = sub.add_parser("sheaf", help="sheaf decision with a cover")
    sh.add_argument("space", help="space or domain JSON file")
    sh.add_argument("--cover", required=True,
                    help="cover JSON file, balls:R, or clearance:R0")
    sh.add_argument("--h", type=float, default=0.05, help="grid spacing for domains")
    sh.add_argument("--stencil", type=int, default=16, choices=(8, 16))
    sh.add_argument("--tol", type=float, default=None)
    sh.add_argument("--out")
    sh.add_argument("--witness-out")
    sh.set_defaults(func=_cmd_sheaf)

    g = sub.add_parser("geodesic", help="dyadic near-geodesic between two points")
    g.add_argument("space", help="space JSON file")
    g.add_argument("--x", type=int, required=True)
    g.add_argument("--y", type=int, required=True)
    g.add_argument("--eps", type=float, default=0.1)
    g.add_argument("--depth", type=int, default=8)
    g.add_argument("--out")
    g.set_defaults(func=_cmd_geodesic)

    d = sub.add_parser("demo", help="run a named domain scenario")
    d.add_argument("name", choices=DEMO_NAMES)
    d.add_argument("--h", type=float, default=0.02)
    d.add_argument("--stencil", type=int, default=16, choices=(8, 16))
    d.add_argument("--eps", type=float, default=0.1)
    d.add_argument("--depth", type=int, default=2)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--format", default="json", choices=("json", "svg"))
    d.add_argument("--out")
    d.set_defaults(func=_cmd_demo)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (LengthLabError, OSError, json.JSONDecodeError, ValueError) as exc:
        return _fail_usage(f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
