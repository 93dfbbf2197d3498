"""``hypermass`` command-line interface.

Exit codes: 0 ok, 2 bad input (arguments or scene), 3 unknown name,
4 numerical failure, 5 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import closed
from .errors import HypermassError, MeshTooFine
from .hcore import (
    MODELS,
    DirectedLine,
    HPoint,
    dist,
    from_hpoint,
    line_through,
    make_coords,
    to_hpoint,
)
from .lamina import (
    Constant,
    Disk,
    GeodesicPolygon,
    GeodesicTriangle,
    Lamina,
    PolarGraph,
    QuadratureConfig,
    RadialAffine,
    RegularPolygon,
    Wedge,
    area,
    delta_transversal,
    lamina_centroid,
    lamina_mass,
    lamina_moment,
)
from .linset import (
    LinearSet,
    linset_centroid,
    linset_mass,
    linset_moment_about_line,
)
from .pmass import PointMass, PointMassSystem, system_centroid, system_moment

EXIT_OK, EXIT_PARSE, EXIT_NAME, EXIT_NUMERIC, EXIT_VALIDATION = 0, 2, 3, 4, 5


class SceneError(Exception):
    """Malformed scene file (exit 2)."""


class UnknownName(Exception):
    """Reference to an object the scene does not define (exit 3)."""


# ---------------------------------------------------------------------------
# scenes
# ---------------------------------------------------------------------------

@dataclass
class Scene:
    model: str
    quad: QuadratureConfig
    points: Dict[str, HPoint] = field(default_factory=dict)
    masses: Dict[str, object] = field(default_factory=dict)
    lines: Dict[str, DirectedLine] = field(default_factory=dict)
    laminae: Dict[str, Lamina] = field(default_factory=dict)
    linear_sets: Dict[str, LinearSet] = field(default_factory=dict)

    def lookup(self, name: str):
        for kind in ("masses", "laminae", "linear_sets"):
            table = getattr(self, kind)
            if name in table:
                return kind, table[name]
        raise UnknownName(f"no mass, lamina or linear set named {name!r}")

    def line(self, name: str) -> DirectedLine:
        if name not in self.lines:
            raise UnknownName(f"no line named {name!r}")
        return self.lines[name]


def _point(spec, scene: Scene) -> HPoint:
    if isinstance(spec, str):
        if spec not in scene.points:
            raise UnknownName(f"no point named {spec!r}")
        return scene.points[spec]
    if not isinstance(spec, (list, tuple)):
        raise SceneError(f"bad point specification {spec!r}")
    return to_hpoint(make_coords(scene.model, [float(v) for v in spec]))


def _density(spec, scene: Scene):
    if spec is None:
        return Constant()
    if isinstance(spec, (int, float)):
        return Constant(float(spec))
    kind = spec.get("type", "constant")
    if kind == "constant":
        return Constant(float(spec.get("value", 1.0)))
    if kind == "radial_affine":
        return RadialAffine(float(spec["a"]), float(spec["b"]), _point(spec["center"], scene))
    raise SceneError(f"unknown density type {kind!r}")


def _region(spec, scene: Scene):
    kind = spec.get("type")
    if kind == "triangle":
        a, b, c = (_point(p, scene) for p in spec["vertices"])
        return GeodesicTriangle(a, b, c)
    if kind == "polygon":
        return GeodesicPolygon(tuple(_point(p, scene) for p in spec["vertices"]))
    if kind == "regular_polygon":
        return RegularPolygon(_point(spec["center"], scene), int(spec["n"]),
                              float(spec["inradius"]), float(spec.get("rotation", 0.0)))
    if kind == "disk":
        return Disk(_point(spec["center"], scene), float(spec["radius"]))
    if kind == "wedge":
        return Wedge(_point(spec["center"], scene), float(spec["radius"]),
                     float(spec["theta1"]), float(spec["theta2"]))
    if kind == "polar_graph":
        return PolarGraph(_point(spec["center"], scene), tuple(float(r) for r in spec["radii"]))
    raise SceneError(f"unknown region type {kind!r}")


def _linear_density(spec):
    if spec is None:
        return 1.0
    if isinstance(spec, (int, float)):
        return float(spec)
    if "affine" in spec:
        c0, c1 = (float(v) for v in spec["affine"])
        return lambda s: c0 + c1 * s
    raise SceneError(f"unknown linear density {spec!r}")


def _quad(overrides, base: QuadratureConfig) -> QuadratureConfig:
    allowed = {"radial_order", "angular_order", "max_depth", "tol", "workers", "radial_piece"}
    bad = set(overrides) - allowed
    if bad:
        raise SceneError(f"unknown quadrature keys {sorted(bad)}")
    kw = {k: getattr(base, k) for k in allowed}
    kw.update(overrides)
    return QuadratureConfig(**kw)


def load_scene(path: str, quad: QuadratureConfig) -> Scene:
    """Parse a JSON scene file; raise :class:`SceneError` on malformed input."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SceneError(f"cannot read scene {path}: {exc}") from exc
    try:
        return build_scene(data, quad)
    except (KeyError, TypeError, ValueError, SceneError) as exc:
        if isinstance(exc, SceneError):
            raise
        raise SceneError(f"invalid scene: {exc!r}") from exc


def build_scene(data: dict, quad: QuadratureConfig) -> Scene:
    model = data.get("model")
    if model not in MODELS:
        raise SceneError(f"model must be one of {sorted(MODELS)}, got {model!r}")
    seen = set()
    for kind in ("points", "masses", "lines", "laminae", "linear_sets"):
        for name in data.get(kind, {}):
            if name in seen:
                raise SceneError(f"duplicate name {name!r}")
            seen.add(name)
    scene = Scene(model, _quad(data.get("quadrature", {}), quad))
    for name, spec in data.get("points", {}).items():
        scene.points[name] = _point(list(spec), scene)
    for name, spec in data.get("masses", {}).items():
        if isinstance(spec, list):
            scene.masses[name] = PointMassSystem(
                PointMass(_point(m["at"], scene), float(m["weight"])) for m in spec)
        else:
            scene.masses[name] = PointMass(_point(spec["at"], scene), float(spec["weight"]))
    for name, spec in data.get("lines", {}).items():
        a, b = (_point(p, scene) for p in spec["through"])
        m = line_through(a, b)
        scene.lines[name] = m.reverse() if spec.get("reverse", False) else m
    for name, spec in data.get("laminae", {}).items():
        scene.laminae[name] = Lamina(_region(spec["region"], scene),
                                     _density(spec.get("density"), scene), scene.quad)
    for name, spec in data.get("linear_sets", {}).items():
        dens = _linear_density(spec.get("density"))
        if "from" in spec:
            scene.linear_sets[name] = LinearSet.segment(_point(spec["from"], scene),
                                                        _point(spec["to"], scene), dens)
        else:
            carrier = scene.line(spec["line"])
            scene.linear_sets[name] = LinearSet(
                carrier, tuple((float(a), float(b)) for a, b in spec["intervals"]), dens)
    return scene


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _coords(p: HPoint, tag: str) -> List[float]:
    c = from_hpoint(p, tag)
    return [float(getattr(c, f)) for f in c.__dataclass_fields__]


def _emit(report: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(report, sort_keys=False) + "\n")
        return
    for key, val in report.items():
        if isinstance(val, list) and val and isinstance(val[0], dict):
            out.write(f"{key}:\n")
            for row in val:
                out.write("  " + "  ".join(f"{k}={_fmt(v)}" for k, v in row.items()) + "\n")
        else:
            out.write(f"{key}: {_fmt(val)}\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def cmd_centroid(scene: Scene, name: str, model_out: str) -> dict:
    kind, obj = scene.lookup(name)
    rep = {"command": "centroid", "target": name, "model": model_out}
    if kind == "masses":
        pm = obj if isinstance(obj, PointMass) else system_centroid(obj)
        rep.update(location=_coords(pm.location, model_out), mass=float(pm.weight), error=0.0)
    elif kind == "laminae":
        c = lamina_centroid(obj)
        rep.update(location=_coords(c.location, model_out), mass=c.mass, error=c.error,
                   balance_residuals=list(c.balance_residuals), balance_scale=c.balance_scale)
        rep.update(_closed_form_note(obj, c.mass))
    else:
        pos = linset_centroid(obj)
        p = HPoint.from_vector(obj.points(pos))
        rep.update(location=_coords(p, model_out), arclength=pos, mass=linset_mass(obj, pos),
                   error=0.0)
    return rep


def _closed_form_note(L: Lamina, mass: float) -> dict:
    if isinstance(L.density, Constant) and isinstance(L.region, Disk):
        ref = L.density.value * closed.disk_mass(L.region.radius)
        return {"closed_form_mass": ref, "closed_form_rel_diff": abs(mass - ref) / ref}
    return {}


def cmd_moment(scene: Scene, name: str, line: str) -> dict:
    kind, obj = scene.lookup(name)
    m = scene.line(line)
    rep = {"command": "moment", "target": name, "line": line}
    if kind == "masses":
        rep.update(moment=system_moment([obj] if isinstance(obj, PointMass) else obj, m), error=0.0)
    elif kind == "laminae":
        e = lamina_moment(obj, m)
        rep.update(moment=e.value, error=e.error)
    else:
        rep.update(moment=linset_moment_about_line(obj, m), error=0.0)
    return rep


def cmd_mass(scene: Scene, name: str) -> dict:
    kind, obj = scene.lookup(name)
    rep = {"command": "mass", "target": name}
    if kind == "masses":
        pm = obj if isinstance(obj, PointMass) else system_centroid(obj)
        rep.update(mass=float(pm.weight), error=0.0)
    elif kind == "laminae":
        e = lamina_mass(obj)
        rep.update(mass=e.value, error=e.error)
        rep.update(_closed_form_note(obj, e.value))
    else:
        rep.update(mass=linset_mass(obj), error=0.0)
    return rep


# ---------------------------------------------------------------------------
# validation battery
# ---------------------------------------------------------------------------

DEFAULT_GRIDS = {
    "disk": {"r": [0.5, 1.0, 2.0]},
    "wedge": {"n": [2, 3, 4, 6], "r": [0.5, 1.0]},
    "triangle": {"seed": [0], "count": [5]},
    "ngon": {"n": [3, 4, 6, 12], "r": [0.5, 1.0]},
    "segment": {"d": [0.1, 1.0, 5.0]},
}
VALIDATION_TOL = {"segment": 1e-10}


def random_triangle(rng: np.random.Generator, spread: float = 1.5):
    """Three points at Gauss radius in ``[0.2, spread]`` with angular gaps of at least 0.3."""
    while True:
        th = np.sort(rng.uniform(0.0, 2 * math.pi, 3))
        gaps = np.diff(np.append(th, th[0] + 2 * math.pi))
        if np.min(gaps) < 0.3:
            continue
        pts = [HPoint.from_gauss(float(r), float(t)) for r, t in zip(rng.uniform(0.2, spread, 3), th)]
        try:
            return GeodesicTriangle(*pts)
        except HypermassError:
            continue


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def validate_rows(family: str, grid: Dict[str, list], quad: QuadratureConfig) -> List[dict]:
    rows = []
    if family == "disk":
        for r in grid["r"]:
            q = lamina_mass(Lamina(Disk(HPoint.origin(), r), quad=quad)).value
            c = closed.disk_mass(r)
            rows.append({"r": r, "quantity": "mass", "closed": c, "quadrature": q, "rel_diff": _rel(q, c)})
            q = area(Disk(HPoint.origin(), r), quad).value
            c = closed.disk_area(r)
            rows.append({"r": r, "quantity": "area", "closed": c, "quadrature": q, "rel_diff": _rel(q, c)})
    elif family == "wedge":
        for n in grid["n"]:
            for r in grid["r"]:
                ref = closed.wedge_centroid(int(n), r)
                c = lamina_centroid(Lamina(Wedge.sector(int(n), r), quad=quad))
                d = dist(c.location, HPoint.origin())
                rows.append({"n": int(n), "r": r, "quantity": "d_n", "closed": ref.d_n, "quadrature": d,
                             "rel_diff": _rel(d, ref.d_n)})
                rows.append({"n": int(n), "r": r, "quantity": "mass", "closed": ref.mass,
                             "quadrature": c.mass, "rel_diff": _rel(c.mass, ref.mass)})
    elif family == "triangle":
        for seed in grid["seed"]:
            rng = np.random.default_rng(int(seed))
            for k in range(int(grid["count"][0])):
                t = random_triangle(rng)
                L = Lamina(t, quad=quad)
                c = lamina_centroid(L)
                o = closed.median_point(*t.vertices)
                rows.append({"seed": int(seed), "k": k, "quantity": "centroid_offset", "closed": 0.0,
                             "quadrature": dist(c.location, o), "rel_diff": dist(c.location, o)})
                f = closed.triangle_mass_formula(*t.vertices)
                rows.append({"seed": int(seed), "k": k, "quantity": "mass", "closed": f,
                             "quadrature": c.mass, "rel_diff": _rel(c.mass, f)})
    elif family == "ngon":
        for n in grid["n"]:
            for r in grid["r"]:
                n = int(n)
                if math.cosh(r) * math.sin(math.pi / n) >= 1.0:
                    rows.append({"n": n, "r": r, "quantity": "skipped", "closed": float("nan"),
                                 "quadrature": float("nan"), "rel_diff": 0.0})
                    continue
                L = Lamina(RegularPolygon(HPoint.origin(), n, r), quad=quad)
                q = lamina_mass(L).value
                c = closed.ngon_mass(n, r)
                rows.append({"n": n, "r": r, "quantity": "mass", "closed": c, "quadrature": q,
                             "rel_diff": _rel(q, c)})
                q = area(L.region, quad).value
                c = closed.ngon_area(n, r)
                rows.append({"n": n, "r": r, "quantity": "area", "closed": c, "quadrature": q,
                             "rel_diff": _rel(q, c)})
    elif family == "segment":
        m = DirectedLine(0.0, 1.0, 0.0)
        for d in grid["d"]:
            q = linset_mass(LinearSet(m, ((-d / 2, d / 2),)))
            c = closed.segment_mass(d)
            rows.append({"d": d, "quantity": "mass", "closed": c, "quadrature": q, "rel_diff": _rel(q, c)})
    else:
        raise SceneError(f"unknown family {family!r}")
    return rows


def _parse_grid(items: Optional[Sequence[str]], family: str) -> Dict[str, list]:
    grid = {k: list(v) for k, v in DEFAULT_GRIDS[family].items()}
    for item in items or ():
        key, _, vals = item.partition("=")
        if key not in grid or not vals:
            raise SceneError(f"bad grid entry {item!r}; keys for {family}: {sorted(grid)}")
        try:
            grid[key] = [float(v) for v in vals.split(",")]
        except ValueError as exc:
            raise SceneError(f"bad grid values in {item!r}") from exc
    return grid


# ---------------------------------------------------------------------------
# convergence study
# ---------------------------------------------------------------------------

def converge_rows(L: Lamina, deltas: Sequence[float], seed: int) -> List[dict]:
    ref = lamina_centroid(L)
    rows = []
    for d in deltas:
        t = delta_transversal(L, d, seed=seed)
        c = t.centroid()
        rows.append({"delta": float(d), "centroid_error": dist(c.location, ref.location),
                     "mass_error": abs(c.weight - ref.mass), "cells": len(t.system)})
    return rows


def _csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row.values()])
    return buf.getvalue()


def _parse_deltas(text: str) -> List[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise SceneError(f"bad delta list {text!r}") from exc
    if any(not v > 0 for v in vals) or any(b >= a for a, b in zip(vals[:-1], vals[1:])):
        raise SceneError("deltas must be positive and strictly decreasing")
    return vals


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    # on subcommands the defaults are suppressed so they never override the top level
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--tol", type=float, default=d(1e-8), help="relative quadrature tolerance")
    p.add_argument("--sequential", action="store_true", default=d(False), help="single-threaded quadrature")
    p.add_argument("--model-out", choices=sorted(MODELS), default=d(None), help="model for printed coordinates")
    p.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypermass",
                                description="Centroids, moments and masses in the hyperbolic plane.")
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    s = add("centroid", help="centroid location and mass")
    s.add_argument("scene")
    s.add_argument("name")
    s = add("moment", help="signed moment about a line")
    s.add_argument("scene")
    s.add_argument("name")
    s.add_argument("line")
    s = add("mass", help="hyperbolic mass")
    s.add_argument("scene")
    s.add_argument("name")
    s = add("validate", help="closed forms against quadrature")
    s.add_argument("family", choices=sorted(DEFAULT_GRIDS))
    s.add_argument("--grid", action="append", metavar="KEY=V1,V2,...")
    s = add("converge", help="delta-transversal convergence study (CSV)")
    s.add_argument("scene")
    s.add_argument("name")
    s.add_argument("--deltas", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--csv", metavar="PATH", help="write the CSV here instead of stdout")
    return p


def _run(args, out) -> int:
    workers = 1 if args.sequential else min(4, os.cpu_count() or 1)
    quad = QuadratureConfig(tol=args.tol, workers=workers)
    if args.command == "validate":
        rows = validate_rows(args.family, _parse_grid(args.grid, args.family), quad)
        tol = VALIDATION_TOL.get(args.family, 1e-6)
        ok = all(r["rel_diff"] <= tol for r in rows)
        _emit({"command": "validate", "family": args.family, "tolerance": tol, "rows": rows,
               "status": "pass" if ok else "fail"}, args.json, out)
        return EXIT_OK if ok else EXIT_VALIDATION

    scene = load_scene(args.scene, quad)
    model_out = args.model_out or scene.model
    if args.command == "centroid":
        rep = cmd_centroid(scene, args.name, model_out)
    elif args.command == "moment":
        rep = cmd_moment(scene, args.name, args.line)
    elif args.command == "mass":
        rep = cmd_mass(scene, args.name)
    else:
        if args.name not in scene.laminae:
            raise UnknownName(f"no lamina named {args.name!r}")
        rows = converge_rows(scene.laminae[args.name], _parse_deltas(args.deltas), args.seed)
        text = _csv(rows)
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                fh.write(text)
            rep = {"command": "converge", "target": args.name, "seed": args.seed, "rows": rows}
        elif args.json:
            rep = {"command": "converge", "target": args.name, "seed": args.seed, "rows": rows}
        else:
            out.write(text)
            return EXIT_OK
    _emit(rep, args.json, out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args, out)
    except SceneError as exc:
        print(f"hypermass: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnknownName as exc:
        print(f"hypermass: {exc}", file=sys.stderr)
        return EXIT_NAME
    except (ArithmeticError, MeshTooFine) as exc:
        print(f"hypermass: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (HypermassError, ValueError) as exc:
        print(f"hypermass: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
