"""Command line front end: distances, figures, and verification suites.

Subcommands
  dist          print the distance between two interior points
  ball          render a metric ball boundary over the body outline
  cover         build the bounded-multiplicity cover and audit it
  verify        run a named invariant suite and emit a JSON/CSV report
  probe-corona  boundary gap probe at growing radii
  packing       greedy separated-set packing against the counting bound

Exit codes: 0 success, 1 usage or parse error, 2 violated precondition,
3 violated property.  The env var HILBERT_LOG picks the log level.
All emitted files are deterministic functions of the flags and the seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .bodies import (
    REL_BOUNDARY_TOL,
    TAU_P,
    TAU_PAR,
    ConvexBody,
    Polygon,
    is_strictly_convex,
    load_body,
)
from .coarse import corona_probe, flat_boundary_ray_bound, greedy_packing, verify_contraction
from .cover import (
    arc_tolerance,
    decomposition_audit,
    footprint_diameter,
    initial_half_counts,
    is_admissible_over,
    multiplicity_probe,
    piece_diameter,
    pieces_from_decompositions,
    ray_pair_distances,
    refine_to_depth,
    refinement_arc_counts,
)
from .errors import BadRadii, CollinearInput, GeometryError
from .metric import (
    MODE_CONCURRENT,
    ball_boundary,
    concurrency_defect,
    distance,
    distance_pairs,
    projective_transfer_defect,
    ray_point,
    ray_spec,
    sphere_point,
)
from .sampling import sample_interior
from .svgout import render_ball, render_cover, render_packing

log = logging.getLogger("hilbertgeom")

TWO_PI = 2.0 * math.pi


# -- argument plumbing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _point_arg(text: str) -> tuple[float, ...]:
    try:
        coords = tuple(float(c) for c in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad point {text!r}: {e}") from None
    if len(coords) < 2:
        raise argparse.ArgumentTypeError(f"point needs at least 2 coordinates, got {text!r}")
    return coords


def _radii_arg(text: str) -> tuple[float, ...]:
    try:
        radii = tuple(float(c) for c in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad radii list {text!r}: {e}") from None
    if not radii or any(r <= 0 for r in radii):
        raise argparse.ArgumentTypeError("radii must be positive")
    return radii


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--body", required=True, help="domain spec JSON path")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--out", default=".", help="output directory (default .)")
    common.add_argument("--samples", type=int, default=200, help="per-row sample count")
    common.add_argument("--tol", type=_positive_float, default=1e-9,
                        help="base pass tolerance (default 1e-9)")

    p = _Parser(prog="hilbertgeom", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hilbertgeom {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    d = sub.add_parser("dist", parents=[common], help="distance between two points")
    d.add_argument("--x", type=_point_arg, required=True)
    d.add_argument("--y", type=_point_arg, required=True)
    d.set_defaults(func=cmd_dist)

    b = sub.add_parser("ball", parents=[common], help="render a metric ball")
    b.add_argument("--center", type=_point_arg, required=True)
    b.add_argument("--t", type=_positive_float, required=True, help="ball radius, > 0")
    b.add_argument("--n", type=int, default=256, help="boundary sample count")
    b.set_defaults(func=cmd_ball)

    c = sub.add_parser("cover", parents=[common], help="build and audit the cover")
    c.add_argument("--R", type=_positive_float, default=1.0, help="sphere step")
    c.add_argument("--levels", type=int, default=4, help="sphere levels (>= 1)")
    c.add_argument("--r", type=_positive_float, default=0.2, help="probe ball radius")
    c.add_argument("--trials", type=int, default=2000, help="multiplicity probe trials")
    c.add_argument("--center", type=_point_arg, default=None, help="base point override")
    c.set_defaults(func=cmd_cover)

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("--suite", required=True,
                   choices=["metric", "coarse", "corona", "asdim", "all"])
    v.set_defaults(func=cmd_verify)

    pc = sub.add_parser("probe-corona", parents=[common], help="boundary gap probe")
    pc.add_argument("--delta", type=_positive_float, default=0.05)
    pc.add_argument("--C", type=_positive_float, default=1.0)
    pc.add_argument("--radii", type=_radii_arg, default=(2.0, 4.0, 8.0, 16.0))
    pc.set_defaults(func=cmd_probe_corona)

    pk = sub.add_parser("packing", parents=[common], help="greedy separated packing")
    pk.add_argument("--R", type=_positive_float, default=2.0, help="ball radius")
    pk.add_argument("--eps", type=_positive_float, default=0.25, help="separation half-gap")
    pk.add_argument("--trials", type=int, default=20000)
    pk.add_argument("--center", type=_point_arg, default=None)
    pk.set_defaults(func=cmd_packing)
    return p


def _config_header(args, extra: dict | None = None) -> dict:
    cfg = {
        "tool": f"hilbertgeom {__version__}",
        "subcommand": args.cmd,
        "body": args.body,
        "seed": int(args.seed),
        "samples": int(args.samples),
        "tolerances": {
            "base": float(args.tol),
            "point_coincidence": TAU_P,
            "parallelism": TAU_PAR,
            "boundary_rel": REL_BOUNDARY_TOL,
        },
    }
    if extra:
        cfg.update(extra)
    return cfg


def _write_json(path: str, obj: dict) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2))
        fh.write("\n")


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    def cell(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return repr(v)
        return str(v)

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([cell(v) for v in r])


# -- invariant rows ----------------------------------------------------------


def _row(name: str, defect: float, tol: float, samples: int, note: str = "") -> dict:
    return {
        "name": name,
        "passed": bool(defect <= tol),
        "defect": float(defect),
        "tolerance": float(tol),
        "samples": int(samples),
        "note": note,
    }


def ray_monotonicity_defect(body: ConvexBody, rng: np.random.Generator) -> float:
    """Largest decrease of d(l1(t), l2(t)) over one random s < t pair."""
    o = sample_interior(body, 1, rng, clearance=0.02 * body.euclidean_diameter())[0]
    while True:
        th = rng.uniform(0.0, TWO_PI, 2)
        if abs(math.remainder(th[0] - th[1], TWO_PI)) > 1e-3:
            break
    s = rng.uniform(0.05, 8.0)
    t = s + rng.uniform(0.05, 4.0)
    d = ray_pair_distances(body, o, th[0], th[1], np.array([s, t]))
    return float(d[0] - d[1])


def concurrency_scatter_defect(body: ConvexBody, rng: np.random.Generator) -> float:
    """Concurrency/parallelism defect for one random equidistant pair.

    Configurations whose three lines are nearly but not exactly parallel put
    the meeting point far away and amplify boundary rounding in the scatter,
    so draws with pairwise direction cross below 1e-3 are rejected.
    """
    diam = body.euclidean_diameter()
    while True:
        o = sample_interior(body, 1, rng, clearance=0.02 * diam)[0]
        th = rng.uniform(0.0, TWO_PI, 2)
        sep = abs(math.remainder(th[0] - th[1], TWO_PI))
        if sep < 0.1 or abs(sep - math.pi) < 0.1:
            continue
        t = rng.uniform(0.2, 4.0)
        a2 = sphere_point(body, o, th[0], t)
        b2 = sphere_point(body, o, th[1], t)
        try:
            rep = concurrency_defect(body, o, a2, b2)
        except CollinearInput:
            continue
        if rep.mode == MODE_CONCURRENT and rep.min_cross < 1e-3:
            continue
        return float(rep.defect)


def coray_projection_defect(body: ConvexBody, rng: np.random.Generator) -> float:
    """d(lx(s), ly(s)) - 2 d(x,y) at one random co-ray parameter s."""
    diam = body.euclidean_diameter()
    while True:
        o = sample_interior(body, 1, rng, clearance=0.02 * diam)[0]
        x = sample_interior(body, 1, rng)[0]
        if np.linalg.norm(x - o) < 1e-3 * diam:
            continue
        r = rng.uniform(0.2, 2.0)
        u = rng.normal(size=2)
        y = ray_point(ray_spec(body, x, u), rng.uniform(0.1, 1.0) * r)
        if np.linalg.norm(y - o) < 1e-3 * diam:
            continue
        dxy = distance(body, x, y)
        dox = distance(body, o, x)
        doy = distance(body, o, y)
        if dox > doy:
            x, y = y, x
            dox, doy = doy, dox
        s = rng.uniform(0.01, doy)
        lx = ray_point(ray_spec(body, o, x - o), s)
        ly = ray_point(ray_spec(body, o, y - o), s)
        return float(distance(body, lx, ly) - 2.0 * dxy)


def footprint_defect(body: ConvexBody, o, rng: np.random.Generator,
                     R: float = 1.0, r: float = 0.2) -> float:
    """Radial footprint diameter minus 4r for one ball centered on a sphere."""
    i = int(rng.integers(1, 4))
    center = sphere_point(body, o, float(rng.uniform(0.0, TWO_PI)), i * R)
    diam = footprint_diameter(body, o, center, r, i * R, samples=48,
                              seed=int(rng.integers(2**31)))
    return float(diam - 4.0 * r)


def _suite_metric(body: ConvexBody, seed: int, n: int, tol: float) -> list[dict]:
    rows = []

    rng = np.random.default_rng([seed, 1])
    X = sample_interior(body, n, rng)
    Y = sample_interior(body, n, rng)
    d1 = distance_pairs(body, X, Y)
    d2 = distance_pairs(body, Y, X)
    rows.append(_row("symmetry_bit_exact", float(np.max(np.abs(d1 - d2))), 0.0, n))

    rng = np.random.default_rng([seed, 2])
    X = sample_interior(body, n, rng)
    Y = sample_interior(body, n, rng)
    Z = sample_interior(body, n, rng)
    slack = distance_pairs(body, X, Z) - distance_pairs(body, X, Y) - distance_pairs(body, Y, Z)
    rows.append(_row("triangle_inequality", float(np.max(slack)), tol, n))

    rng = np.random.default_rng([seed, 3])
    X = sample_interior(body, n, rng)
    Y = sample_interior(body, n, rng)
    lam = rng.uniform(0.05, 0.95, n)[:, None]
    Z = X + lam * (Y - X)
    gd = distance_pairs(body, X, Z) + distance_pairs(body, Z, Y) - distance_pairs(body, X, Y)
    rows.append(_row("segments_are_geodesics", float(np.max(np.abs(gd))), tol, n))

    rng = np.random.default_rng([seed, 4])
    O = sample_interior(body, n, rng)
    X = sample_interior(body, n, rng)
    Y = sample_interior(body, n, rng)
    Z = X + rng.uniform(0.0, 1.0, n)[:, None] * (Y - X)
    conv = distance_pairs(body, O, Z) - np.maximum(
        distance_pairs(body, O, X), distance_pairs(body, O, Y)
    )
    rows.append(_row("ball_convexity", float(np.max(conv)), tol, n))

    rng = np.random.default_rng([seed, 5])
    worst_rad, worst_cross = 0.0, 0.0
    m = 256
    for t in (0.5, 2.0):
        c = sample_interior(body, 1, rng, clearance=0.05 * body.euclidean_diameter())[0]
        bb = ball_boundary(body, c, t, m)
        d = distance_pairs(body, np.broadcast_to(c, bb.samples.shape), bb.samples)
        worst_rad = max(worst_rad, float(np.max(np.abs(d - t))))
        e = np.roll(bb.samples, -1, axis=0) - bb.samples
        crosses = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        worst_cross = max(worst_cross, float(np.max(-crosses)))
    rows.append(_row("ball_boundary_radius", worst_rad, tol, 2 * m))
    rows.append(_row("ball_boundary_euclidean_convex", worst_cross, tol, 2 * m))

    rng = np.random.default_rng([seed, 6])
    worst = max(projective_transfer_defect(rng) for _ in range(n))
    rows.append(_row("cross_ratio_projective_invariance", worst, tol, n))
    return rows


def _suite_coarse(body: ConvexBody, seed: int, n: int, tol: float) -> list[dict]:
    rows = []
    o = body.interior_seed()

    for k, (R, r) in enumerate([(2.0, 1.0), (3.0, 0.5), (1.0, 1.0)]):
        rep = verify_contraction(body, o, R, o, r, samples=n, seed=seed + k)
        rows.append(_row(f"contraction_R{R:g}_r{r:g}", rep.max_violation, tol, n,
                         note=f"D={rep.D:.6e}"))

    trials = max(1000, 10 * n)
    for k, (R, eps) in enumerate([(2.0, 0.25), (3.0, 0.5)]):
        rep = greedy_packing(body, o, R, eps, trials, seed + 50 + k)
        rows.append(_row(f"packing_bound_R{R:g}_eps{eps:g}",
                         float(rep.count - rep.bound), 0.0, trials,
                         note=f"count={rep.count} bound={rep.bound:.3f}"))
        sep_defect = 0.0
        if rep.count >= 2:
            ii, jj = np.triu_indices(rep.count, k=1)
            dmin = float(np.min(distance_pairs(body, rep.points[ii], rep.points[jj])))
            sep_defect = max(0.0, 2.0 * eps - dmin)
        rows.append(_row(f"packing_separation_R{R:g}_eps{eps:g}", sep_defect, 0.0, rep.count))

    rng = np.random.default_rng([seed, 60])
    clearance = 0.05 * body.euclidean_diameter()
    A = sample_interior(body, min(n, 200), rng, clearance)
    ii, jj = np.triu_indices(len(A), k=1)
    diam = float(np.max(distance_pairs(body, A[ii], A[jj])))
    rows.append(_row("clearance_sets_bounded", 0.0 if math.isfinite(diam) else math.inf,
                     0.0, len(A), note=f"sampled diameter {diam:.4f} at clearance {clearance:.4f}"))
    return rows


def _suite_corona(body: ConvexBody, seed: int, n: int, tol: float) -> list[dict]:
    rows = []
    o = body.interior_seed()
    sc = is_strictly_convex(body)
    rows.append(_row("strictly_convex", 0.0, 0.0, 0, note=str(sc).lower()))

    if sc:
        samples = min(max(10 * n, 1000), 5000)
        rep = corona_probe(body, o, 0.05, 1.0, (2.0, 4.0, 8.0, 16.0), samples, seed)
        gaps = ", ".join(f"{g:.3e}" for g in rep.sup_euclidean_gap)
        rows.append(_row("corona_gap_vanishes", rep.sup_euclidean_gap[-1], 0.1,
                         samples, note=f"gaps [{gaps}]"))
        return rows

    if not isinstance(body, Polygon):
        rows.append(_row("flat_edge_ray_bound", 0.0, 0.0, 0,
                         note="skipped: flat edge location needs explicit vertices"))
        return rows

    V = body.vertices
    E = np.roll(V, -1, axis=0) - V
    k = int(np.argmax(np.linalg.norm(E, axis=1)))
    alpha, beta = V[k], V[(k + 1) % len(V)]
    xi = alpha + 0.25 * (beta - alpha)
    eta = alpha + 0.75 * (beta - alpha)
    bound = flat_boundary_ray_bound(body, alpha, beta, xi, eta)
    ray_x = ray_spec(body, o, xi - o)
    ray_e = ray_spec(body, o, eta - o)
    ts = np.linspace(0.5, 20.0, 40)
    worst = max(
        distance(body, ray_point(ray_x, float(t)), ray_point(ray_e, float(t))) for t in ts
    ) - bound
    rows.append(_row("flat_edge_ray_bound", worst, tol, len(ts),
                     note=f"bound={bound:.9f}"))

    # Isotropic direction sampling cannot witness persistence at large radii:
    # edge-parallel steps need |sin phi| below the boundary gap (~e^-t), so the
    # directions that keep the Euclidean gap open have vanishing measure.  Probe
    # along the ray pair aimed at the flat edge instead; its Hilbert distance
    # stays <= bound while the Euclidean gap tends to |xi - eta| > 0.
    gap16 = float(np.linalg.norm(ray_point(ray_x, 16.0) - ray_point(ray_e, 16.0)))
    rows.append(_row("corona_gap_persists", 0.05 - gap16, 0.0, len(ts),
                     note=f"euclidean gap 0.05 <= {gap16:.4f} at radius 16 "
                          f"along rays toward the flat edge"))
    return rows


def _suite_asdim(body: ConvexBody, seed: int, n: int, tol: float) -> list[dict]:
    rows = []
    o = body.interior_seed()

    rng = np.random.default_rng([seed, 41])
    rows.append(_row("ray_pair_monotonicity",
                     max(ray_monotonicity_defect(body, rng) for _ in range(n)), tol, n))

    rng = np.random.default_rng([seed, 42])
    rows.append(_row("equidistance_lines_concurrency",
                     max(concurrency_scatter_defect(body, rng) for _ in range(n)), 1e-7, n,
                     note="conditioned on pairwise line cross >= 1e-3"))

    rng = np.random.default_rng([seed, 43])
    rows.append(_row("coray_projection_2r_bound",
                     max(coray_projection_defect(body, rng) for _ in range(n)), tol, n))

    rng = np.random.default_rng([seed, 44])
    nf = max(10, n // 10)
    rows.append(_row("projection_footprint_4r",
                     max(footprint_defect(body, o, rng) for _ in range(nf)),
                     arc_tolerance(1.0), nf))

    R, r, levels = 1.0, 0.2, 3
    decs = refine_to_depth(body, o, R, levels)

    c1, c2 = initial_half_counts(decs[0])
    evens = int(c1 % 2 == 0) + int(c2 % 2 == 0)
    for lo_dec, up_dec in zip(decs, decs[1:]):
        evens += sum(1 for c in refinement_arc_counts(up_dec, lo_dec) if c % 2 == 0)
    rows.append(_row("decomposition_odd_counts", float(evens), 0.0, levels))

    adm = all(is_admissible_over(up_dec, lo_dec) for lo_dec, up_dec in zip(decs, decs[1:]))
    rows.append(_row("decomposition_admissible", 0.0 if adm else 1.0, 0.0, levels - 1))

    worst_arc = 0.0
    arcs = 0
    for dec in decs:
        for a in decomposition_audit(dec, R):
            worst_arc = max(worst_arc, R - a["start_reach"], a["diameter"] - 4.0 * R)
            arcs += 1
    rows.append(_row("arc_reach_and_diameter", worst_arc, arc_tolerance(R), arcs))

    pieces = pieces_from_decompositions(body, o, R, decs)
    dmax = max(piece_diameter(p, 64) for p in pieces)
    rows.append(_row("piece_diameter_10R", dmax - 10.0 * R, arc_tolerance(R), len(pieces),
                     note=f"max diameter {dmax:.6f} over {len(pieces)} pieces"))

    trials = min(1000, 5 * n)
    mrep = multiplicity_probe(pieces, r, trials, seed)
    hist = ", ".join(f"{k}:{v}" for k, v in sorted(mrep.histogram.items()))
    rows.append(_row("ball_multiplicity_le_3", float(mrep.max_count - 3), 0.0,
                     trials, note=f"histogram {{{hist}}}"))
    return rows


_SUITES = {
    "metric": _suite_metric,
    "coarse": _suite_coarse,
    "corona": _suite_corona,
    "asdim": _suite_asdim,
}


def run_suite(body: ConvexBody, suite: str, seed: int, n: int, tol: float) -> list[dict]:
    names = list(_SUITES) if suite == "all" else [suite]
    rows = []
    for name in names:
        log.info("running suite %s", name)
        for row in _SUITES[name](body, seed, n, tol):
            row["suite"] = name
            rows.append(row)
    return rows


# -- subcommands -------------------------------------------------------------


def cmd_dist(args) -> int:
    body = load_body(args.body)
    print("%.12f" % distance(body, args.x, args.y))
    return 0


def cmd_ball(args) -> int:
    body = load_body(args.body)
    if args.n < 3:
        print("error: --n must be at least 3", file=sys.stderr)
        return 1
    bb = ball_boundary(body, args.center, args.t, args.n)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "ball.svg")
    with open(path, "w") as fh:
        fh.write(render_ball(body, bb.samples, bb.center))
    print(path)
    return 0


def cmd_cover(args) -> int:
    body = load_body(args.body)
    R, r, levels = args.R, args.r, args.levels
    if levels < 1:
        print("error: --levels must be at least 1", file=sys.stderr)
        return 1
    if not R > 4.0 * r:
        raise BadRadii(f"cover audit requires R > 4r, got R={R:g}, r={r:g}")
    o = np.asarray(args.center, dtype=float) if args.center else body.interior_seed()

    log.info("decomposing %d sphere levels at R=%g", levels, R)
    decs = refine_to_depth(body, o, R, levels)
    pieces = pieces_from_decompositions(body, o, R, decs)
    diams = [piece_diameter(p, 64) for p in pieces]
    mult = multiplicity_probe(pieces, r, args.trials, args.seed)

    c1, c2 = initial_half_counts(decs[0])
    odd_ok = c1 % 2 == 1 and c2 % 2 == 1 and all(
        c % 2 == 1
        for lo_dec, up_dec in zip(decs, decs[1:])
        for c in refinement_arc_counts(up_dec, lo_dec)
    )
    adm_ok = all(is_admissible_over(up_dec, lo_dec) for lo_dec, up_dec in zip(decs, decs[1:]))
    bound = 10.0 * R + arc_tolerance(R)
    ok = max(diams) <= bound and mult.max_count <= 3 and odd_ok and adm_ok

    audit = {
        "schema": 1,
        "config": _config_header(args, {"R": R, "r": r, "levels": levels,
                                        "trials": int(args.trials),
                                        "center": [float(v) for v in o]}),
        "levels": [
            {
                "index": dec.level.index,
                "radius": dec.level.radius,
                "marker_count": len(dec.markers),
                "angles": [mk.angle for mk in dec.markers],
                "kinds": "".join(mk.kind for mk in dec.markers),
            }
            for dec in decs
        ],
        "odd_counts_ok": odd_ok,
        "admissible_ok": adm_ok,
        "pieces": [
            {
                "level": p.level,
                "ordinal": p.ordinal,
                "theta_start": p.theta_start,
                "width": p.width,
                "r_inner": p.r_inner,
                "r_outer": p.r_outer,
                "diameter": d,
            }
            for p, d in zip(pieces, diams)
        ],
        "max_diameter": max(diams),
        "diameter_bound": bound,
        "multiplicity": mult.to_dict(),
        "pass": ok,
    }
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "cover_audit.json"), audit)
    with open(os.path.join(args.out, "cover.svg"), "w") as fh:
        fh.write(render_cover(body, pieces))
    print(f"pieces={len(pieces)} max_diameter={max(diams):.6f} bound={bound:.6f}")
    print(f"multiplicity max={mult.max_count} odd_counts={odd_ok} admissible={adm_ok}")
    print(os.path.join(args.out, "cover_audit.json"))
    if not ok:
        print("cover audit FAILED", file=sys.stderr)
        return 3
    return 0


def cmd_verify(args) -> int:
    body = load_body(args.body)
    rows = run_suite(body, args.suite, args.seed, args.samples, args.tol)
    report = {
        "schema": 1,
        "config": _config_header(args, {"suite": args.suite}),
        "rows": rows,
    }
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, f"verify_{args.suite}")
    _write_json(base + ".json", report)
    _write_csv(
        base + ".csv",
        ["suite", "invariant", "passed", "defect", "tolerance", "samples", "note"],
        [[r["suite"], r["name"], r["passed"], r["defect"], r["tolerance"],
          r["samples"], r["note"]] for r in rows],
    )
    for r in rows:
        state = "PASS" if r["passed"] else "FAIL"
        print(f"{state} {r['suite']}/{r['name']} defect={r['defect']:.3e} "
              f"tol={r['tolerance']:.3e} samples={r['samples']}")
    if not all(r["passed"] for r in rows):
        return 3
    return 0


def cmd_probe_corona(args) -> int:
    body = load_body(args.body)
    rep = corona_probe(body, body.interior_seed(), args.delta, args.C,
                       args.radii, args.samples, args.seed)
    report = {
        "schema": 1,
        "config": _config_header(args, {"delta": args.delta, "C": args.C,
                                        "radii": list(args.radii)}),
        "probe": rep.to_dict(),
    }
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "corona_probe.json"), report)
    _write_csv(
        os.path.join(args.out, "corona_probe.csv"),
        ["radius", "sup_euclidean_gap", "samples", "C", "seed"],
        [[row["radius"], row["sup_euclidean_gap"], rep.samples, rep.C, rep.seed]
         for row in rep.rows()],
    )
    for row in rep.rows():
        print(f"radius={row['radius']:g} sup_gap={row['sup_euclidean_gap']:.6e}")
    return 0


def cmd_packing(args) -> int:
    body = load_body(args.body)
    o = np.asarray(args.center, dtype=float) if args.center else body.interior_seed()
    rep = greedy_packing(body, o, args.R, args.eps, args.trials, args.seed)
    report = {
        "schema": 1,
        "config": _config_header(args, {"R": args.R, "eps": args.eps,
                                        "trials": int(args.trials)}),
        "packing": rep.to_dict(),
    }
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "packing.json"), report)
    with open(os.path.join(args.out, "packing.svg"), "w") as fh:
        fh.write(render_packing(body, rep.points, o))
    print(f"count={rep.count} bound={rep.bound:.3f}")
    if rep.count > rep.bound:
        print("packing bound VIOLATED", file=sys.stderr)
        return 3
    return 0


# -- entry -------------------------------------------------------------------


def _setup_logging() -> None:
    name = os.environ.get("HILBERT_LOG", "warning").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    # rebind on every entry so repeated in-process calls pick up the
    # current stderr and env var, not the ones from the first call
    root = logging.getLogger("hilbertgeom")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except GeometryError as e:
        print(f"precondition violated: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
