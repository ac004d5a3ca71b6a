"""``harmlab`` command line.

Exit codes: 0 success, 1 internal defect, 2 precondition or validation
failure (an error record is written), 64 unknown subcommand, 66 unreadable
graph spec.  ``HARMLAB_OUT`` overrides ``--out``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .gallery import (
    GALLERY,
    CounterexampleError,
    build_crossing_lattice,
    diagonal_field,
    harmonic_gallery,
)
from .graph import (
    GraphSpecError,
    PeriodicGraph,
    dump_graph_spec,
    instantiate_region,
    load_graph_spec,
    validate_embedding,
)
from .harmonic import ScalarField, SolverConfig, is_harmonic, solve_dirichlet
from .io import (
    FIELD_COLUMNS,
    contour_svg,
    csv_text,
    dumps,
    field_from_dict,
    field_rows,
    field_svg,
    lemma_svg,
    atomic_write,
)
from .lattices import BUILTIN
from .levelset import LevelSetError, extract_lemma_instance, run_counting, verify_hypotheses
from .rational import format_rational, parse_rational
from .samples import SYMMETRIES, random_harmonic, random_separable
from .theorems import (
    EPSILON0,
    ThreeBallParams,
    density_profile,
    discrete_taylor,
    find_sparse_level,
    find_sparse_shell,
    fit_three_ball_rate,
    growth_exponent,
    taylor_error,
    three_ball_check,
    zero_density_certificate,
)
from .topology import TopologyError, dual_graph, outer_contour, planar_map, reduce_to_simple_dual

EXIT_OK, EXIT_DEFECT, EXIT_PRECONDITION, EXIT_USAGE, EXIT_NOINPUT = 0, 1, 2, 64, 66

SUBCOMMANDS = (
    "validate", "solve", "faces", "contour", "lemma", "certify-zero", "density",
    "shell", "level", "taylor", "three-ball", "growth", "counterexample", "gallery",
)
FIELDS = ("zero", "random", "separable", "diagonal", *GALLERY)


class Precondition(Exception):
    pass


class Unreadable(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


def builtin_graph(name: str) -> PeriodicGraph | None:
    key = name[:-5] if name.endswith(".spec") else name
    if key in BUILTIN:
        return BUILTIN[key]()
    if key == "crossing":
        return build_crossing_lattice(1, 2, 3).graph
    return None


def load_graph(arg: str, reduce: bool = False) -> PeriodicGraph:
    p = Path(arg)
    if p.exists():
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise Unreadable(f"cannot read {arg}: {exc}") from exc
        try:
            json.loads(text)
        except ValueError as exc:
            raise Unreadable(f"{arg} is not a JSON graph spec: {exc}") from exc
        g = load_graph_spec(text)
    else:
        g = builtin_graph(arg)
        if g is None:
            raise Unreadable(f"no such graph spec or builtin: {arg}")
    return reduce_to_simple_dual(g) if reduce else g


def solver_config(args) -> SolverConfig:
    return SolverConfig(mode=args.solver, tolerance=args.tolerance)


def make_field(name: str, fg, args) -> ScalarField:
    if getattr(args, "field_file", None):
        try:
            doc = json.loads(Path(args.field_file).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise Precondition(f"cannot read field table {args.field_file}: {exc}") from exc
        return field_from_dict(fg, doc.get("field", doc))
    if name == "zero":
        return ScalarField.zeros(fg)
    if name == "random":
        return random_harmonic(fg, args.seed, symmetry=args.symmetry, cfg=solver_config(args))
    if name == "separable":
        return random_separable(fg, args.seed)
    if name == "diagonal":
        return diagonal_field(fg, parse_rational(args.A1), parse_rational(args.A2))
    if name in GALLERY:
        return harmonic_gallery(name, max(1, fg.radius or 1), fg)
    raise Precondition(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, graph: bool = True, field: bool = False) -> None:
    if graph:
        p.add_argument("--graph", default="square", help="graph-spec path or builtin (square, z2, triangular, honeycomb, crossing)")
        p.add_argument("--reduce", action="store_true", help="replace pendant components by effective-conductance edges first")
    if field:
        p.add_argument("--field", default="random", choices=FIELDS)
        p.add_argument("--field-file", help="field table JSON (as written by solve/gallery)")
        p.add_argument("--symmetry", default="none", choices=SYMMETRIES)
        p.add_argument("--A1", default="1")
        p.add_argument("--A2", default="2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="harmlab-out")
    p.add_argument("--formats", default="json,csv,svg", help="comma list from json,csv,svg")
    p.add_argument("--solver", default="auto", choices=("auto", "exact-elimination", "iterative", "direct"))
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--jobs", type=int, default=1)


def _radii(text: str) -> list[int]:
    if ":" in text:
        a, b = text.split(":")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="harmlab", description="Discrete harmonic functions on periodic planar graphs.")
    ap.add_argument("--version", action="version", version=f"harmlab {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("validate", help="check the declared planarity of a graph spec")
    _common(p)

    p = sub.add_parser("solve", help="Dirichlet problem with random or gallery boundary data")
    _common(p, field=True)
    p.add_argument("--radius", type=int, default=10)
    p.add_argument("--metric", default="graph-hop", choices=("graph-hop", "sup-norm-box", "lattice-box"))

    p = sub.add_parser("faces", help="faces of an instantiated region")
    _common(p)
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--metric", default="graph-hop", choices=("graph-hop", "sup-norm-box", "lattice-box"))

    p = sub.add_parser("contour", help="outer contour of the faces meeting B_m")
    _common(p)
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--faces", help="comma list of face indices (default: all bounded faces meeting B_m)")

    p = sub.add_parser("lemma", help="extract, verify and count a level-set instance")
    _common(p, field=True)
    p.add_argument("--n", type=int, default=10, help="ball radius m of the instance")
    p.add_argument("--threshold", default="0")
    p.add_argument("--x0", type=int)
    p.add_argument("--trials", type=int, default=1, help="random fields: seeds seed..seed+trials-1")

    p = sub.add_parser("certify-zero", help="zero-density certificate on B_n")
    _common(p, field=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--epsilon", default=format_rational(EPSILON0))

    p = sub.add_parser("density", help="per-shell counts of small, zero and large values")
    _common(p, field=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--threshold", default="1")

    p = sub.add_parser("shell", help="sparsest shell in [1.5n, 2n]")
    _common(p, field=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--threshold", default="0")

    p = sub.add_parser("level", help="first sparse geometric level band")
    _common(p, field=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--max-levels", type=int, default=64)

    p = sub.add_parser("taylor", help="discrete Taylor polynomial at the origin")
    _common(p, field=True)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--radius", type=int, default=12)

    p = sub.add_parser("three-ball", help="three-ball inequality slack on lattice boxes")
    _common(p, field=True)
    p.add_argument("--N", default="4,5,6")

    p = sub.add_parser("growth", help="fit the exponential growth rate of max |f|")
    _common(p, field=True)
    p.add_argument("--radii", default="8:24")
    p.add_argument("--distance", default="hop", choices=("hop", "sup-norm"))

    p = sub.add_parser("counterexample", help="solve A4 and verify the crossing-lattice function")
    _common(p, graph=False)
    p.add_argument("--A1", default="1")
    p.add_argument("--A2", default="2")
    p.add_argument("--A3", default="3")
    p.add_argument("--box", type=int, default=41)

    p = sub.add_parser("gallery", help="tabulate a gallery field and certify it")
    _common(p)
    p.add_argument("--name", default="xy", choices=GALLERY)
    p.add_argument("--n", type=int, default=10)
    return ap


# ---------------------------------------------------------------------------
# artifacts


class Run:
    def __init__(self, args):
        self.args = args
        cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
        env_out = os.environ.get("HARMLAB_OUT")
        if env_out:
            cfg["out"] = env_out
        cfg["version"] = __version__
        self.config = cfg
        self.out = Path(cfg["out"])
        self.formats = {x.strip() for x in args.formats.split(",") if x.strip()}
        self.written: list[str] = []

    def json(self, name: str, doc: dict) -> None:
        if "json" in self.formats:
            d = dict(doc)
            d["config"] = self.config
            atomic_write(self.out / f"{name}.json", dumps(d))
            self.written.append(f"{name}.json")

    def csv(self, name: str, rows, columns) -> None:
        if "csv" in self.formats:
            atomic_write(self.out / f"{name}.csv", csv_text(rows, columns, self.config))
            self.written.append(f"{name}.csv")

    def svg(self, name: str, text: str) -> None:
        if "svg" in self.formats:
            atomic_write(self.out / f"{name}.svg", text)
            self.written.append(f"{name}.svg")


def _region(g, radius: int, metric: str = "graph-hop"):
    return instantiate_region(g, radius, metric)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(run: Run) -> dict:
    g = load_graph(run.args.graph, run.args.reduce)
    rep = validate_embedding(g)
    doc = rep.as_dict()
    run.json("validate", doc)
    if not rep.consistent:
        raise Precondition(f"declared planar but {len(rep.crossings)} crossing edge pairs found")
    return doc


def cmd_solve(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, a.radius, a.metric)
    if a.field in ("random",) and not a.field_file:
        f = make_field("random", fg, a)
    else:
        src = make_field(a.field, fg, a)
        f = solve_dirichlet(fg, src.restrict(fg.boundary), solver_config(a))
    bvals = [f[v] for v in fg.boundary]
    lo, hi = min(bvals), max(bvals)
    inside = [f[v] for v in fg.interior]
    maxprin = all(lo <= x <= hi for x in inside) if f.exact else all(lo - 1e-9 <= x <= hi + 1e-9 for x in inside)
    rep = is_harmonic(f, 0 if f.exact else 1e-8 * max(1.0, float(max(abs(lo), abs(hi)))))
    doc = {
        "vertices": fg.n,
        "interior": len(fg.interior),
        "exact": f.exact,
        "harmonicity": rep.as_dict(),
        "maximum_principle": maxprin,
        "boundary_min": lo,
        "boundary_max": hi,
    }
    run.json("solve", doc)
    run.csv("solve", field_rows(f), FIELD_COLUMNS)
    run.svg("solve", field_svg(f, run.config))
    if "json" in run.formats:
        from .io import field_to_dict

        atomic_write(run.out / "field.json", dumps({"field": field_to_dict(f), "config": run.config}))
        run.written.append("field.json")
    return doc


def cmd_faces(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, a.radius, a.metric)
    pm = planar_map(fg)
    dg = dual_graph(fg)
    rows = [
        {
            "face": fc.index,
            "length": len(fc),
            "outer": fc.is_outer,
            "area2": fc.area2,
            "walk": " ".join(str(v) for v in fc.walk),
        }
        for fc in pm.faces
    ]
    V, E, F = fg.n, len(fg.edges), len(pm.faces)
    doc = {"V": V, "E": E, "F": F, "euler": V - E + F, "dual_multigraph": dg.multigraph, "dual_edges": len(dg.edges)}
    run.json("faces", doc)
    run.csv("faces", rows, ("face", "length", "outer", "area2", "walk"))
    return doc


def cmd_contour(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, a.radius)
    pm = planar_map(fg)
    if a.faces:
        K = {int(x) for x in a.faces.split(",")}
    else:
        ball = fg.ball(a.m)
        K = {fc.index for fc in pm.faces if not fc.is_outer and fc.vertices & ball}
    c = outer_contour(fg, K)
    doc = {
        "length": c.length,
        "walk": list(c.walk),
        "enclosed": sorted(c.enclosed),
        "filled_faces": len(c.faces),
    }
    run.json("contour", doc)
    run.csv("contour", [{"step": i, **fg.vertex_label(v)} for i, v in enumerate(c.walk)], ("step", "index", "cell", "site"))
    run.svg("contour", contour_svg(fg, c, run.config))
    return doc


def _lemma_region(g, m: int):
    """Smallest hop region in which every face meeting ``B_m`` (and the filled contour) is interior."""
    radius = m + 2
    while True:
        fg = instantiate_region(g, radius)
        pm = planar_map(fg)
        ball = fg.ball(m)
        if all(fc.vertices <= fg.interior for fc in pm.faces if not fc.is_outer and fc.vertices & ball):
            return fg
        radius += 1
        if radius > 4 * m + 16:  # pragma: no cover - faces are bounded for periodic graphs
            raise Precondition("could not find a region containing the faces of B_m")


def _lemma_trial(payload):
    graph_arg, reduce, field, seed, symmetry, solver, tol, m, thr, x0, field_file, A1, A2 = payload
    ns = argparse.Namespace(
        seed=seed, symmetry=symmetry, solver=solver, tolerance=tol, field_file=field_file, A1=A1, A2=A2
    )
    g = load_graph(graph_arg, reduce)
    if not g.planar:
        raise LevelSetError("planarity required")
    fg = _lemma_region(g, m)
    f = make_field(field, fg, ns)
    inst = extract_lemma_instance(fg, f, m, x0, parse_rational(thr))
    hyp = verify_hypotheses(inst)
    rep = run_counting(inst)
    return seed, fg, inst, hyp, rep


def _instance_dict(inst) -> dict:
    return {
        "gamma": list(inst.gamma),
        "enclosed": sorted(inst.contour.enclosed),
        "Z": sorted(inst.Z),
        "P": sorted(inst.P),
        "M": sorted(inst.M),
        "discarded": sorted(inst.discarded),
        "witnesses": {
            str(z): {"beta": list(w.beta), "face": w.face, "p": w.p, "m": w.m} for z, w in sorted(inst.witnesses.items())
        },
        "meta": {k: (format_rational(v) if isinstance(v, Fraction) else v) for k, v in inst.meta.items()},
    }


def cmd_lemma(run: Run) -> dict:
    a = run.args
    if a.trials < 1:
        raise Precondition("trials must be positive")
    payloads = [
        (a.graph, a.reduce, a.field, a.seed + t, a.symmetry, a.solver, a.tolerance, a.n, a.threshold, a.x0, a.field_file, a.A1, a.A2)
        for t in range(a.trials)
    ]
    if a.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=a.jobs) as ex:
            results = list(ex.map(_lemma_trial, payloads))
    else:
        results = [_lemma_trial(p) for p in payloads]
    results.sort(key=lambda r: r[0])
    rows = []
    for seed, _fg, inst, hyp, rep in results:
        rows.append(
            {
                "seed": seed,
                "gamma": rep.size_gamma,
                "Z": rep.size_Z,
                "Z_prime": len(rep.Z_prime),
                "S_final": len(rep.S_final),
                "discarded": len(inst.discarded),
                "alpha": rep.alpha,
                "bound_satisfied": rep.bound_satisfied,
                "hypotheses_ok": hyp.ok,
                "disjointness_violations": len(rep.disjointness_violations),
            }
        )
    seed, fg, inst, hyp, rep = results[0]
    doc = {
        "report": rep.as_dict(),
        "hypotheses": hyp.as_dict(),
        "instance": _instance_dict(inst),
        "region_radius": fg.radius,
        "trials": rows,
        "bound_satisfied": all(r["bound_satisfied"] for r in rows),
    }
    run.json("lemma", doc)
    run.csv("lemma", rows, tuple(rows[0]))
    run.svg("lemma", lemma_svg(inst, run.config))
    return {"bound_satisfied": doc["bound_satisfied"], "report": doc["report"]}


def cmd_certify_zero(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, 2 * a.n + 1)
    f = make_field(a.field, fg, a)
    if not f.exact:
        raise Precondition("zero-density certificates need an exact-mode field")
    cert = zero_density_certificate(fg, f, parse_rational(a.epsilon), a.n)
    doc = cert.as_dict()
    run.json("certify-zero", doc)
    if cert.verdict == "FAIL" and cert.planar:
        raise RuntimeError(f"internal defect: {cert.label}")
    return doc


def cmd_density(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, a.n)
    f = make_field(a.field, fg, a)
    prof = density_profile(fg, f, parse_rational(a.threshold))
    rows = prof.rows()
    doc = {
        "n": a.n,
        "threshold": prof.threshold,
        "small_density": prof.density("small", a.n),
        "zero_density": prof.density("zero", a.n),
        "big_density": prof.density("big", a.n),
        "nonzero_density": prof.density("nonzero", a.n),
    }
    run.json("density", doc)
    run.csv("density", rows, tuple(rows[0]))
    run.svg("density", field_svg(f, run.config, "sign classes", prof.threshold))
    return doc


def cmd_shell(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, 2 * a.n + 1)
    f = make_field(a.field, fg, a)
    res = find_sparse_shell(fg, f, a.n, parse_rational(a.threshold))
    doc = res.as_dict()
    run.json("shell", doc)
    run.csv("shell", [{"m": m, "count": c} for m, c in sorted(res.counts.items())], ("m", "count"))
    return doc


def cmd_level(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, 2 * a.n)
    f = make_field(a.field, fg, a)
    res = find_sparse_level(fg, f, a.n, a.delta, max_levels=a.max_levels)
    doc = res.as_dict()
    run.json("level", doc)
    run.csv("level", [{"j": j, "A": A, "band": c} for j, A, c in res.levels], ("j", "A", "band"))
    return doc


def cmd_taylor(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, a.radius, "lattice-box")
    f = make_field(a.field, fg, a)
    p = discrete_taylor(f, fg.origin, a.m)
    err = taylor_error(f, p, a.window)
    coeffs = sorted(p.nonzero_coeffs().items())
    doc = {
        "m": a.m,
        "base": {"cell": list(p.base[0]), "site": p.base[1]},
        "coefficients": [{"i": i, "j": j, "c": c} for (i, j), c in coeffs],
        "window": a.window,
        "sup_error": err,
    }
    run.json("taylor", doc)
    run.csv("taylor", [{"i": i, "j": j, "c": c} for (i, j), c in coeffs], ("i", "j", "c"))
    return doc


def cmd_three_ball(run: Run) -> dict:
    a = run.args
    Ns = _radii(a.N)
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, 4 * max(Ns) + 1, "lattice-box")
    f = make_field(a.field, fg, a)
    params = ThreeBallParams()
    reps = [three_ball_check(f, N, params) for N in Ns]
    doc: dict = {"reports": [r.as_dict() for r in reps], "beta": params.beta, "alpha": params.alpha}
    if len(Ns) >= 2 and all(r.lhs > 0 for r in reps):
        c, b, _ = fit_three_ball_rate(f, Ns, params)
        doc["fitted_c"] = c
        doc["fitted_intercept"] = b
    run.json("three-ball", doc)
    cols = ("N", "lhs", "M", "small_density", "hypothesis_met", "C_implied", "case", "case1_bound", "case2_bound")
    run.csv("three-ball", [r.as_dict() for r in reps], cols)
    return doc


def cmd_growth(run: Run) -> dict:
    a = run.args
    radii = _radii(a.radii)
    g = load_graph(a.graph, a.reduce)
    if a.distance == "hop":
        fg = _region(g, max(radii))
    else:
        fg = _region(g, max(radii), "sup-norm-box")
    f = make_field(a.field, fg, a)
    fit = growth_exponent(f, radii, a.distance)
    doc = fit.as_dict()
    run.json("growth", doc)
    run.csv(
        "growth",
        [{"radius": r, "max_abs": m, "log_max": math.log(float(m)) if float(m) < math.inf else None} for r, m in fit.maxima.items()],
        ("radius", "max_abs", "log_max"),
    )
    return doc


def cmd_counterexample(run: Run) -> dict:
    a = run.args
    ce = build_crossing_lattice(parse_rational(a.A1), parse_rational(a.A2), parse_rational(a.A3))
    fg, h = ce.box(a.box)
    rep = is_harmonic(h, 0)
    pr = ce.params
    doc = {
        "A1": pr.A1,
        "A2": pr.A2,
        "A3": pr.A3,
        "A4": pr.A4,
        "box": a.box,
        "vertices": fg.n,
        "interior": len(fg.interior),
        "residual": rep.max_residual,
        "harmonic": rep.certified,
        "planar": ce.graph.planar,
    }
    run.json("counterexample", doc)
    run.csv("counterexample", field_rows(h), FIELD_COLUMNS)
    if "json" in run.formats:
        atomic_write(run.out / "crossing.spec", dump_graph_spec(ce.graph))
        run.written.append("crossing.spec")
    return doc


def cmd_gallery(run: Run) -> dict:
    a = run.args
    g = load_graph(a.graph, a.reduce)
    fg = _region(g, a.n)
    f = harmonic_gallery(a.name, a.n, fg)
    tol = 0 if f.exact else 1e-9 * max(1.0, float(f.max_abs()))
    rep = is_harmonic(f, tol)
    doc = {"name": a.name, "n": a.n, "exact": f.exact, "harmonicity": rep.as_dict()}
    run.json("gallery", doc)
    run.csv("gallery", field_rows(f), FIELD_COLUMNS)
    run.svg("gallery", field_svg(f, run.config, a.name))
    return doc


HANDLERS = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "faces": cmd_faces,
    "contour": cmd_contour,
    "lemma": cmd_lemma,
    "certify-zero": cmd_certify_zero,
    "density": cmd_density,
    "shell": cmd_shell,
    "level": cmd_level,
    "taylor": cmd_taylor,
    "three-ball": cmd_three_ball,
    "growth": cmd_growth,
    "counterexample": cmd_counterexample,
    "gallery": cmd_gallery,
}


def _error(run: Run | None, sub: str, kind: str, msg: str, stream) -> None:
    rec = {"error": msg, "kind": kind, "subcommand": sub}
    if run is not None:
        rec["config"] = run.config
        try:
            atomic_write(run.out / "error.json", dumps(rec))
        except OSError:
            pass
    stream.write(json.dumps(rec, sort_keys=True, default=str) + "\n")


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    first = next((x for x in argv if not x.startswith("-")), None)
    if first is not None and first not in SUBCOMMANDS:
        _error(None, first, "usage", f"unknown subcommand {first!r}", stderr)
        return EXIT_USAGE
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PRECONDITION
    r = Run(args)
    sub = args.subcommand
    try:
        doc = HANDLERS[sub](r)
    except Unreadable as exc:
        _error(r, sub, "unreadable", str(exc), stderr)
        return EXIT_NOINPUT
    except (Precondition, LevelSetError, TopologyError, CounterexampleError, GraphSpecError, ValueError) as exc:
        _error(r, sub, "precondition", str(exc), stderr)
        return EXIT_PRECONDITION
    except RuntimeError as exc:
        _error(r, sub, "defect", str(exc), stderr)
        return EXIT_DEFECT
    stdout.write(dumps({"subcommand": sub, "result": doc, "artifacts": r.written}))
    return EXIT_OK


def main() -> None:  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
