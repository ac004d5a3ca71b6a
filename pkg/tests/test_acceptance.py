"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""

import io
import math
import os
import sys
import tempfile
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from harmlab.cli import run as cli_run
from harmlab.gallery import (
    EXP_BASE,
    GALLERY,
    a3_threshold,
    build_crossing_lattice,
    harmonic_gallery,
    solve_a4,
    z3_box_example,
)
from harmlab.graph import dump_graph_spec, instantiate_region, load_graph_spec
from harmlab.harmonic import ScalarField, SolverConfig, is_harmonic, solve_dirichlet
from harmlab.lattices import BUILTIN, honeycomb_lattice, square_lattice, triangular_lattice
from harmlab.levelset import extract_lemma_instance, pinwheel_instance, run_counting, verify_hypotheses
from harmlab.rng import CounterRNG
from harmlab.samples import SYMMETRIES, random_boundary, random_separable
from harmlab.theorems import (
    LatticePolynomial,
    caccioppoli_ratio,
    discrete_taylor,
    forward_difference,
    growth_exponent,
    taylor_error,
    zero_density_certificate,
)
from harmlab.topology import enumerate_faces

RESULTS: dict = {}
PLANAR = {"square": square_lattice, "triangular": triangular_lattice, "honeycomb": honeycomb_lattice}


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    print(f"acceptance {key}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


# ---------------------------------------------------------------------------
# 1


def check_counterexample():
    ce = build_crossing_lattice(1, 2, 3)
    fg, h = ce.box(41)
    rep = is_harmonic(h)
    ok = ce.params.A4 == F(1, 6) and rep.certified and rep.max_residual == 0 and rep.checked == len(fg.interior)
    rng = CounterRNG(2024, 7)
    agree = 0
    exact = 0
    positive = 0
    for _ in range(25):
        a1 = rng.fraction(1, 4, 6)
        a2 = rng.fraction(1, 4, 6)
        while a2 == a1:
            a2 = rng.fraction(1, 4, 6)
        a3 = a3_threshold(a1, a2) * rng.fraction(1, 3, 8) / 2  # straddles the threshold
        a4 = solve_a4(a1, a2, a3)
        agree += (a4 > 0) == (a3 > a3_threshold(a1, a2))
        if a4 > 0:
            positive += 1
            fgx, hx = build_crossing_lattice(a1, a2, a3).box(15)
            exact += is_harmonic(hx).certified
    ok = ok and agree == 25 and exact == positive
    return ok, (
        f"A4={ce.params.A4}, max residual {rep.max_residual} on {rep.checked} interior vertices of 41x41; "
        f"threshold agreement {agree}/25, exact harmonicity {exact}/{positive} admissible"
    )


# ---------------------------------------------------------------------------
# 2


def _lemma(fg, f, m, threshold=0):
    inst = extract_lemma_instance(fg, f, m, threshold=threshold)
    hyp = verify_hypotheses(inst)
    rep = run_counting(inst)
    good = hyp.ok and rep.bound_satisfied and rep.alpha == F(16, 17) and not rep.disjointness_violations
    return good, inst, rep


def check_counting():
    z2 = square_lattice()
    n_inst = bad = zeros = 0
    for name in GALLERY:
        for n in range(6, 15):
            fg = instantiate_region(z2, n)
            good, inst, _ = _lemma(fg, harmonic_gallery(name, n, fg), n - 3)
            n_inst += 1
            bad += not good
            zeros += len(inst.Z)
    maxp = 0
    for s in range(200):
        r = 6 + s % 5
        fg = instantiate_region(z2, r)
        b = random_boundary(fg, s, symmetry=SYMMETRIES[s % 4])
        f = solve_dirichlet(fg, b, SolverConfig(mode="exact-elimination"))
        lo, hi = min(b.values()), max(b.values())
        maxp += all(lo <= f[v] <= hi for v in fg.interior)
        good, inst, _ = _lemma(fg, f, r - 3)
        n_inst += 1
        bad += not good
        zeros += len(inst.Z)
    # instances with zeros: thresholded separable fields and the pinwheel
    fg = instantiate_region(z2, 11)
    nv = nv_zeros = 0
    for s in range(20):
        f = random_separable(fg, s)
        mags = sorted(abs(f[v]) for v in fg.ball(8) if f[v] != 0)
        for q in (0.3, 0.5):
            good, inst, _ = _lemma(fg, f, 8, mags[int(q * len(mags))])
            bad += not good
            nv += bool(inst.Z)
            nv_zeros += len(inst.Z)
    pw = pinwheel_instance()
    pw_rep = run_counting(pw)
    pw_ok = verify_hypotheses(pw).ok and pw_rep.bound_satisfied and not pw_rep.disjointness_violations
    ok = bad == 0 and pw_ok and maxp == 200
    return ok, (
        f"{n_inst} threshold-0 instances (gallery n=6..14 + 200 exact random solves), {zeros} zeros, "
        f"{bad} failures; thresholded separable: {nv} instances with zeros, {nv_zeros} zeros total; "
        f"pinwheel |Z|={len(pw.Z)} |gamma|={len(pw.gamma)} trace={list(pw_rep.trace)}"
    )


# ---------------------------------------------------------------------------
# 3


def check_certificate():
    verdicts = {"PASS": 0, "FAIL": 0, "hypothesis unmet": 0}
    samples = 0
    for name, make in PLANAR.items():
        g = make()
        fg = instantiate_region(g, 61)
        fields = [
            ScalarField.zeros(fg),
            ScalarField.from_function(fg, lambda p: p[0]),
            ScalarField.from_function(fg, lambda p: 2 * p[0] - 3 * p[1] + 1),
        ]
        if name == "square":
            fields.append(ScalarField.from_function(fg, lambda p: p[0] * p[1]))
            fields.append(ScalarField.from_function(fg, lambda p: p[0] ** 3 - 3 * p[0] * p[1] ** 2))
        for n in range(10, 31):
            for f in fields:
                cert = zero_density_certificate(fg, f, n=n)
                verdicts[cert.verdict] += 1
                samples += 1
        small = instantiate_region(g, 21)
        for s, sym in enumerate(("none", "odd-x", "odd-xy") if name == "square" else ("none", "odd-x")):
            f = solve_dirichlet(small, random_boundary(small, s, symmetry=sym), SolverConfig(mode="exact-elimination"))
            cert = zero_density_certificate(small, f, n=10)
            verdicts[cert.verdict] += 1
            samples += 1
    ce = build_crossing_lattice(1, 2, 3)
    fg = instantiate_region(ce.graph, 161)
    cert = zero_density_certificate(fg, ce.field_on(fg), epsilon=F(1, 20), n=80)
    cross_ok = cert.verdict == "FAIL" and cert.label == "non-planar counterexample" and cert.density < F(1, 20)
    ok = verdicts["FAIL"] == 0 and cross_ok
    return ok, (
        f"planar samples {samples}: {verdicts}; crossing n=80: {cert.verdict} ({cert.label}), "
        f"density {float(cert.density):.5f} = {cert.nonzero}/{cert.size}, nonzero on B_80: {cert.nonzero_on_Bn}"
    )


# ---------------------------------------------------------------------------
# 4


def check_z3():
    good = z3_box_example(11)
    flat = z3_box_example(11, c=1.0)
    ok = good.report.certified and good.report.max_residual <= 1e-9 and flat.report.max_residual > 1e-3
    return ok, f"c=3+2sqrt2 max residual {good.report.max_residual:.3e}; c=1 max residual {flat.report.max_residual:.3e}"


# ---------------------------------------------------------------------------
# 5


def check_taylor_exact():
    rng = CounterRNG(11, 5)
    trials = 0
    for g in (square_lattice(), honeycomb_lattice()):
        fg = instantiate_region(g, 9, "lattice-box")
        for _ in range(6):
            deg = rng.randint(0, 6)
            coeffs = {(i, j): rng.fraction(-5, 5, 3) for i in range(deg + 1) for j in range(deg + 1 - i)}
            lid = rng.randint(0, len(g.sites) - 1)
            base = ((rng.randint(-2, 1), rng.randint(-2, 1)), lid)
            p = LatticePolynomial(coeffs, base, deg)
            f = p.to_field(fg)
            q = discrete_taylor(f, fg.index[base], 6)
            if q.nonzero_coeffs() != p.nonzero_coeffs() or taylor_error(f, q, 2) != 0:
                return False, f"mismatch for degree {deg}"
            trials += 1
    return True, f"{trials} random polynomials of degree <= 6 reproduced exactly"


def check_difference_harmonic():
    worst = 0.0
    for name, make in PLANAR.items():
        fg = instantiate_region(make(), 12, "lattice-box")
        f = solve_dirichlet(fg, random_boundary(fg, 3, symmetry="none"), SolverConfig(mode="direct"))
        for d in (1, 2):
            df = forward_difference(f, d)
            step = (1, 0) if d == 1 else (0, 1)
            keep = [
                v for v in df.domain
                if v in fg.interior
                and fg.index.get(((fg.cells[v][0] + step[0], fg.cells[v][1] + step[1]), fg.lids[v])) in fg.interior
            ]
            rep = is_harmonic(df.restrict(keep))
            worst = max(worst, float(rep.max_residual))
    return worst <= 1e-10, f"max |L Df| = {worst:.2e} over three lattices, both directions"


def check_caccioppoli(samples=50):
    z2 = square_lattice()
    fg = instantiate_region(z2, 91, "lattice-box")
    cfg = SolverConfig(mode="direct")
    table = np.zeros((samples, 6))
    for s in range(samples):
        f = solve_dirichlet(fg, random_boundary(fg, s, symmetry="none"), cfg)
        for m in range(1, 7):
            table[s, m - 1] = caccioppoli_ratio(f, 30, m).ratio
    per_m = table.max(axis=0)
    C = float(per_m.max())
    ok = np.all(np.isfinite(table)) and C <= 1.0 and per_m[5] <= 1.5 * per_m[2]
    return ok, f"{samples} samples on Q_90, R=30: per-m max C = {np.round(per_m, 3).tolist()}, single C = {C:.3f}"


def check_taylor_decay(samples=5):
    z2 = square_lattice()
    fg = instantiate_region(z2, 73, "lattice-box")
    cfg = SolverConfig(mode="direct")
    ms = list(range(1, 9))
    ratios = []
    for s in range(samples):
        f = solve_dirichlet(fg, random_boundary(fg, 100 + s, symmetry="none"), cfg)
        scale = f.max_abs()
        errs = [taylor_error(f, discrete_taylor(f, fg.origin, m), 6) / scale for m in ms]
        slope = np.polyfit(ms, np.log(errs), 1)[0]
        ratios.append(math.exp(slope))
    ok = max(ratios) <= 0.9
    return ok, f"fitted error ratio per order m=1..8, window Q_6, R=24: {[round(r, 3) for r in ratios]}"


# ---------------------------------------------------------------------------
# 6


def check_growth():
    radii = range(8, 41)
    exp_fit = growth_exponent(harmonic_gallery("exp-alternating", 40), radii)
    target = math.log(EXP_BASE)
    polys = {name: growth_exponent(harmonic_gallery(name, 40), radii).exponent for name in ("coordinate", "xy", "x2-minus-y2")}
    ce = build_crossing_lattice(1, 2, 3)
    fg = instantiate_region(ce.graph, 40, "sup-norm-box")
    cross = growth_exponent(ce.field_on(fg), radii, "sup-norm").exponent
    ok = (
        abs(exp_fit.exponent - target) <= 0.01 * target
        and all(e <= 0.01 for e in polys.values())
        and abs(cross - math.log(2)) <= 0.01 * math.log(2)
    )
    return ok, (
        f"exp-alternating {exp_fit.exponent:.6f} (target {target:.6f}); polynomials "
        f"{ {k: round(v, 5) for k, v in polys.items()} }; crossing diagonal {cross:.6f} (target {math.log(2):.6f})"
    )


# ---------------------------------------------------------------------------
# 7


def check_invariants():
    notes = []
    regions = 0
    for name, make in PLANAR.items():
        g = make()
        for metric in ("graph-hop", "sup-norm-box", "lattice-box"):
            for r in range(0, 9):
                fg = instantiate_region(g, r, metric)
                if fg.n - len(fg.edges) + len(enumerate_faces(fg)) != 2:
                    notes.append(f"Euler fails on {name} {metric} r={r}")
                regions += 1
    solves = 0
    for name, make in PLANAR.items():
        fg = instantiate_region(make(), 7)
        for s in range(10):
            b = random_boundary(fg, s, symmetry="none", den=5)
            f = solve_dirichlet(fg, b)
            lo, hi = min(b.values()), max(b.values())
            if not all(lo <= f[v] <= hi for v in range(fg.n)):
                notes.append(f"maximum principle fails on {name} seed {s}")
            b2 = random_boundary(fg, s + 1000, symmetry="none", den=3)
            c = F(s - 4, 7)
            combo = solve_dirichlet(fg, {v: b[v] + c * b2[v] for v in b})
            f2 = solve_dirichlet(fg, b2)
            if any(combo[v] != f[v] + c * f2[v] for v in range(fg.n)):
                notes.append(f"linearity fails on {name} seed {s}")
            solves += 3
    specs = dict(BUILTIN)
    specs["crossing"] = lambda: build_crossing_lattice(1, 2, 3).graph
    for name, make in specs.items():
        text = dump_graph_spec(make())
        if dump_graph_spec(load_graph_spec(text)) != text or load_graph_spec(text) != make():
            notes.append(f"round trip fails for {name}")
    det = _cli_determinism()
    if not det:
        notes.append("CLI output differs between identical runs")
    ok = not notes
    return ok, f"{regions} regions Euler-checked, {solves} solves (max principle, exact linearity), {len(specs)} spec round trips, CLI byte-determinism {det}" + (f"; {notes}" if notes else "")


def _cli_determinism() -> bool:
    old = os.getcwd()
    env = os.environ.pop("HARMLAB_OUT", None)
    try:
        with tempfile.TemporaryDirectory() as tmp:
            os.chdir(tmp)
            runs = [
                ["lemma", "--field", "random", "--n", "6", "--trials", "4", "--seed", "9"],
                ["solve", "--graph", "honeycomb", "--radius", "6", "--seed", "9"],
                ["density", "--field", "separable", "--n", "8", "--seed", "9"],
            ]
            for argv in runs:
                argv = argv + ["--out", "o", "--formats", "json,csv"]
                snaps = []
                for _ in range(2):
                    for p in Path("o").glob("*"):
                        p.unlink()
                    out = io.StringIO()
                    if cli_run(argv, out, io.StringIO()) != 0:
                        return False
                    snaps.append((out.getvalue(), {p.name: p.read_bytes() for p in Path("o").iterdir()}))
                if snaps[0] != snaps[1]:
                    return False
        return True
    finally:
        os.chdir(old)
        if env is not None:
            os.environ["HARMLAB_OUT"] = env


# ---------------------------------------------------------------------------

CHECKS = {
    "1 counterexample exactness": check_counterexample,
    "2 counting bound": check_counting,
    "3 zero-density certificate": check_certificate,
    "4 Z^3 example": check_z3,
    "5a Taylor exactness": check_taylor_exact,
    "5b differences stay harmonic": check_difference_harmonic,
    "5c Caccioppoli constant": check_caccioppoli,
    "5d Taylor error decay": check_taylor_decay,
    "6 growth exponents": check_growth,
    "7 structural invariants": check_invariants,
}


@pytest.mark.parametrize("key", list(CHECKS))
def test_criterion(key):
    ok, detail = CHECKS[key]()
    record(key, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for key, fn in CHECKS.items():
        ok, detail = fn()
        record(key, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
