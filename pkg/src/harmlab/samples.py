"""Seeded random harmonic samples (random Dirichlet data, optionally symmetrised)."""

from __future__ import annotations

from fractions import Fraction

from .graph import FiniteGraph
from .harmonic import ScalarField, SolverConfig, solve_dirichlet
from .rng import CounterRNG

SYMMETRIES = ("none", "odd-x", "odd-xy", "odd-diagonal")


def _mirror(sym: str, p):
    if sym == "odd-x":
        return ((-p[0], p[1]), -1)
    if sym == "odd-diagonal":
        return ((p[1], p[0]), -1)
    raise ValueError(sym)


def random_boundary(
    fg: FiniteGraph,
    seed: int,
    *,
    symmetry: str = "none",
    lo: int = -10,
    hi: int = 10,
    den: int = 1,
    stream: int = 0,
) -> dict:
    """Rational boundary values drawn in vertex order from ``CounterRNG(seed, stream)``.

    ``odd-x`` forces ``f(-x, y) = -f(x, y)``, ``odd-xy`` is odd in both
    coordinates and ``odd-diagonal`` forces ``f(y, x) = -f(x, y)``; the region
    must be mapped to itself by the reflections involved.
    """
    if symmetry not in SYMMETRIES:
        raise ValueError(f"unknown symmetry {symmetry!r}")
    rng = CounterRNG(seed, stream)
    by_pos = {fg.positions[v]: v for v in range(fg.n)}
    bnd = sorted(fg.boundary)
    raw = {v: rng.fraction(lo, hi, den) for v in bnd}
    if symmetry == "none":
        return raw
    ops = {"odd-x": ["odd-x"], "odd-diagonal": ["odd-diagonal"], "odd-xy": ["odd-x", "odd-y"]}[symmetry]
    vals = raw
    for op in ops:
        nxt = {}
        for v in bnd:
            p = fg.positions[v]
            if op == "odd-y":
                q, s = (p[0], -p[1]), -1
            else:
                q, s = _mirror(op, p)
            w = by_pos.get(q)
            if w is None or w not in fg.boundary:
                raise ValueError(f"region is not symmetric under {op}")
            nxt[v] = Fraction(vals[v] + s * vals[w], 2)
        vals = nxt
    return vals


def random_harmonic(
    fg: FiniteGraph,
    seed: int,
    *,
    symmetry: str = "none",
    cfg: SolverConfig | None = None,
    **kw,
) -> ScalarField:
    """Harmonic extension of :func:`random_boundary` data (exact when the solver allows)."""
    return solve_dirichlet(fg, random_boundary(fg, seed, symmetry=symmetry, **kw), cfg)


def _recurrence(k, a0, a1, n: int) -> dict:
    seq = {0: Fraction(a0), 1: Fraction(a1)}
    for x in range(1, n):
        seq[x + 1] = k * seq[x] - seq[x - 1]
    for x in range(0, -n, -1):
        seq[x - 1] = k * seq[x] - seq[x + 1]
    return seq


def separable_harmonic(fg: FiniteGraph, mu: int, g01=(0, 1), h01=(0, 1)) -> ScalarField:
    """Exact ``f(x, y) = g(x) h(y)`` on unit ``Z^2`` with

    ``g(x+1) + g(x-1) = (2 + mu) g(x)`` and ``h(y+1) + h(y-1) = (2 - mu) h(y)``,
    seeded by ``g(0), g(1)`` and ``h(0), h(1)``.  Integer ``mu`` and seeds give
    integer values; ``mu >= 1`` makes ``h`` oscillate, so level sets interleave.
    """
    reach = 2 + max(max(abs(int(c)) for c in p) for p in fg.positions)
    g = _recurrence(2 + mu, *g01, reach)
    h = _recurrence(2 - mu, *h01, reach)
    for p in fg.positions:
        if any(Fraction(c).denominator != 1 for c in p) or len(p) != 2:
            raise ValueError("separable fields live on unit Z^2 positions")
    return ScalarField.from_function(fg, lambda p: g[int(p[0])] * h[int(p[1])])


def random_separable(fg: FiniteGraph, seed: int, stream: int = 1) -> ScalarField:
    rng = CounterRNG(seed, stream)
    mu = rng.randint(1, 4)
    g01 = (rng.randint(-3, 3), rng.randint(-3, 3))
    h01 = (rng.randint(-3, 3), rng.randint(-3, 3))
    if g01 == (0, 0):
        g01 = (0, 1)
    if h01 == (0, 0):
        h01 = (1, 0)
    return separable_harmonic(fg, mu, g01, h01)
