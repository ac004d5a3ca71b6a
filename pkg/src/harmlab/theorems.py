"""Finite-size experiments: zero densities, sparse shells and levels, discrete
Taylor polynomials, derivative ratios, the three-ball inequality and growth fits.

Boxes ``Q_k`` are lattice boxes: every site of every cell within sup-distance
``k`` (in lattice coordinates) of the origin cell.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .graph import FiniteGraph
from .harmonic import ScalarField, laplacian_apply, zero_tolerance
from .rational import is_exact
from .topology import boundary_faces

EPSILON0 = Fraction(1, 100)


def _abs_log(x) -> float:
    """``log |x|`` without overflowing on huge rationals."""
    x = abs(x)
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    if isinstance(x, int):
        return math.log(x)
    return math.log(float(x))


def _zero_test(f: ScalarField) -> Callable[[Any], bool]:
    if f.exact:
        return lambda x: x == 0
    tol = zero_tolerance(f)
    return lambda x: abs(x) <= tol


# ---------------------------------------------------------------------------
# densities


@dataclass(frozen=True)
class ShellCounts:
    d: int
    size: int
    small: int  # |f| <= 1
    zero: int
    big: int  # |f| > threshold


@dataclass(frozen=True)
class DensityProfile:
    threshold: Any
    shells: tuple
    cumulative: tuple

    @property
    def radius(self) -> int:
        return self.shells[-1].d if self.shells else -1

    def density(self, kind: str, n: int) -> Fraction:
        """Fraction of ``B_n`` that is ``small``, ``zero``, ``big`` or ``nonzero``."""
        row = self.cumulative[min(n, self.radius)]
        if row.size == 0:
            return Fraction(0)
        count = row.size - row.zero if kind == "nonzero" else getattr(row, kind)
        return Fraction(count, row.size)

    def rows(self) -> list[dict]:
        out = []
        for s, c in zip(self.shells, self.cumulative):
            out.append(
                {
                    "d": s.d,
                    "shell_size": s.size,
                    "shell_small": s.small,
                    "shell_zero": s.zero,
                    "shell_big": s.big,
                    "ball_size": c.size,
                    "ball_small": c.small,
                    "ball_zero": c.zero,
                    "ball_big": c.big,
                }
            )
        return out


def density_profile(fg: FiniteGraph, f: ScalarField, threshold=1, distance: Sequence[int] | None = None) -> DensityProfile:
    """Counts of ``{|f| <= 1}``, ``{f = 0}`` and ``{|f| > threshold}`` per hop shell and per ball."""
    dist = fg.hop if distance is None else distance
    is_zero = _zero_test(f)
    radius = max((dist[v] for v in f.domain if dist[v] >= 0), default=-1)
    acc = [[0, 0, 0, 0] for _ in range(radius + 1)]
    for v, x in f.items():
        d = dist[v]
        if d < 0:
            continue
        a = acc[d]
        a[0] += 1
        a[1] += abs(x) <= 1
        a[2] += is_zero(x)
        a[3] += abs(x) > threshold
    shells, cum = [], []
    run = [0, 0, 0, 0]
    for d, a in enumerate(acc):
        shells.append(ShellCounts(d, *a))
        run = [r + x for r, x in zip(run, a)]
        cum.append(ShellCounts(d, *run))
    return DensityProfile(threshold, tuple(shells), tuple(cum))


# ---------------------------------------------------------------------------
# sparse shell / sparse level / covering


@dataclass(frozen=True)
class SparseShell:
    m: int
    count: int
    counts: dict  # m -> count for every candidate shell
    total: int  # sum of the per-shell counts
    pigeonhole_bound: int  # ceil(total / #shells)
    nonzero_density: Fraction  # of {|f| > threshold} on B_2n
    C_estimate: float | None  # count / (density * n)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "count": self.count,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "total": self.total,
            "pigeonhole_bound": self.pigeonhole_bound,
            "nonzero_density": str(self.nonzero_density),
            "C_estimate": self.C_estimate,
        }


def shell_vertices(fg: FiniteGraph, m: int) -> frozenset:
    """Vertices incident to a face of ``dB_m``."""
    out: set = set()
    for fc in boundary_faces(fg, m):
        out |= fc.vertices
    return frozenset(out)


def find_sparse_shell(fg: FiniteGraph, f: ScalarField, n: int, threshold=0) -> SparseShell:
    """The shell ``m`` in ``[ceil(1.5 n), 2n]`` with fewest ``|f| > threshold``
    vertices on its faces (smallest such ``m`` on ties)."""
    if n < 4:
        raise ValueError("n too small (need n >= 4)")
    if fg.radius is None or 2 * n >= fg.radius:
        raise ValueError(f"region must strictly contain B_{2 * n}")
    if not f.exact:
        threshold = max(threshold, zero_tolerance(f))
    counts = {}
    for m in range(-(-3 * n // 2), 2 * n + 1):
        counts[m] = sum(1 for v in shell_vertices(fg, m) if abs(f[v]) > threshold)
    best = min(counts, key=lambda m: (counts[m], m))
    total = sum(counts.values())
    bound = -(-total // len(counts))
    ball = fg.ball(2 * n)
    dens = Fraction(sum(1 for v in ball if abs(f[v]) > threshold), len(ball))
    c_est = counts[best] / (float(dens) * n) if dens else None
    return SparseShell(best, counts[best], counts, total, bound, dens, c_est)


@dataclass(frozen=True)
class SparseLevel:
    found: bool
    A: Any
    band_count: int | None
    j: int | None
    K_needed: float | None  # A ** (1/n)
    ratio: Any  # 2 * Theta * D
    levels: tuple  # (j, A, band count) for every level scanned

    def as_dict(self) -> dict:
        return {
            "found": self.found,
            "A": None if self.A is None else str(self.A),
            "band_count": self.band_count,
            "j": self.j,
            "K_needed": self.K_needed,
            "ratio": str(self.ratio),
            "levels": [[j, str(a), c] for j, a, c in self.levels],
        }


def find_sparse_level(
    fg: FiniteGraph,
    f: ScalarField,
    n: int,
    delta,
    theta=None,
    max_degree: int | None = None,
    max_levels: int = 64,
) -> SparseLevel:
    """First level ``A = (2 Theta D)^j`` whose open band ``(A, 2 Theta D A)``
    holds fewer than ``delta n`` vertices of ``B_2n``.  Not finding one within
    ``max_levels`` is reported, not raised."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if theta is None:
        theta = fg.source.ellipticity().theta if fg.source is not None else Fraction(1)
    if max_degree is None:
        max_degree = fg.source.max_degree if fg.source is not None else fg.max_degree
    ratio = 2 * theta * max_degree
    ball = fg.ball(2 * n)
    mags = sorted(abs(f[v]) for v in ball)
    A = Fraction(1)
    levels = []
    for j in range(max_levels):
        hi = ratio * A
        band = sum(1 for x in mags if A < x < hi)
        levels.append((j, A, band))
        if band < delta * n:
            k = math.exp(_abs_log(A) / n) if n > 0 else None
            return SparseLevel(True, A, band, j, k, ratio, tuple(levels))
        A = hi
    return SparseLevel(False, None, None, None, None, ratio, tuple(levels))


def cover_ball(fg: FiniteGraph, n: int, delta) -> tuple[list[int], int]:
    """Greedy cover of ``B_n`` by hop balls of radius ``ceil(delta n)``.

    Returns the centres and ``ceil(delta**-2)``, the count a planar covering
    should need up to a constant.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    r = max(1, math.ceil(delta * n))
    target = fg.ball(n)
    covered: set = set()
    centres = []
    hop = fg.hop
    for c in sorted(target, key=lambda v: (hop[v], v)):
        if c in covered:
            continue
        centres.append(c)
        dist = {c: 0}
        q = deque([c])
        while q:
            v = q.popleft()
            if dist[v] == r:
                continue
            for w in fg.adjacent[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        covered |= dist.keys() & target
    return centres, math.ceil(1 / (delta * delta))


# ---------------------------------------------------------------------------
# differences and Taylor polynomials


def _shift(fg: FiniteGraph, v: int, di: int, dj: int) -> int | None:
    c = fg.cells[v]
    return fg.index.get(((c[0] + di, c[1] + dj), fg.lids[v]))


def forward_difference(f: ScalarField, direction: int, order: int = 1) -> ScalarField:
    """``D_i^order f`` along lattice generator ``e_i`` on the vertices where it is defined."""
    if direction not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order == 0:
        return f
    fg = f.graph
    step = (1, 0) if direction == 1 else (0, 1)
    weights = [(-1) ** (order - k) * comb(order, k) for k in range(order + 1)]
    vals = f.values
    out = {}
    for v in f.domain:
        acc = 0
        for k, wgt in enumerate(weights):
            u = _shift(fg, v, k * step[0], k * step[1])
            if u is None or u not in vals:
                break
            acc += wgt * vals[u]
        else:
            out[v] = acc
    if not out:
        raise ValueError("domain too small for this difference")
    return ScalarField(fg, dict(sorted(out.items())), f.exact)


def mixed_difference(f: ScalarField, a: int, b: int) -> ScalarField:
    return forward_difference(forward_difference(f, 1, a), 2, b)


def _falling_binomial(k: int) -> list[Fraction]:
    """Monomial coefficients of ``binom(t, k) = t (t-1) ... (t-k+1) / k!``."""
    poly = [Fraction(1)]
    for i in range(k):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d + 1] += c
            nxt[d] -= i * c
        poly = nxt
    fk = math.factorial(k)
    return [c / fk for c in poly]


@dataclass(frozen=True)
class LatticePolynomial:
    """``p(t) = sum c_ij t1^i t2^j`` in lattice displacement ``t`` from ``base``;
    defined on the translate ``base + L`` (same site as ``base``)."""

    coeffs: dict  # (i, j) -> coefficient
    base: tuple  # (cell, lid)
    degree: int

    def __post_init__(self) -> None:
        if any(i + j > self.degree for i, j in self.coeffs):
            raise ValueError("coefficient above the declared degree")

    def __call__(self, t1: int, t2: int):
        return sum(c * t1**i * t2**j for (i, j), c in self.coeffs.items())

    def at_cell(self, cell) -> Any:
        return self(cell[0] - self.base[0][0], cell[1] - self.base[0][1])

    def nonzero_coeffs(self) -> dict:
        return {k: c for k, c in self.coeffs.items() if c != 0}

    def to_field(self, fg: FiniteGraph, exact: bool = True) -> ScalarField:
        lid = self.base[1]
        return ScalarField(fg, {v: self.at_cell(fg.cells[v]) for v in range(fg.n) if fg.lids[v] == lid}, exact)


def discrete_taylor(f: ScalarField, v0: int, m: int) -> LatticePolynomial:
    """Degree-``m`` Newton interpolant matching every ``D1^a D2^b f(v0)``, ``a + b <= m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    fg = f.graph
    vals = f.values
    grid = {}
    for i in range(m + 1):
        for j in range(m + 1 - i):
            u = _shift(fg, v0, i, j)
            if u is None or u not in vals:
                raise ValueError(f"insufficient domain: need values {m} lattice steps from the base vertex")
            grid[i, j] = vals[u]
    fall = [_falling_binomial(k) for k in range(m + 1)]
    coeffs: dict = {}
    for a in range(m + 1):
        for b in range(m + 1 - a):
            d = sum(
                (-1) ** (a - i + b - j) * comb(a, i) * comb(b, j) * grid[i, j]
                for i in range(a + 1)
                for j in range(b + 1)
            )
            if d == 0:
                continue
            for i, ci in enumerate(fall[a]):
                if ci == 0:
                    continue
                for j, cj in enumerate(fall[b]):
                    if cj:
                        coeffs[i, j] = coeffs.get((i, j), 0) + d * ci * cj
    if not f.exact:
        coeffs = {k: float(c) for k, c in coeffs.items()}
    return LatticePolynomial(coeffs, (fg.cells[v0], fg.lids[v0]), m)


def taylor_error(f: ScalarField, p: LatticePolynomial, window: int) -> float:
    """``sup |f - p|`` over the base site's translates in ``Q_window`` around the base cell."""
    fg = f.graph
    (c0, c1), lid = p.base
    worst = 0.0
    for i in range(-window, window + 1):
        for j in range(-window, window + 1):
            v = fg.index.get(((c0 + i, c1 + j), lid))
            if v is None or v not in f.values:
                raise ValueError("field undefined on the error window")
            worst = max(worst, abs(float(f.values[v] - p(i, j))))
    return worst


# ---------------------------------------------------------------------------
# lattice-box arrays


def _box_array(f: ScalarField, cell0, k: int, lid: int) -> np.ndarray:
    fg = f.graph
    dtype = object if f.exact else float
    arr = np.empty((2 * k + 1, 2 * k + 1), dtype=dtype)
    for i in range(-k, k + 1):
        for j in range(-k, k + 1):
            v = fg.index.get(((cell0[0] + i, cell0[1] + j), lid))
            if v is None or v not in f.values:
                raise ValueError(f"field undefined on Q_{k}")
            arr[i + k, j + k] = f.values[v]
    return arr


def _box_max(f: ScalarField, cell0, k: int) -> Any:
    nsites = len(f.graph.site_ids) or 1
    return max(np.max(np.abs(_box_array(f, cell0, k, lid))) for lid in range(nsites))


@dataclass(frozen=True)
class CaccioppoliMeasurement:
    R: int
    m: int
    sup_Dm: float  # max over a + b = m of ||D1^a D2^b f||_inf on Q_R
    l2: float  # ||f||_2 on Q_3R (plain sum of squares)
    ratio: float


def caccioppoli_ratio(f: ScalarField, R: int, m: int, v0: int | None = None) -> CaccioppoliMeasurement:
    """``C = (R/m) (R ||D^m f||_inf(Q_R) / ||f||_2(Q_3R))^(1/m)``."""
    if m < 1 or 4 * m > R:
        raise ValueError("m too large relative to R (need 1 <= m <= R/4)")
    fg = f.graph
    v0 = fg.origin if v0 is None else v0
    cell0 = fg.cells[v0]
    nsites = len(fg.site_ids) or 1
    sup = 0.0
    l2sq = 0.0
    for lid in range(nsites):
        big = _box_array(f, cell0, 3 * R, lid)
        l2sq += float(np.sum(np.asarray(big, dtype=float) ** 2))
        lo, hi = 2 * R, 4 * R + m + 1  # Q_R plus m forward steps
        win = big[lo:hi, lo:hi]
        for a in range(m + 1):
            d = np.diff(np.diff(win, a, axis=0), m - a, axis=1)
            d = d[: 2 * R + 1, : 2 * R + 1]
            sup = max(sup, float(np.max(np.abs(np.asarray(d, dtype=float)))))
    l2 = math.sqrt(l2sq)
    if l2 == 0 or sup == 0:
        return CaccioppoliMeasurement(R, m, sup, l2, 0.0)
    return CaccioppoliMeasurement(R, m, sup, l2, (R / m) * (R * sup / l2) ** (1 / m))


# ---------------------------------------------------------------------------
# three-ball inequality


@dataclass(frozen=True)
class ThreeBallParams:
    beta: float = -math.log(32)
    alpha: float = 2.0**-12
    epsilon: float = 0.01  # density defect allowed in {|f| <= 1} on Q_N
    c: float | None = None  # decay rate of the second term; default -beta - log(32)/2

    def __post_init__(self) -> None:
        if not self.beta < 0:
            raise ValueError("beta must be negative")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")

    @property
    def rate(self) -> float:
        return self.c if self.c is not None else -self.beta - math.log(32) / 2


@dataclass(frozen=True)
class ThreeBallReport:
    N: int
    lhs: float  # max |f| on Q_2N
    M: float
    small_density: float  # of {|f| <= 1} in Q_N
    hypothesis_met: bool
    term_sqrt: float  # M^(1/2)
    term_exp: float  # exp(-c N) M
    C_implied: float  # lhs / (term_sqrt + term_exp)
    case: int
    gamma_N: int | None
    growth_factor: float | None  # 2 (16N / ((1 - gamma) N))^(gamma N)
    case1_bound: float | None
    case1_final: float | None  # (3 / alpha) M^(1/2)
    case2_bound: float | None  # 32^(N/2) 2 delta + exp(beta N) M

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def three_ball_check(
    f: ScalarField, N: int, params: ThreeBallParams | None = None, M=None, v0: int | None = None
) -> ThreeBallReport:
    """Both sides of ``max_{Q_2N}|f| <= C M^(1/2) + C exp(-cN) M`` plus the two case bounds."""
    if N < 1:
        raise ValueError("N must be positive")
    params = params or ThreeBallParams()
    fg = f.graph
    v0 = fg.origin if v0 is None else v0
    cell0 = fg.cells[v0]
    sup4 = float(_box_max(f, cell0, 4 * N))
    lhs = float(_box_max(f, cell0, 2 * N))
    if M is None:
        M = sup4
    elif sup4 > M:
        raise ValueError(f"|f| exceeds M on Q_{4 * N}")
    M = float(M)
    nsites = len(fg.site_ids) or 1
    small = total = 0
    for lid in range(nsites):
        arr = np.abs(np.asarray(_box_array(f, cell0, N, lid), dtype=float))
        small += int(np.sum(arr <= 1))
        total += arr.size
    dens = small / total
    term_sqrt = math.sqrt(M)
    term_exp = math.exp(-params.rate * N) * M
    denom = term_sqrt + term_exp
    c_impl = lhs / denom if denom > 0 else 0.0
    b = params.beta
    if M * math.exp(b * N) <= 1:
        gN = max(0, math.ceil(math.log(M) / -math.log(params.alpha))) if M > 0 else 0
        gamma = gN / N
        growth = 2 * (16 / (1 - gamma)) ** gN if gamma < 1 else None
        rep = ThreeBallReport(
            N, lhs, M, dens, dens >= 1 - params.epsilon, term_sqrt, term_exp, c_impl,
            1, gN, growth, None if growth is None else growth + 1, 3 / params.alpha * term_sqrt, None,
        )
    else:
        delta = M * math.exp(b * N)
        rep = ThreeBallReport(
            N, lhs, M, dens, dens >= 1 - params.epsilon, term_sqrt, term_exp, c_impl,
            2, None, None, None, None, 32 ** (N / 2) * 2 * delta + math.exp(b * N) * M,
        )
    return rep


def fit_three_ball_rate(f: ScalarField, Ns: Iterable[int], params: ThreeBallParams | None = None):
    """Fit ``log(max_{Q_2N}|f| / max_{Q_4N}|f|) = -c N + b``; returns ``(c, b, reports)``."""
    reps = [three_ball_check(f, N, params) for N in sorted(Ns)]
    if len(reps) < 2:
        raise ValueError("need at least two values of N")
    xs = np.array([r.N for r in reps], dtype=float)
    ys = np.array([math.log(r.lhs / r.M) for r in reps])
    slope, icpt = np.polyfit(xs, ys, 1)
    return -float(slope), float(icpt), reps


# ---------------------------------------------------------------------------
# growth


@dataclass(frozen=True)
class GrowthFit:
    exponent: float
    log_coefficient: float
    intercept: float
    residual: float  # RMS
    maxima: dict  # radius -> max |f| on the ball

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "log_coefficient": self.log_coefficient,
            "intercept": self.intercept,
            "residual": self.residual,
            "maxima": {str(k): str(v) if is_exact(v) else v for k, v in self.maxima.items()},
        }


def sup_norm_distance(fg: FiniteGraph) -> list[int]:
    return [math.ceil(max(abs(x) for x in p)) for p in fg.positions]


def growth_exponent(f: ScalarField, radii: Iterable[int], distance: str | Sequence[int] = "hop") -> GrowthFit:
    """Least-squares fit ``log max_{B_n}|f| = a n + b log n + c`` over radii ``>= 8``.

    ``distance`` is ``"hop"``, ``"sup-norm"`` (positions) or a per-vertex list.
    The ``log n`` column absorbs polynomial growth, so ``a`` is the exponential rate.
    """
    rs = sorted({int(r) for r in radii if r >= 8})
    if len(rs) < 3:
        raise ValueError("need at least 3 radii >= 8")
    fg = f.graph
    if distance == "hop":
        dist = fg.hop
        if fg.radius is not None and fg.metric == "graph-hop" and rs[-1] > fg.radius:
            raise ValueError(f"field covers radius {fg.radius} < {rs[-1]}")
    elif distance == "sup-norm":
        dist = sup_norm_distance(fg)
    else:
        dist = distance
    best: dict = {}
    for v, x in f.items():
        d = dist[v]
        if d < 0 or d > rs[-1]:
            continue
        if d not in best or abs(x) > best[d]:
            best[d] = abs(x)
    maxima = {}
    run = None
    ds = sorted(best)
    k = 0
    for r in rs:
        while k < len(ds) and ds[k] <= r:
            x = best[ds[k]]
            run = x if run is None or x > run else run
            k += 1
        if run is None or run == 0:
            raise ValueError(f"f vanishes on the ball of radius {r}")
        maxima[r] = run
    xs = np.array(rs, dtype=float)
    X = np.column_stack([xs, np.log(xs), np.ones_like(xs)])
    y = np.array([_abs_log(maxima[r]) for r in rs])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = float(np.sqrt(np.mean((X @ coef - y) ** 2)))
    return GrowthFit(float(coef[0]), float(coef[1]), float(coef[2]), res, maxima)


# ---------------------------------------------------------------------------
# zero-density certificate


@dataclass(frozen=True)
class ZeroDensityCertificate:
    n: int
    epsilon: Fraction
    nonzero: int
    size: int
    density: Fraction
    verdict: str  # PASS | FAIL | hypothesis unmet
    label: str
    nonzero_on_Bn: int
    planar: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "epsilon": str(self.epsilon),
            "nonzero": self.nonzero,
            "size": self.size,
            "density": str(self.density),
            "density_float": float(self.density),
            "verdict": self.verdict,
            "label": self.label,
            "nonzero_on_Bn": self.nonzero_on_Bn,
            "planar": self.planar,
        }


def zero_density_certificate(fg: FiniteGraph, f: ScalarField, epsilon=EPSILON0, n: int | None = None) -> ZeroDensityCertificate:
    """If ``{f != 0}`` has density at most ``epsilon`` in ``B_2n``, check ``f = 0`` on ``B_n``.

    On a planar graph a FAIL signals a defect; on a non-planar graph it is the
    expected counterexample behaviour and is labelled so.
    """
    if not f.exact:
        raise ValueError("zero-density certificates need an exact-mode field")
    eps = Fraction(epsilon) if not isinstance(epsilon, float) else Fraction(epsilon).limit_denominator(10**9)
    if n is None:
        if fg.radius is None:
            raise ValueError("n is required for regions without a radius")
        n = (fg.radius - 1) // 2
    if n < 1:
        raise ValueError("n must be positive")
    big = fg.ball(2 * n)
    hop = fg.hop
    if any(d > 2 * n for d in (hop[v] for v in big)) or (fg.radius is not None and 2 * n >= fg.radius):
        raise ValueError(f"region must strictly contain B_{2 * n}")
    lf = laplacian_apply(f)
    for v in big:
        if v not in lf.values:
            raise ValueError(f"f is not defined around every vertex of B_{2 * n}")
        if lf.values[v] != 0:
            raise ValueError(f"f is not harmonic at vertex {v} of B_{2 * n}")
    nonzero = sum(1 for v in big if f[v] != 0)
    dens = Fraction(nonzero, len(big))
    on_bn = sum(1 for v in fg.ball(n) if f[v] != 0)
    if dens > eps:
        verdict, label = "hypothesis unmet", "nonzero density above epsilon; no conclusion"
    elif on_bn == 0:
        verdict, label = "PASS", "f vanishes on B_n"
    elif not fg.planar:
        verdict, label = "FAIL", "non-planar counterexample"
    else:
        verdict, label = "FAIL", "defect: planar graph with sparse nonzeros but f != 0 on B_n"
    return ZeroDensityCertificate(n, eps, nonzero, len(big), dens, verdict, label, on_bn, fg.planar)
