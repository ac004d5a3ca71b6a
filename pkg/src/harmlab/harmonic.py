"""Weighted graph Laplacian, Dirichlet problems and effective conductance.

Sign convention: ``(Lf)(u) = sum_w a(u, w) (f(u) - f(w))`` -- positive
semidefinite, constants in the kernel.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

import numpy as np

from .graph import FiniteGraph
from .linalg import ConvergenceError, SingularSystemError, conjugate_gradient, solve_direct, solve_exact, to_csr
from .rational import is_exact

EXACT_CUTOFF = 5000
ZERO_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Vertex-indexed values on (a subset of) a finite graph.

    ``values`` maps vertex index -> number; its keys are the field's domain.
    ``exact`` tags rational mode (ints/Fractions) versus floating mode.
    """

    graph: FiniteGraph
    values: Mapping[int, Any]
    exact: bool

    def __post_init__(self) -> None:
        if self.exact and not all(is_exact(v) for v in self.values.values()):
            raise TypeError("exact field holds a non-rational value")

    def __getitem__(self, v: int):
        return self.values[v]

    def __contains__(self, v: int) -> bool:
        return v in self.values

    def __len__(self) -> int:
        return len(self.values)

    @property
    def domain(self) -> frozenset:
        return frozenset(self.values)

    def get(self, v, default=None):
        return self.values.get(v, default)

    def items(self):
        return self.values.items()

    def restrict(self, vertices: Iterable[int]) -> "ScalarField":
        return ScalarField(self.graph, {v: self.values[v] for v in vertices if v in self.values}, self.exact)

    def map(self, fn: Callable[[Any], Any], exact: bool | None = None) -> "ScalarField":
        return ScalarField(self.graph, {v: fn(x) for v, x in self.values.items()}, self.exact if exact is None else exact)

    def as_float(self) -> "ScalarField":
        return ScalarField(self.graph, {v: float(x) for v, x in self.values.items()}, False)

    def max_abs(self, vertices: Iterable[int] | None = None) -> float:
        vs = self.values if vertices is None else [v for v in vertices if v in self.values]
        return max((abs(self.values[v]) for v in vs), default=0)

    def __add__(self, other: "ScalarField") -> "ScalarField":
        return ScalarField(self.graph, {v: x + other.values[v] for v, x in self.values.items()}, self.exact and other.exact)

    def scale(self, c) -> "ScalarField":
        return ScalarField(self.graph, {v: c * x for v, x in self.values.items()}, self.exact and is_exact(c))

    @classmethod
    def from_function(cls, graph: FiniteGraph, fn: Callable[[tuple], Any], *, exact: bool = True,
                      vertices: Iterable[int] | None = None) -> "ScalarField":
        """Evaluate ``fn(position)`` at every vertex (or at ``vertices``)."""
        vs = range(graph.n) if vertices is None else vertices
        return cls(graph, {v: fn(graph.positions[v]) for v in vs}, exact)

    @classmethod
    def zeros(cls, graph: FiniteGraph, vertices: Iterable[int] | None = None) -> "ScalarField":
        vs = range(graph.n) if vertices is None else vertices
        return cls(graph, {v: Fraction(0) for v in vs}, True)


@dataclass(frozen=True)
class SolverConfig:
    mode: str = "auto"  # auto | exact-elimination | iterative | direct
    tolerance: float = 1e-10
    max_iterations: int = 200_000
    exact_backend: str = "auto"

    def __post_init__(self) -> None:
        if self.mode not in ("auto", "exact-elimination", "iterative", "direct"):
            raise ValueError(f"unknown solver mode {self.mode!r}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")


class DirichletError(ValueError):
    pass


def laplacian_apply(f: ScalarField) -> ScalarField:
    """``Lf`` at interior vertices whose whole neighbourhood lies in the domain of ``f``."""
    g = f.graph
    vals = f.values
    out = {}
    zero = Fraction(0) if f.exact else 0.0
    for u in g.interior:
        fu = vals.get(u)
        if fu is None:
            continue
        acc = zero
        ok = True
        for w, c in g.neighbors[u]:
            fw = vals.get(w)
            if fw is None:
                ok = False
                break
            acc += c * (fu - fw)
        if ok:
            out[u] = acc if f.exact else float(acc)
    return ScalarField(g, out, f.exact)


@dataclass(frozen=True)
class HarmonicityReport:
    tolerance: float
    checked: int
    violations: tuple  # (vertex, residual)
    max_residual: Any

    @property
    def certified(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "checked": self.checked,
            "certified": self.certified,
            "violation_count": len(self.violations),
            "max_residual": str(self.max_residual) if is_exact(self.max_residual) else float(self.max_residual),
        }


def is_harmonic(f: ScalarField, tol=0) -> HarmonicityReport:
    """List interior vertices with ``|Lf| > tol``."""
    lf = laplacian_apply(f)
    viol = tuple(sorted((v, r) for v, r in lf.values.items() if abs(r) > tol))
    mx = max((abs(r) for r in lf.values.values()), default=0)
    return HarmonicityReport(tol, len(lf), viol, mx)


def _components_without_boundary(g: FiniteGraph, unknowns: list[int], known: set) -> list[int]:
    seen = set()
    bad = []
    uset = set(unknowns)
    for s in unknowns:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        q = deque([s])
        touches = False
        while q:
            v = q.popleft()
            for w, _c in g.neighbors[v]:
                if w in known:
                    touches = True
                elif w in uset and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    q.append(w)
        if not touches:
            bad.extend(comp)
    return bad


def _solve(g: FiniteGraph, unknowns: list[int], known: Mapping[int, Any], cfg: SolverConfig) -> tuple[dict, bool]:
    pos = {v: i for i, v in enumerate(unknowns)}
    rows: list[dict] = []
    rhs: list = []
    exact_ok = all(is_exact(x) for x in known.values()) and all(is_exact(c) for _, _, c in g.edges)
    zero = Fraction(0) if exact_ok else 0.0
    for u in unknowns:
        row: dict = {}
        b = zero
        diag = zero
        for w, c in g.neighbors[u]:
            if w == u:
                continue
            diag += c
            j = pos.get(w)
            if j is None:
                b += c * known[w]
            else:
                row[j] = row.get(j, zero) - c
        row[pos[u]] = diag
        rows.append(row)
        rhs.append(b)
    mode = cfg.mode
    if mode == "auto":
        mode = "exact-elimination" if exact_ok and len(unknowns) <= EXACT_CUTOFF else "iterative"
    if mode == "exact-elimination":
        if not exact_ok:
            raise DirichletError("exact mode requires rational conductances and boundary data")
        x = solve_exact(rows, rhs, backend=cfg.exact_backend)
        return {v: x[i] for i, v in enumerate(unknowns)}, True
    A = to_csr(rows, len(rows))
    b = np.array([float(v) for v in rhs])
    if mode == "direct":
        x = solve_direct(A, b)
    else:
        scale = max((abs(float(v)) for v in known.values()), default=0.0) or 1.0
        x, _its = conjugate_gradient(A, b, atol=cfg.tolerance * scale, max_iterations=cfg.max_iterations)
    return {v: float(x[i]) for i, v in enumerate(unknowns)}, False


def solve_dirichlet(fg: FiniteGraph, boundary: ScalarField | Mapping[int, Any], cfg: SolverConfig | None = None) -> ScalarField:
    """Harmonic extension of boundary data into the interior of ``fg``."""
    cfg = cfg or SolverConfig()
    bvals = boundary.values if isinstance(boundary, ScalarField) else boundary
    missing = [v for v in fg.boundary if v not in bvals]
    if missing:
        raise DirichletError(f"boundary data missing at {len(missing)} boundary vertices")
    interior = sorted(fg.interior)
    if not interior:
        raise DirichletError("interior is empty")
    known = {v: bvals[v] for v in fg.boundary}
    bad = _components_without_boundary(fg, interior, set(known))
    if bad:
        raise DirichletError(f"{len(bad)} interior vertices are not connected to the boundary")
    try:
        sol, exact = _solve(fg, interior, known, cfg)
    except SingularSystemError as exc:  # pragma: no cover - impossible for positive conductances
        raise RuntimeError(f"internal defect: singular Laplacian block ({exc})") from exc
    values = dict(known)
    values.update(sol)
    if not exact:
        values = {v: float(x) for v, x in values.items()}
    return ScalarField(fg, dict(sorted(values.items())), exact)


def effective_conductance(fg: FiniteGraph, s: int, t: int, cfg: SolverConfig | None = None):
    """Current out of ``s`` when ``s`` is held at 1 and ``t`` at 0."""
    if s == t:
        raise ValueError("terminals must differ")
    cfg = cfg or SolverConfig()
    # restrict to the component of s; t must be in it
    comp = {s}
    q = deque([s])
    while q:
        v = q.popleft()
        for w in fg.adjacent[v]:
            if w not in comp:
                comp.add(w)
                q.append(w)
    if t not in comp:
        raise ValueError("graph is disconnected between the terminals")
    one = Fraction(1)
    known = {s: one, t: Fraction(0)}
    unknowns = sorted(comp - {s, t})
    f = dict(known)
    if unknowns:
        sol, _ = _solve(fg, unknowns, known, cfg)
        f.update(sol)
    total = 0
    for w, c in fg.neighbors[s]:
        if w != s:
            total += c * (f[s] - f[w])
    return total


def zero_tolerance(f: ScalarField, boundary_scale=None):
    """What counts as zero for ``f``: literal zero in exact mode."""
    if f.exact:
        return 0
    scale = boundary_scale if boundary_scale is not None else (f.max_abs(f.graph.boundary) or 1.0)
    return ZERO_RTOL * float(scale)
