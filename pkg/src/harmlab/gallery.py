"""Explicit harmonic functions: the crossing-lattice counterexample, the Z^3
diagonal function and a few classical harmonic polynomials on Z^2."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import EdgeTemplate, FiniteGraph, LatticeBasis, PeriodicGraph, Site, instantiate_region
from .harmonic import HarmonicityReport, ScalarField, is_harmonic, laplacian_apply
from .lattices import cubic_box, square_lattice

EXP_BASE = 3 + 2 * math.sqrt(2)  # root of c + 1/c = 6


class CounterexampleError(ValueError):
    pass


@dataclass(frozen=True)
class CrossingLatticeParams:
    A1: Fraction
    A2: Fraction
    A3: Fraction
    A4: Fraction

    def __post_init__(self) -> None:
        if min(self.A1, self.A2, self.A3) <= 0:
            raise CounterexampleError("A1, A2, A3 must be positive")
        if self.A1 == self.A2:
            raise CounterexampleError("A1 != A2 required")
        if self.A4 <= 0:
            raise CounterexampleError(f"A4 must be positive (got {self.A4})")


def a3_threshold(A1, A2) -> Fraction:
    A1, A2 = Fraction(A1), Fraction(A2)
    return 2 * A1**2 * A2**2 / ((A1 - A2) ** 2 * (A1 + A2))


def a4_closed_form(A1, A2, A3) -> Fraction:
    """Closed form of the solved A4; kept only as a regression check on the solve."""
    A1, A2, A3 = Fraction(A1), Fraction(A2), Fraction(A3)
    return A3 * (A2 - A1) ** 2 / (A1 * A2) - 2 * A1 * A2 / (A1 + A2)


def crossing_lattice(A1, A2, A3, A4) -> PeriodicGraph:
    """``Z^2`` with the four-conductance crossing pattern, period ``2Z^2``.

    Sites (0,0) and (1,1) of the 2x2 block are the even vertices; all edge
    templates start at an even vertex.
    """
    A1, A2, A3, A4 = (Fraction(x) for x in (A1, A2, A3, A4))
    F = Fraction
    sites = (
        Site("e0", (F(0), F(0))),
        Site("o1", (F(1), F(0))),
        Site("o2", (F(0), F(1))),
        Site("e3", (F(1), F(1))),
    )
    t = EdgeTemplate
    edges = (
        # even vertex at (0,0)
        t("e0", "o2", (0, -1), A1),  # x - e2
        t("e0", "o1", (-1, 0), A1),  # x - e1
        t("e0", "o2", (0, 0), A2),  # x + e2
        t("e0", "o1", (0, 0), A2),  # x + e1
        t("e0", "e3", (0, 0), A4),  # x + (1,1)
        t("e0", "e0", (1, 1), A3),  # x + (2,2)
        # even vertex at (1,1)
        t("e3", "o1", (0, 0), A1),
        t("e3", "o2", (0, 0), A1),
        t("e3", "o1", (0, 1), A2),
        t("e3", "o2", (1, 0), A2),
        t("e3", "e0", (1, 1), A4),
        t("e3", "e3", (1, 1), A3),
    )
    return PeriodicGraph(LatticeBasis((F(2), F(0)), (F(0), F(2))), sites, edges, planar=False)


def diagonal_value(A1, A2, i: int) -> Fraction:
    return (-Fraction(A2) / Fraction(A1)) ** i


@dataclass(frozen=True)
class DiagonalSequence:
    A1: Fraction
    A2: Fraction
    values: dict  # i -> z_i

    @property
    def ratio(self) -> Fraction:
        return -self.A2 / self.A1

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]


def diagonal_sequence(A1, A2, indices: Iterable[int]) -> DiagonalSequence:
    A1, A2 = Fraction(A1), Fraction(A2)
    if A1 <= 0 or A2 <= 0:
        raise ValueError("A1 and A2 must be positive")
    return DiagonalSequence(A1, A2, {i: diagonal_value(A1, A2, i) for i in indices})


def diagonal_field(fg: FiniteGraph, A1, A2) -> ScalarField:
    """``h(x1, x2) = 1{x1 = x2} z_{x1}`` on every vertex of ``fg``."""
    zero = Fraction(0)

    def h(p):
        if p[0] != p[1]:
            return zero
        return diagonal_value(A1, A2, int(p[0]))

    return ScalarField.from_function(fg, h)


def solve_a4(A1, A2, A3) -> Fraction:
    """Solve the single harmonicity equation of ``h`` at the diagonal vertex 0 for A4.

    The residual at 0 is affine in A4, so two evaluations of the actual
    Laplacian (A4 = 1 and A4 = 2) pin it down exactly.
    """
    A1, A2, A3 = Fraction(A1), Fraction(A2), Fraction(A3)
    if A1 == A2:
        raise CounterexampleError("A1 != A2 required")
    res = []
    for a4 in (Fraction(1), Fraction(2)):
        fg = instantiate_region(crossing_lattice(A1, A2, A3, a4), 3, "sup-norm-box")
        res.append(laplacian_apply(diagonal_field(fg, A1, A2))[fg.origin])
    r1, r2 = res
    slope = r2 - r1
    if slope == 0:  # pragma: no cover - slope is 2 + A2/A1 + A1/A2 > 0
        raise CounterexampleError("harmonicity equation does not involve A4")
    return 1 - r1 / slope


@dataclass(frozen=True)
class Counterexample:
    params: CrossingLatticeParams
    graph: PeriodicGraph

    def field_on(self, fg: FiniteGraph) -> ScalarField:
        return diagonal_field(fg, self.params.A1, self.params.A2)

    def box(self, side: int) -> tuple[FiniteGraph, ScalarField]:
        if side % 2 == 0:
            raise ValueError("box side must be odd")
        fg = instantiate_region(self.graph, side // 2, "sup-norm-box")
        return fg, self.field_on(fg)


def build_crossing_lattice(A1, A2, A3) -> Counterexample:
    """Solve for A4 and return the graph plus a constructor for ``h``.

    Raises :class:`CounterexampleError` when ``A1 == A2`` or when the solved
    A4 is not positive (``A3`` at or below the threshold); the message carries
    the computed value.
    """
    A1, A2, A3 = Fraction(A1), Fraction(A2), Fraction(A3)
    if min(A1, A2, A3) <= 0:
        raise CounterexampleError("A1, A2, A3 must be positive")
    if A1 == A2:
        raise CounterexampleError("A1 != A2 required")
    a4 = solve_a4(A1, A2, A3)
    if a4 <= 0:
        raise CounterexampleError(
            f"A3 = {A3} is not above the threshold {a3_threshold(A1, A2)}: solved A4 = {a4}"
        )
    params = CrossingLatticeParams(A1, A2, A3, a4)
    return Counterexample(params, crossing_lattice(A1, A2, A3, a4))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Z3Example:
    graph: FiniteGraph
    field: ScalarField
    report: HarmonicityReport


def z3_box_example(side: int, c: float = EXP_BASE, tol: float = 1e-9) -> Z3Example:
    """``(x, y, z) -> c^z (-1)^x 1{x = y}`` on the cube of the given odd side."""
    if side < 5:
        raise ValueError("side must be at least 5")
    fg = cubic_box(side)

    def f(p):
        x, y, z = (int(t) for t in p)
        return (c**z) * (-1) ** x if x == y else 0.0

    field = ScalarField.from_function(fg, f, exact=False)
    return Z3Example(fg, field, is_harmonic(field, tol))


GALLERY = ("coordinate", "xy", "x2-minus-y2", "exp-alternating")


def gallery_function(name: str):
    if name == "coordinate":
        return (lambda p: p[0]), True
    if name == "xy":
        return (lambda p: p[0] * p[1]), True
    if name == "x2-minus-y2":
        return (lambda p: p[0] * p[0] - p[1] * p[1]), True
    if name == "exp-alternating":
        return (lambda p: EXP_BASE ** int(p[0]) * (-1.0) ** int(p[1])), False
    raise KeyError(f"unknown gallery field {name!r}")


def harmonic_gallery(name: str, n: int, graph: FiniteGraph | None = None) -> ScalarField:
    """The named harmonic field on ``B_n`` of unit ``Z^2`` (or on ``graph``)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    fn, exact = gallery_function(name)
    fg = graph if graph is not None else instantiate_region(square_lattice(), n)
    return ScalarField.from_function(fg, fn, exact=exact)
