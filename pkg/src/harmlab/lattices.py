"""Standard periodic graphs used throughout the test corpus."""

from __future__ import annotations

from fractions import Fraction as F

from .graph import EdgeTemplate, FiniteGraph, LatticeBasis, PeriodicGraph, Site


def square_lattice(conductance=1) -> PeriodicGraph:
    c = F(conductance)
    return PeriodicGraph(
        LatticeBasis((F(1), F(0)), (F(0), F(1))),
        (Site(0, (F(0), F(0))),),
        (EdgeTemplate(0, 0, (1, 0), c), EdgeTemplate(0, 0, (0, 1), c)),
        planar=True,
    )


def triangular_lattice(conductance=1) -> PeriodicGraph:
    # sheared so that e1 + e2 is the short diagonal; all coordinates rational
    c = F(conductance)
    return PeriodicGraph(
        LatticeBasis((F(1), F(0)), (F(-1, 2), F(1))),
        (Site(0, (F(0), F(0))),),
        (
            EdgeTemplate(0, 0, (1, 0), c),
            EdgeTemplate(0, 0, (0, 1), c),
            EdgeTemplate(0, 0, (1, 1), c),
        ),
        planar=True,
    )


def honeycomb_lattice(conductance=1) -> PeriodicGraph:
    # affine image of the regular hexagonal lattice: B sits at (e1 + e2) / 3
    c = F(conductance)
    return PeriodicGraph(
        LatticeBasis((F(1), F(0)), (F(1, 2), F(1))),
        (Site("A", (F(0), F(0))), Site("B", (F(1, 2), F(1, 3)))),
        (
            EdgeTemplate("A", "B", (0, 0), c),
            EdgeTemplate("A", "B", (-1, 0), c),
            EdgeTemplate("A", "B", (0, -1), c),
        ),
        planar=True,
    )


BUILTIN = {
    "square": square_lattice,
    "z2": square_lattice,
    "triangular": triangular_lattice,
    "honeycomb": honeycomb_lattice,
}


def cubic_box(side: int, conductance=1) -> FiniteGraph:
    """Unit-conductance ``Z^3`` restricted to the cube ``[-h, h]^3`` with ``side = 2h + 1``.

    Loaded as a generic weighted graph: no embedding, no planarity.
    """
    if side < 1 or side % 2 == 0:
        raise ValueError("side must be a positive odd integer")
    h = side // 2
    rng = range(-h, h + 1)
    keys = [(x, y, z) for x in rng for y in rng for z in rng]
    index = {k: i for i, k in enumerate(keys)}
    edges = []
    interior = []
    c = F(conductance)
    for i, (x, y, z) in enumerate(keys):
        if max(abs(x), abs(y), abs(z)) < h:
            interior.append(i)
        for d in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            j = index.get((x + d[0], y + d[1], z + d[2]))
            if j is not None:
                edges.append((i, j, c))
    return FiniteGraph(
        cells=tuple(keys),
        lids=tuple(0 for _ in keys),
        positions=tuple(tuple(F(t) for t in k) for k in keys),
        edges=tuple(edges),
        interior=frozenset(interior),
        origin=index[(0, 0, 0)],
        radius=h,
        metric="sup-norm-box",
        planar=False,
        site_ids=(0,),
    )
