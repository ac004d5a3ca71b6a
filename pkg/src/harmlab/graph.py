"""Periodic weighted graphs in the plane and their finite instantiations.

A :class:`PeriodicGraph` is a fundamental domain (a list of sites) plus edge
templates ``(u, v, offset, conductance)``; the template joins site ``u`` in
cell ``c`` to site ``v`` in cell ``c + offset``.  Everything is exact
(``fractions.Fraction``) so that harmonicity can be certified with zero
tolerance.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, cmp_to_key
from typing import Any, Hashable, Iterable, Sequence

from .rational import format_rational, parse_rational

MAX_DEGREE = 64

Vec = tuple  # tuple of Fractions


class GraphSpecError(ValueError):
    """Raised when a graph-spec document is malformed or violates an invariant."""


def _vec(v: Iterable[Any]) -> tuple[Fraction, ...]:
    return tuple(parse_rational(x) for x in v)


def _sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def cross(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _angle_cmp(a: Vec, b: Vec) -> int:
    """Exact counterclockwise angular comparison of two nonzero directions."""
    ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
    hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
    if ha != hb:
        return ha - hb
    c = cross(a, b)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


angle_key = cmp_to_key(_angle_cmp)


@dataclass(frozen=True)
class LatticeBasis:
    e1: tuple[Fraction, Fraction]
    e2: tuple[Fraction, Fraction]

    def __post_init__(self) -> None:
        if len(self.e1) != 2 or len(self.e2) != 2:
            raise GraphSpecError("lattice basis vectors must be 2-vectors")
        if self.det == 0:
            raise GraphSpecError("degenerate lattice basis")

    @property
    def det(self) -> Fraction:
        return cross(self.e1, self.e2)

    def point(self, cell: Sequence[int]) -> tuple[Fraction, Fraction]:
        i, j = cell
        return (i * self.e1[0] + j * self.e2[0], i * self.e1[1] + j * self.e2[1])

    def to_lattice(self, p: Vec) -> tuple[Fraction, Fraction]:
        """Coordinates of ``p`` in the basis (exact)."""
        d = self.det
        return (cross(p, self.e2) / d, cross(self.e1, p) / d)


@dataclass(frozen=True)
class Site:
    id: Hashable
    pos: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class EdgeTemplate:
    u: Hashable
    v: Hashable
    offset: tuple[int, int]
    conductance: Fraction


@dataclass(frozen=True)
class EllipticityBounds:
    lam: Fraction
    Lam: Fraction

    @property
    def theta(self) -> Fraction:
        return self.Lam / self.lam


@dataclass(frozen=True)
class PeriodicGraph:
    basis: LatticeBasis
    sites: tuple[Site, ...]
    edges: tuple[EdgeTemplate, ...]
    planar: bool = True

    def __post_init__(self) -> None:
        ids = [s.id for s in self.sites]
        if not ids:
            raise GraphSpecError("graph has no sites")
        if len(set(ids)) != len(ids):
            raise GraphSpecError("duplicate site id")
        for a in range(len(self.sites)):
            for b in range(a + 1, len(self.sites)):
                t = self.basis.to_lattice(_sub(self.sites[a].pos, self.sites[b].pos))
                if t[0].denominator == 1 and t[1].denominator == 1:
                    raise GraphSpecError(
                        f"sites {ids[a]!r} and {ids[b]!r} coincide modulo the lattice"
                    )
        known = set(ids)
        seen: dict[tuple, Fraction] = {}
        for e in self.edges:
            if e.u not in known or e.v not in known:
                raise GraphSpecError(f"edge references unknown site: {e}")
            if e.conductance <= 0:
                raise GraphSpecError("nonpositive conductance")
            if e.u == e.v and tuple(e.offset) == (0, 0):
                raise GraphSpecError("self-loop template with zero offset")
            key = (e.u, e.v, tuple(e.offset))
            rev = (e.v, e.u, (-e.offset[0], -e.offset[1]))
            for k in (key, rev):
                if k in seen:
                    if seen[k] != e.conductance:
                        raise GraphSpecError("asymmetric conductance on reversed edge")
                    raise GraphSpecError(f"duplicate edge template: {e}")
            seen[key] = e.conductance
        for lid in range(len(self.sites)):
            if len(self.neighbor_table[lid]) > MAX_DEGREE:
                raise GraphSpecError(f"degree exceeds cap of {MAX_DEGREE}")
        if self.planar:
            for lid in range(len(self.sites)):
                dirs = sorted(
                    (self.displacement(lid, d, w) for d, w, _c, _e in self.neighbor_table[lid]),
                    key=angle_key,
                )
                for a, b in zip(dirs, dirs[1:]):
                    if _angle_cmp(a, b) == 0:
                        raise GraphSpecError(
                            f"collinear overlapping edges at site {self.sites[lid].id!r}"
                        )

    @cached_property
    def site_index(self) -> dict[Hashable, int]:
        return {s.id: i for i, s in enumerate(self.sites)}

    @cached_property
    def neighbor_table(self) -> tuple[tuple[tuple[tuple[int, int], int, Fraction, tuple], ...], ...]:
        """Per site index: ``(cell delta, neighbor site index, conductance, edge key)``.

        The edge key ``(template index, sign)`` identifies which template and
        direction produced the entry; a template seen from its ``u`` end has
        sign +1.
        """
        idx = {s.id: i for i, s in enumerate(self.sites)}
        table: list[list] = [[] for _ in self.sites]
        for t, e in enumerate(self.edges):
            u, v = idx[e.u], idx[e.v]
            off = (int(e.offset[0]), int(e.offset[1]))
            table[u].append((off, v, e.conductance, (t, 1)))
            table[v].append(((-off[0], -off[1]), u, e.conductance, (t, -1)))
        return tuple(tuple(r) for r in table)

    def position(self, cell: Sequence[int], lid: int) -> tuple[Fraction, Fraction]:
        p = self.basis.point(cell)
        s = self.sites[lid].pos
        return (p[0] + s[0], p[1] + s[1])

    def displacement(self, lid: int, dcell: Sequence[int], lid2: int) -> tuple[Fraction, Fraction]:
        q = self.position(dcell, lid2)
        p = self.sites[lid].pos
        return (q[0] - p[0], q[1] - p[1])

    def degree(self, lid: int) -> int:
        return len(self.neighbor_table[lid])

    @property
    def max_degree(self) -> int:
        return max(self.degree(i) for i in range(len(self.sites)))

    def ellipticity(self) -> EllipticityBounds:
        cs = [e.conductance for e in self.edges]
        return EllipticityBounds(min(cs), max(cs))

    def origin_key(self) -> tuple[tuple[int, int], int]:
        """The instantiated vertex closest to 0, ties broken on position (x, y)."""
        best = None
        for lid, s in enumerate(self.sites):
            t = self.basis.to_lattice((-s.pos[0], -s.pos[1]))
            i0, j0 = int(t[0]), int(t[1])
            for i in range(i0 - 2, i0 + 3):
                for j in range(j0 - 2, j0 + 3):
                    p = self.position((i, j), lid)
                    cand = (p[0] * p[0] + p[1] * p[1], p, (i, j), lid)
                    if best is None or cand[:2] < best[:2]:
                        best = cand
        return best[2], best[3]

    def with_planar(self, planar: bool) -> "PeriodicGraph":
        return PeriodicGraph(self.basis, self.sites, self.edges, planar)


# ---------------------------------------------------------------------------
# graph-spec documents


def graph_from_dict(doc: Any) -> PeriodicGraph:
    if not isinstance(doc, dict):
        raise GraphSpecError("graph spec must be an object")
    try:
        basis_raw = doc["basis"]
        sites_raw = doc["sites"]
        edges_raw = doc["edges"]
    except KeyError as exc:
        raise GraphSpecError(f"missing field {exc.args[0]!r}") from exc
    planar = doc.get("planar", True)
    if not isinstance(planar, bool):
        raise GraphSpecError("planar must be a boolean")
    try:
        if len(basis_raw) != 2:
            raise GraphSpecError("basis must hold two vectors")
        basis = LatticeBasis(_vec(basis_raw[0]), _vec(basis_raw[1]))
        sites = []
        for s in sites_raw:
            pos = _vec(s["pos"])
            if len(pos) != 2:
                raise GraphSpecError("site position must be a 2-vector")
            sid = s["id"]
            if isinstance(sid, list):
                sid = tuple(sid)
            sites.append(Site(sid, pos))
        edges = []
        for e in edges_raw:
            off = e.get("offset", [0, 0])
            if len(off) != 2 or not all(isinstance(o, int) and not isinstance(o, bool) for o in off):
                raise GraphSpecError("edge offset must be an integer 2-vector")
            edges.append(EdgeTemplate(e["u"], e["v"], (off[0], off[1]), parse_rational(e["conductance"])))
    except GraphSpecError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphSpecError(f"malformed graph spec: {exc}") from exc
    return PeriodicGraph(basis, tuple(sites), tuple(edges), planar)


def load_graph_spec(text: str) -> PeriodicGraph:
    """Parse and validate a graph-spec document (JSON text)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphSpecError(f"malformed graph spec: {exc}") from exc
    return graph_from_dict(doc)


def graph_to_dict(g: PeriodicGraph) -> dict:
    return {
        "basis": [[format_rational(x) for x in g.basis.e1], [format_rational(x) for x in g.basis.e2]],
        "sites": [{"id": s.id, "pos": [format_rational(x) for x in s.pos]} for s in g.sites],
        "edges": [
            {
                "u": e.u,
                "v": e.v,
                "offset": [int(e.offset[0]), int(e.offset[1])],
                "conductance": format_rational(e.conductance),
            }
            for e in g.edges
        ],
        "planar": g.planar,
    }


def dump_graph_spec(g: PeriodicGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# finite instantiations


@dataclass(frozen=True, eq=False)
class FiniteGraph:
    """A finite weighted graph with an embedding and an interior/boundary split.

    Vertices are integers ``0..n-1``; ``cells[i]``/``lids[i]`` recover the
    periodic coordinates.  ``edges`` may contain parallel edges and self-loops
    (quotients produce both).  ``hop`` is the hop distance from ``origin``
    measured inside the graph.
    """

    cells: tuple[tuple[int, ...], ...]
    lids: tuple[int, ...]
    positions: tuple[tuple, ...]
    edges: tuple[tuple[int, int, Any], ...]
    interior: frozenset
    origin: int
    radius: int | None = None
    metric: str = "custom"
    planar: bool = False
    site_ids: tuple = ()
    source: PeriodicGraph | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def n(self) -> int:
        return len(self.cells)

    @cached_property
    def index(self) -> dict[tuple, int]:
        return {(c, l): i for i, (c, l) in enumerate(zip(self.cells, self.lids))}

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, Any], ...], ...]:
        nb: list[list] = [[] for _ in range(self.n)]
        for u, v, c in self.edges:
            nb[u].append((v, c))
            nb[v].append((u, c))
        return tuple(tuple(x) for x in nb)

    @cached_property
    def adjacent(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(w for w, _ in nb if w != v) for v, nb in enumerate(self.neighbors))

    @cached_property
    def boundary(self) -> frozenset:
        return frozenset(range(self.n)) - self.interior

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    @cached_property
    def hop(self) -> tuple[int, ...]:
        """Hop distance from the origin inside this graph (-1 if unreachable)."""
        dist = [-1] * self.n
        dist[self.origin] = 0
        q = deque([self.origin])
        adj = self.adjacent
        while q:
            v = q.popleft()
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return tuple(dist)

    def ball(self, m: int) -> frozenset:
        return frozenset(v for v, d in enumerate(self.hop) if 0 <= d <= m)

    @cached_property
    def float_positions(self):
        import numpy as np

        return np.array([[float(x) for x in p] for p in self.positions], dtype=float)

    def is_connected(self) -> bool:
        return all(d >= 0 for d in self.hop)

    def vertex_label(self, v: int) -> dict:
        sid = self.site_ids[self.lids[v]] if self.site_ids else self.lids[v]
        return {"index": v, "cell": list(self.cells[v]), "site": sid}


def _instantiate(g: PeriodicGraph, keys: list, radius, metric, hop=None) -> FiniteGraph:
    keys = sorted(keys)
    index = {k: i for i, k in enumerate(keys)}
    edges = []
    interior = []
    table = g.neighbor_table
    for i, (cell, lid) in enumerate(keys):
        full = True
        for d, w, c, (t, sign) in table[lid]:
            j = index.get(((cell[0] + d[0], cell[1] + d[1]), w))
            if j is None:
                full = False
            elif sign == 1:
                edges.append((i, j, c))
        if full:
            interior.append(i)
    origin = index[g.origin_key()]
    fg = FiniteGraph(
        cells=tuple(k[0] for k in keys),
        lids=tuple(k[1] for k in keys),
        positions=tuple(g.position(*k) for k in keys),
        edges=tuple(edges),
        interior=frozenset(interior),
        origin=origin,
        radius=radius,
        metric=metric,
        planar=g.planar,
        site_ids=tuple(s.id for s in g.sites),
        source=g,
    )
    return fg


def instantiate_region(g: PeriodicGraph, radius: int, metric: str = "graph-hop") -> FiniteGraph:
    """Instantiate the hop ball ``B_radius``, the sup-norm box of half-width
    ``radius`` (in positions), or the lattice box ``Q_radius`` (all sites of the
    cells within ``radius`` of the origin cell in lattice coordinates)."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    origin = g.origin_key()
    table = g.neighbor_table
    if metric == "graph-hop":
        dist = {origin: 0}
        q = deque([origin])
        while q:
            k = q.popleft()
            dk = dist[k]
            if dk == radius:
                continue
            cell, lid = k
            for d, w, _c, _e in table[lid]:
                nk = ((cell[0] + d[0], cell[1] + d[1]), w)
                if nk not in dist:
                    dist[nk] = dk + 1
                    q.append(nk)
        return _instantiate(g, list(dist), radius, metric)
    if metric == "sup-norm-box":
        r = Fraction(radius)
        d = g.basis.det
        # |lattice coord| <= (|row|_1) * (r + |site|_inf)
        inv_rows = ((g.basis.e2[1] / d, -g.basis.e2[0] / d), (-g.basis.e1[1] / d, g.basis.e1[0] / d))
        smax = max(max(abs(x) for x in s.pos) for s in g.sites)
        bounds = [int((abs(a) + abs(b)) * (r + smax)) + 2 for a, b in inv_rows]
        keys = []
        for i in range(-bounds[0], bounds[0] + 1):
            for j in range(-bounds[1], bounds[1] + 1):
                for lid in range(len(g.sites)):
                    p = g.position((i, j), lid)
                    if abs(p[0]) <= r and abs(p[1]) <= r:
                        keys.append(((i, j), lid))
        return _instantiate(g, keys, radius, metric)
    if metric == "lattice-box":
        (oi, oj), _ = origin
        keys = [
            ((oi + i, oj + j), lid)
            for i in range(-radius, radius + 1)
            for j in range(-radius, radius + 1)
            for lid in range(len(g.sites))
        ]
        return _instantiate(g, keys, radius, metric)
    raise ValueError(f"unknown metric {metric!r}")


def quotient(g: PeriodicGraph, k: int) -> FiniteGraph:
    """The torus graph on k*k copies of the fundamental domain (edges wrapped mod k)."""
    if k < 1:
        raise ValueError("k must be positive")
    keys = sorted(((i, j), lid) for i in range(k) for j in range(k) for lid in range(len(g.sites)))
    index = {key: n for n, key in enumerate(keys)}
    edges = []
    for n, (cell, lid) in enumerate(keys):
        for d, w, c, (_t, sign) in g.neighbor_table[lid]:
            if sign == 1:
                m = index[(((cell[0] + d[0]) % k, (cell[1] + d[1]) % k), w)]
                edges.append((n, m, c))
    ocell, olid = g.origin_key()
    return FiniteGraph(
        cells=tuple(key[0] for key in keys),
        lids=tuple(key[1] for key in keys),
        positions=tuple(g.position(*key) for key in keys),
        edges=tuple(edges),
        interior=frozenset(range(len(keys))),
        origin=index[((ocell[0] % k, ocell[1] % k), olid)],
        radius=None,
        metric="quotient",
        planar=False,
        site_ids=tuple(s.id for s in g.sites),
        source=g,
    )


# ---------------------------------------------------------------------------
# embedding validation


def segments_conflict(a: Vec, b: Vec, c: Vec, d: Vec) -> bool:
    """True when segments ab and cd meet at a point other than a shared endpoint."""

    def orient(p, q, r):
        v = cross(_sub(q, p), _sub(r, p))
        return (v > 0) - (v < 0)

    def on_segment(p, q, r):
        # r collinear with pq; is r within the closed segment?
        return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])

    shared = {a, b} & {c, d}
    if len(shared) == 2:
        return True
    if len(shared) == 1:
        s = shared.pop()
        x = b if a == s else a
        y = d if c == s else c
        u, w = _sub(x, s), _sub(y, s)
        return cross(u, w) == 0 and (u[0] * w[0] + u[1] * w[1]) > 0
    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and on_segment(a, b, c):
        return True
    if o2 == 0 and on_segment(a, b, d):
        return True
    if o3 == 0 and on_segment(c, d, a):
        return True
    if o4 == 0 and on_segment(c, d, b):
        return True
    return False


@dataclass(frozen=True)
class EmbeddingReport:
    planar: bool
    declared: bool
    crossings: tuple
    graph: PeriodicGraph

    @property
    def consistent(self) -> bool:
        return self.planar == self.declared

    def as_dict(self) -> dict:
        return {
            "planar": self.planar,
            "declared_planar": self.declared,
            "consistent": self.consistent,
            "crossing_count": len(self.crossings),
            "crossings": [
                [[[format_rational(x) for x in p] for p in seg] for seg in pair] for pair in self.crossings[:50]
            ],
        }


def validate_embedding(g: PeriodicGraph) -> EmbeddingReport:
    """Look for straight-line edge segments that cross at non-endpoints.

    Segments are taken from a block of fundamental domains around the origin
    cell wide enough to contain every template; only pairs involving an edge
    that touches the central 3x3 block are tested.
    """
    reach = 1 + max((max(abs(e.offset[0]), abs(e.offset[1])) for e in g.edges), default=0)
    segs = []
    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            for e in g.edges:
                u, v = g.site_index[e.u], g.site_index[e.v]
                a = g.position((i, j), u)
                b = g.position((i + e.offset[0], j + e.offset[1]), v)
                central = max(abs(i), abs(j)) <= 1
                segs.append((a, b, central))
    crossings = []
    for x in range(len(segs)):
        a, b, ca = segs[x]
        ax0, ax1 = min(a[0], b[0]), max(a[0], b[0])
        ay0, ay1 = min(a[1], b[1]), max(a[1], b[1])
        for y in range(x + 1, len(segs)):
            c, d, cb = segs[y]
            if not (ca or cb):
                continue
            if max(c[0], d[0]) < ax0 or min(c[0], d[0]) > ax1 or max(c[1], d[1]) < ay0 or min(c[1], d[1]) > ay1:
                continue
            if segments_conflict(a, b, c, d):
                crossings.append(((a, b), (c, d)))
    planar = not crossings
    return EmbeddingReport(planar, g.planar, tuple(crossings), g.with_planar(planar))

