"""Faces, dual graphs and contours of embedded planar graphs.

Faces come from the rotation-system walk: neighbours of each vertex are
sorted counterclockwise by the exact direction of the embedded edge, and the
walk continues from ``u -> v`` along ``v -> w`` where ``w`` is the neighbour
clockwise-adjacent to ``u`` at ``v``.  Bounded faces are then traversed
counterclockwise (face on the left) and the outer face clockwise.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import (
    EdgeTemplate,
    FiniteGraph,
    GraphSpecError,
    PeriodicGraph,
    _angle_cmp,
    angle_key,
)


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    index: int
    cycle: tuple  # directed edges (u, v)
    vertices: frozenset
    is_outer: bool
    area2: Fraction  # twice the signed area

    @property
    def walk(self) -> tuple:
        return tuple(u for u, _ in self.cycle)

    def __len__(self) -> int:
        return len(self.cycle)


@dataclass(frozen=True)
class PlanarMap:
    graph: FiniteGraph
    rotation: tuple  # per vertex: neighbours in ccw order
    faces: tuple
    face_of: dict  # directed edge -> face index
    outer: int

    def faces_at(self, v: int) -> list[int]:
        """Face indices around ``v`` in counterclockwise order (one per incident edge)."""
        return [self.face_of[(v, w)] for w in self.rotation[v]]


@dataclass(frozen=True)
class DualGraph:
    faces: tuple
    edges: tuple  # (face_i, face_j, primal edge (u, v)) one per primal edge
    adjacency: dict  # face -> Counter(face -> multiplicity)
    multigraph: bool

    def neighbors(self, f: int) -> Iterable[int]:
        return self.adjacency.get(f, {}).keys()


@dataclass(frozen=True)
class Contour:
    walk: tuple  # v_0 .. v_{k-1}; closes back to v_0
    enclosed: frozenset  # D: vertices strictly inside
    faces: frozenset  # filled face set the walk bounds

    @property
    def length(self) -> int:
        return len(self.walk)

    @property
    def closed_walk(self) -> tuple:
        return self.walk + self.walk[:1]

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.walk)


def _shoelace(positions, walk) -> Fraction:
    s = Fraction(0)
    k = len(walk)
    for i in range(k):
        a = positions[walk[i]]
        b = positions[walk[(i + 1) % k]]
        s += a[0] * b[1] - a[1] * b[0]
    return s


def planar_map(fg: FiniteGraph) -> PlanarMap:
    """Rotation system and faces of ``fg`` (cached on the graph)."""
    cached = fg._cache.get("planar_map")
    if cached is not None:
        return cached
    if not fg.planar:
        raise TopologyError("planarity required: face structure is unavailable on graphs with crossing edges")
    if not fg.is_connected():
        raise TopologyError("face enumeration requires a connected region")
    pos = fg.positions
    rotation = []
    for v in range(fg.n):
        nbrs = [w for w, _ in fg.neighbors[v] if w != v]
        if len(set(nbrs)) != len(nbrs):
            raise TopologyError(f"parallel edges at vertex {v}")
        dirs = {w: (pos[w][0] - pos[v][0], pos[w][1] - pos[v][1]) for w in nbrs}
        order = sorted(nbrs, key=lambda w: angle_key(dirs[w]))
        for a, b in zip(order, order[1:]):
            if _angle_cmp(dirs[a], dirs[b]) == 0:
                raise TopologyError(f"collinear overlapping edges at vertex {v}")
        rotation.append(tuple(order))
    where = [{w: i for i, w in enumerate(r)} for r in rotation]
    face_of: dict = {}
    cycles = []
    for u in range(fg.n):
        for v in rotation[u]:
            if (u, v) in face_of:
                continue
            fid = len(cycles)
            cyc = []
            a, b = u, v
            while (a, b) not in face_of:
                face_of[(a, b)] = fid
                cyc.append((a, b))
                r = rotation[b]
                c = r[(where[b][a] - 1) % len(r)]
                a, b = b, c
            cycles.append(tuple(cyc))
    if not cycles:
        faces = (Face(0, (), frozenset(range(fg.n)), True, Fraction(0)),)
        pm = PlanarMap(fg, tuple(rotation), faces, face_of, 0)
        fg._cache["planar_map"] = pm
        return pm
    areas = [_shoelace(pos, [e[0] for e in c]) for c in cycles]
    outer = min(range(len(cycles)), key=lambda i: (areas[i], i))
    faces = tuple(
        Face(i, c, frozenset(e[0] for e in c), i == outer, areas[i]) for i, c in enumerate(cycles)
    )
    pm = PlanarMap(fg, tuple(rotation), faces, face_of, outer)
    fg._cache["planar_map"] = pm
    return pm


def enumerate_faces(fg: FiniteGraph) -> list[Face]:
    return list(planar_map(fg).faces)


def dual_graph(fg: FiniteGraph) -> DualGraph:
    cached = fg._cache.get("dual")
    if cached is not None:
        return cached
    pm = planar_map(fg)
    edges = []
    adj: dict = {f.index: Counter() for f in pm.faces}
    for u, v, _c in fg.edges:
        if u == v:
            continue
        a, b = pm.face_of[(u, v)], pm.face_of[(v, u)]
        edges.append((a, b, (u, v)))
        adj[a][b] += 1
        if a != b:
            adj[b][a] += 1
    multi = any(m >= 2 for a, cnt in adj.items() for b, m in cnt.items() if a != b)
    dg = DualGraph(pm.faces, tuple(edges), adj, multi)
    fg._cache["dual"] = dg
    return dg


def boundary_faces(fg: FiniteGraph, m: int) -> set[Face]:
    """Bounded faces with incident vertices both inside and outside ``B_m``."""
    if fg.radius is None or m >= fg.radius:
        raise TopologyError(f"boundary_faces needs m < region radius (got m={m}, radius={fg.radius})")
    pm = planar_map(fg)
    hop = fg.hop
    out = set()
    for f in pm.faces:
        if f.is_outer:
            continue
        ds = [hop[v] for v in f.vertices]
        if min(ds) <= m < max(ds):
            out.add(f)
    return out


def _dual_connected(dg: DualGraph, faces: set) -> bool:
    start = next(iter(faces))
    seen = {start}
    q = deque([start])
    while q:
        f = q.popleft()
        for g in dg.neighbors(f):
            if g in faces and g not in seen:
                seen.add(g)
                q.append(g)
    return len(seen) == len(faces)


def fill_holes(fg: FiniteGraph, K: Iterable) -> frozenset:
    """``K`` plus every dual component of its complement that misses the outer face."""
    pm = planar_map(fg)
    dg = dual_graph(fg)
    kset = {_face_id(f) for f in K}
    reach = {pm.outer}
    q = deque([pm.outer])
    while q:
        f = q.popleft()
        for g in dg.neighbors(f):
            if g not in kset and g not in reach:
                reach.add(g)
                q.append(g)
    return frozenset(f.index for f in pm.faces if f.index not in reach)


def _face_id(f) -> int:
    return f.index if isinstance(f, Face) else int(f)


def boundary_walks(fg: FiniteGraph, faces: frozenset) -> list[tuple]:
    """Closed boundary walks of a face union, each with the union on its left."""
    pm = planar_map(fg)
    where = [{w: i for i, w in enumerate(r)} for r in pm.rotation]
    fo = pm.face_of
    bd = {e for e, f in fo.items() if f in faces and fo[(e[1], e[0])] not in faces}
    walks = []
    used = set()
    for start in sorted(bd):
        if start in used:
            continue
        walk = []
        e = start
        while e not in used:
            used.add(e)
            walk.append(e[0])
            u, v = e
            r = pm.rotation[v]
            i = where[v][u]
            # rotate clockwise at v until the edge back into v leaves the union
            for step in range(1, len(r) + 1):
                w = r[(i - step) % len(r)]
                if fo[(w, v)] not in faces:
                    break
            e = (v, w)
        walks.append(tuple(walk))
    return walks


def outer_contour(fg: FiniteGraph, K: Iterable) -> Contour:
    """Counterclockwise boundary walk of ``K`` with its dual holes filled."""
    pm = planar_map(fg)
    dg = dual_graph(fg)
    kset = {_face_id(f) for f in K}
    if not kset:
        raise TopologyError("face set is empty")
    if pm.outer in kset:
        raise TopologyError("face set contains the outer face")
    if not _dual_connected(dg, kset):
        raise TopologyError("face set is not connected in the dual graph")
    filled = fill_holes(fg, kset)
    walks = boundary_walks(fg, filled)
    pos = fg.positions
    walk = max(walks, key=lambda w: (_shoelace(pos, w), -min(w)))
    on = set(walk)
    inside = set()
    for fid in filled:
        inside |= pm.faces[fid].vertices
    return Contour(tuple(walk), frozenset(inside - on), filled)


def point_in_polygon(p, poly) -> bool:
    """Nonzero winding number test (exact); points on the polygon count as outside."""
    wn = 0
    k = len(poly)
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        c = (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])
        if c == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            return False
        if a[1] <= p[1]:
            if b[1] > p[1] and c > 0:
                wn += 1
        elif b[1] <= p[1] and c < 0:
            wn -= 1
    return wn != 0


# ---------------------------------------------------------------------------
# two-edge pendant reduction on the periodic graph


@dataclass(frozen=True)
class Replacement:
    removed_sites: tuple
    a: tuple  # (cell, site id) external endpoint of the first attaching edge
    b: tuple
    conductance: Fraction | None  # None: both attachments hit one vertex, K is dropped


def _edge_id(cell, entry):
    d, _w, _c, (t, sign) = entry
    if sign == 1:
        return (t, cell)
    return (t, (cell[0] + d[0], cell[1] + d[1]))


def _find_pendant(g: PeriodicGraph):
    table = g.neighbor_table
    cap = len(g.sites)

    def incident(key):
        cell, lid = key
        for entry in table[lid]:
            d, w = entry[0], entry[1]
            yield _edge_id(cell, entry), ((cell[0] + d[0], cell[1] + d[1]), w), entry[2]

    for lid in range(len(g.sites)):
        x = ((0, 0), lid)
        near = {x: 0}
        q = deque([x])
        while q:
            k = q.popleft()
            if near[k] >= cap:
                continue
            for _eid, y, _c in incident(k):
                if y not in near:
                    near[y] = near[k] + 1
                    q.append(y)
        cand2 = sorted({eid for y in near for eid, _, _ in incident(y)})
        for e1, a, _c1 in sorted(incident(x)):
            if a == x:
                continue
            for e2 in cand2:
                if e2 == e1:
                    continue
                banned = {e1, e2}
                comp = {x}
                q = deque([x])
                finite = True
                while q and finite:
                    k = q.popleft()
                    for eid, y, _c in incident(k):
                        if eid in banned or y in comp:
                            continue
                        comp.add(y)
                        if len(comp) > cap:
                            finite = False
                            break
                        q.append(y)
                if not finite or a in comp:
                    continue
                leaving = [(eid, y) for k in comp for eid, y, _c in incident(k) if y not in comp]
                if len(leaving) != 2 or {eid for eid, _ in leaving} != banned:
                    continue
                if len({k[1] for k in comp}) != len(comp):
                    continue
                b = next(y for eid, y in leaving if eid == e2)
                return comp, e1, e2, a, b
    return None


def _pendant_conductance(g: PeriodicGraph, comp, a, b) -> Fraction:
    from .harmonic import effective_conductance

    keys = sorted(comp | {a, b})
    idx = {k: i for i, k in enumerate(keys)}
    edges = []
    table = g.neighbor_table
    for k in comp:
        cell, lid = k
        for entry in table[lid]:
            d, w, c, (t, sign) = entry
            y = ((cell[0] + d[0], cell[1] + d[1]), w)
            if y in comp:
                if sign == 1 or (y == k):
                    edges.append((idx[k], idx[y], c))
            else:
                edges.append((idx[k], idx[y], c))
    fg = FiniteGraph(
        cells=tuple(k[0] for k in keys),
        lids=tuple(k[1] for k in keys),
        positions=tuple(g.position(*k) for k in keys),
        edges=tuple(edges),
        interior=frozenset(),
        origin=0,
    )
    return Fraction(effective_conductance(fg, idx[a], idx[b]))


def reduction_steps(g: PeriodicGraph) -> tuple[PeriodicGraph, list[Replacement]]:
    """Repeatedly replace two-edge pendant components by their effective edge."""
    steps = []
    while True:
        found = _find_pendant(g)
        if found is None:
            return g, steps
        comp, _e1, _e2, a, b = found
        gone = {lid for _cell, lid in comp}
        ceff = _pendant_conductance(g, comp, a, b) if a != b else None
        ua, ub = g.sites[a[1]].id, g.sites[b[1]].id
        step = Replacement(
            tuple(sorted((g.sites[i].id for i in gone), key=repr)), (a[0], ua), (b[0], ub), ceff
        )
        sites = tuple(s for i, s in enumerate(g.sites) if i not in gone)
        edges = [
            e for e in g.edges if g.site_index[e.u] not in gone and g.site_index[e.v] not in gone
        ]
        if ceff is not None:
            off = (b[0][0] - a[0][0], b[0][1] - a[0][1])
            for i, e in enumerate(edges):
                key = (e.u, e.v, tuple(e.offset))
                if key == (ua, ub, off) or key == (ub, ua, (-off[0], -off[1])):
                    edges[i] = EdgeTemplate(e.u, e.v, e.offset, e.conductance + ceff)
                    break
            else:
                edges.append(EdgeTemplate(ua, ub, off, ceff))
        try:
            g = PeriodicGraph(g.basis, sites, tuple(edges), g.planar)
        except GraphSpecError as exc:
            raise TopologyError(f"reduction produced an invalid graph: {exc}") from exc
        steps.append(step)


def reduce_to_simple_dual(g: PeriodicGraph) -> PeriodicGraph:
    return reduction_steps(g)[0]


def removed_fraction(g: PeriodicGraph) -> Fraction:
    """Fraction of sites per period removed by :func:`reduce_to_simple_dual`."""
    reduced = reduce_to_simple_dual(g)
    return Fraction(len(g.sites) - len(reduced.sites), len(g.sites))
