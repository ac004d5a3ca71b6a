"""Zero/plus/minus level-set instances on a contour, and the counting argument.

An instance is a closed walk ``gamma`` with enclosed vertex set ``D`` and
disjoint sets ``Z`` (zeros on gamma), ``P`` and ``M`` (positive and negative
vertices of ``gamma + D``), plus for every zero a witness path running along
one face to a vertex adjacent to both signs.  :func:`run_counting` replays
the ``S_j`` construction over such an instance and checks the bound
``|Z| <= alpha(D) |gamma|``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .graph import FiniteGraph
from .harmonic import ScalarField, is_harmonic, zero_tolerance
from .topology import (
    Contour,
    TopologyError,
    boundary_faces,
    dual_graph,
    outer_contour,
    planar_map,
    point_in_polygon,
)
from .unionfind import induced_components


class LevelSetError(ValueError):
    pass


def alpha_bound(max_degree: int) -> Fraction:
    """``4D / (4D + 1)``: the density of zeros on a contour that the counting allows."""
    if max_degree < 1:
        raise ValueError("max_degree must be positive")
    return Fraction(4 * max_degree, 4 * max_degree + 1)


def partition_signs(fg: FiniteGraph, f: ScalarField, region: Iterable[int], threshold=0):
    """Split ``region`` into ``|f| <= t``, ``f > t`` and ``f < -t``."""
    Z, P, M = set(), set(), set()
    for v in region:
        x = f[v]
        if x > threshold:
            P.add(v)
        elif x < -threshold:
            M.add(v)
        else:
            Z.add(v)
    return frozenset(Z), frozenset(P), frozenset(M)


@dataclass(frozen=True)
class Witness:
    beta: tuple  # z = w_0, ..., w_l
    face: int  # index of the face the path runs along
    p: int
    m: int


@dataclass(frozen=True)
class LemmaInstance:
    graph: FiniteGraph
    contour: Contour
    Z: frozenset
    P: frozenset
    M: frozenset
    witnesses: dict
    discarded: frozenset = frozenset()
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def gamma(self) -> tuple:
        return self.contour.walk


def find_witness(fg: FiniteGraph, z: int, P: frozenset, M: frozenset) -> Witness | None:
    """Shortest walk along a single face at ``z``, avoiding ``P`` and ``M``, that
    ends next to both a ``P`` and an ``M`` vertex.  Ties go to the smaller
    face index, then to the smaller ``(p, m)`` vertex ids."""
    pm = planar_map(fg)
    adj = fg.adjacent
    best = None
    for fid in sorted(set(pm.faces_at(z))):
        face = pm.faces[fid]
        if face.is_outer:
            continue
        walk = face.walk
        k = len(walk)
        for start in (i for i, v in enumerate(walk) if v == z):
            for direction in (1, -1):
                path = []
                for step in range(k):
                    w = walk[(start + direction * step) % k]
                    if w in P or w in M:
                        break
                    path.append(w)
                    ps = adj[w] & P
                    ms = adj[w] & M
                    if ps and ms:
                        cand = (len(path), fid, min(ps), min(ms), tuple(path))
                        if best is None or cand < best:
                            best = cand
                        break
    if best is None:
        return None
    return Witness(best[4], best[1], best[2], best[3])


def _check_harmonic(f: ScalarField, tol) -> None:
    if tol is None:
        tol = 0 if f.exact else 1e-9 * max(1.0, float(f.max_abs()))
    rep = is_harmonic(f, tol)
    if not rep.certified:
        raise LevelSetError(f"f not certified harmonic (max residual {rep.max_residual})")


def extract_lemma_instance(
    fg: FiniteGraph,
    f: ScalarField,
    m: int,
    x0: int | None = None,
    threshold=0,
    *,
    harmonic_tol=None,
) -> LemmaInstance:
    """Build the contour instance around a nonzero vertex ``x0`` of ``B_m``.

    ``K`` is the dual component, among bounded faces meeting ``B_m`` that touch
    a vertex with ``|f| > threshold``, containing the faces at ``x0``.  The
    contour is the outer boundary of ``K`` with holes filled; zeros are the
    contour vertices not adjacent to a face of the shell ``dB_m``.  Zeros with
    no witness path (possible only for ``threshold > 0``) are moved to
    ``discarded``.
    """
    if not fg.planar:
        raise LevelSetError("planarity required")
    if fg.radius is None or not (0 <= m < fg.radius):
        raise LevelSetError(f"region of radius {fg.radius} does not strictly contain B_{m}")
    _check_harmonic(f, harmonic_tol)
    if not f.exact:
        threshold = max(threshold, zero_tolerance(f))
    pm = planar_map(fg)
    dg = dual_graph(fg)
    hop = fg.hop
    ball = fg.ball(m)
    big = lambda v: abs(f[v]) > threshold  # noqa: E731

    if x0 is None:
        cands = sorted((hop[v], v) for v in ball if big(v))
        if not cands:
            raise LevelSetError("no nonzero vertex in B_m")
        x0 = cands[0][1]
    elif x0 not in ball or not big(x0):
        raise LevelSetError("x0 must be a vertex of B_m with |f(x0)| > threshold")

    considered = [fc for fc in pm.faces if not fc.is_outer and fc.vertices & ball]
    for fc in considered:
        if not fc.vertices <= fg.interior:
            raise LevelSetError(f"region too small: a face meeting B_{m} reaches the region boundary")
    N = {fc.index for fc in considered if any(big(v) for v in fc.vertices)}
    start = [fid for fid in pm.faces_at(x0) if fid in N]
    K = set(start)
    q = deque(start)
    while q:
        a = q.popleft()
        for b in dg.neighbors(a):
            if b in N and b not in K:
                K.add(b)
                q.append(b)
    contour = outer_contour(fg, K)
    for fid in contour.faces:
        if not pm.faces[fid].vertices <= fg.interior:
            raise LevelSetError("region too small: the filled contour reaches the region boundary")
    shell_adjacent = set()
    for fc in boundary_faces(fg, m):
        shell_adjacent |= fc.vertices
    region = contour.vertex_set | contour.enclosed
    _Zr, P, M = partition_signs(fg, f, region, threshold)
    zeros = sorted({v for v in contour.walk if v not in shell_adjacent})
    loud = [v for v in zeros if big(v)]
    if loud:  # pragma: no cover - such a vertex would have pulled its faces into K
        raise RuntimeError(f"internal defect: contour vertex {loud[0]} off the shell is not a zero")
    witnesses = {}
    dropped = set()
    for z in zeros:
        w = find_witness(fg, z, P, M)
        if w is None:
            dropped.add(z)
        else:
            witnesses[z] = w
    Z = frozenset(witnesses)
    return LemmaInstance(
        fg,
        contour,
        Z,
        P,
        M,
        witnesses,
        frozenset(dropped),
        {"m": m, "x0": x0, "threshold": threshold, "K_faces": len(K)},
    )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisReport:
    violations: tuple  # (tag, message)

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_tag(self, tag: str) -> list:
        return [v for v in self.violations if v[0] == tag]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": [{"hypothesis": t, "detail": m} for t, m in self.violations]}


def enclosed_vertices(fg: FiniteGraph, walk: tuple) -> frozenset:
    """Vertices off the walk lying in components of ``G - walk`` inside the walk polygon."""
    on = set(walk)
    poly = [fg.positions[v] for v in walk]
    seen = set()
    inside = set()
    for s in range(fg.n):
        if s in on or s in seen:
            continue
        comp = [s]
        seen.add(s)
        q = deque([s])
        while q:
            v = q.popleft()
            for w in fg.adjacent[v]:
                if w not in on and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    q.append(w)
        if point_in_polygon(fg.positions[s], poly):
            inside.update(comp)
    return frozenset(inside)


def _runs_along_face(face_walk: tuple, beta: tuple) -> bool:
    k = len(face_walk)
    n = len(beta)
    if n > k:
        return False
    for start in range(k):
        if face_walk[start] != beta[0]:
            continue
        for d in (1, -1):
            if all(face_walk[(start + d * i) % k] == beta[i] for i in range(n)):
                return True
    return False


def verify_hypotheses(inst: LemmaInstance) -> HypothesisReport:
    """Re-check every hypothesis and invariant of ``inst`` from scratch."""
    fg = inst.graph
    adj = fg.adjacent
    out: list = []
    gamma = inst.contour.walk
    gset = set(gamma)
    Z, P, M = inst.Z, inst.P, inst.M

    k = len(gamma)
    if k < 3:
        out.append(("contour", f"walk length {k} < 3"))
    for i in range(k):
        a, b = gamma[i], gamma[(i + 1) % k]
        if b not in adj[a]:
            out.append(("contour", f"walk step {a}->{b} is not an edge"))
    D = enclosed_vertices(fg, gamma)
    if D != inst.contour.enclosed:
        out.append(("contour", f"enclosed set mismatch ({len(D)} vs {len(inst.contour.enclosed)})"))

    for name, A, B in (("Z/P", Z, P), ("Z/M", Z, M), ("P/M", P, M)):
        both = A & B
        if both:
            out.append(("disjoint", f"{name} overlap at {sorted(both)[:5]}"))

    for z in sorted(Z - gset):
        out.append(("1", f"zero {z} not on the contour"))

    region = gset | D
    for name, S in (("P", P), ("M", M)):
        for v in sorted(S - region):
            out.append(("2", f"{name} vertex {v} outside the contour and its interior"))

    pm = planar_map(fg)
    pmset = P | M
    for z in sorted(Z):
        w = inst.witnesses.get(z)
        if w is None:
            out.append(("3", f"zero {z} has no witness"))
            continue
        beta = tuple(w.beta)
        if not beta or beta[0] != z:
            out.append(("3", f"witness path of {z} does not start at it"))
            continue
        for a, b in zip(beta, beta[1:]):
            if b not in adj[a]:
                out.append(("3", f"witness path of {z}: {a}->{b} not an edge"))
        hit = [v for v in beta if v in pmset]
        if hit:
            out.append(("3", f"witness path of {z} meets P or M at {hit}"))
        if not (0 <= w.face < len(pm.faces)) or pm.faces[w.face].is_outer or z not in pm.faces[w.face].vertices:
            out.append(("3", f"witness path of {z}: face {w.face} is not a bounded face at {z}"))
        elif not _runs_along_face(pm.faces[w.face].walk, beta):
            out.append(("3", f"witness path of {z} does not run along face {w.face}"))
        if w.p not in P:
            out.append(("3", f"p({z}) = {w.p} not in P"))
        if w.m not in M:
            out.append(("3", f"m({z}) = {w.m} not in M"))
        end = beta[-1]
        if w.p not in adj[end] or w.m not in adj[end]:
            out.append(("3", f"path end {end} of {z} is not adjacent to both p and m"))

    good = gset - Z
    for name, S in (("P", P), ("M", M)):
        uf = induced_components(S, adj)
        for root, members in sorted(uf.groups().items()):
            if not any(v in good for v in members):
                out.append(("4", f"{name} component of {sorted(members)[:5]} misses gamma minus Z"))
    return HypothesisReport(tuple(out))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountingReport:
    Z_prime: tuple
    S_final: frozenset
    alpha: Fraction
    bound_satisfied: bool
    trace: tuple  # case tag per step
    size_Z: int
    size_gamma: int
    max_degree: int
    density_ratio: Fraction | None  # |Z'| / |Z|
    half_ok: bool  # |S| >= |Z'| / 2
    density_ok: bool  # |Z'| >= |Z| / (2 D)
    disjointness_violations: tuple  # steps that re-added a vertex already in S
    prev_P: dict
    prev_M: dict

    def as_dict(self) -> dict:
        return {
            "Z": self.size_Z,
            "gamma": self.size_gamma,
            "Z_prime": len(self.Z_prime),
            "S_final": len(self.S_final),
            "alpha": str(self.alpha),
            "bound_satisfied": self.bound_satisfied,
            "max_degree": self.max_degree,
            "density_ratio": None if self.density_ratio is None else str(self.density_ratio),
            "half_ok": self.half_ok,
            "density_ok": self.density_ok,
            "disjointness_violations": list(self.disjointness_violations),
            "trace": list(self.trace),
        }


def _graph_max_degree(fg: FiniteGraph) -> int:
    if fg.source is not None:
        return fg.source.max_degree
    return fg.max_degree


def run_counting(inst: LemmaInstance, max_degree: int | None = None) -> CountingReport:
    """Replay the ``S_j`` construction and check ``|Z| <= alpha |gamma|``."""
    rep = verify_hypotheses(inst)
    if not rep.ok:
        raise LevelSetError(f"hypotheses fail: {rep.violations[:3]}")
    fg = inst.graph
    D = max_degree if max_degree is not None else _graph_max_degree(fg)
    alpha = alpha_bound(D)
    gamma = inst.contour.walk
    k = len(gamma)
    first = {}
    for i, v in enumerate(gamma):
        first.setdefault(v, i)

    ufP = induced_components(inst.P, fg.adjacent)
    ufM = induced_components(inst.M, fg.adjacent)

    def prev(i: int, target, S, uf):
        root = uf.find(target)
        for j in range(1, k + 1):
            v = gamma[(i - j) % k]
            if v in S and uf.find(v) == root:
                return v
        raise LevelSetError(f"component of {target} never meets the contour")

    zeros = sorted(inst.Z, key=lambda z: first[z])
    prevP = {z: prev(first[z], inst.witnesses[z].p, inst.P, ufP) for z in zeros}
    prevM = {z: prev(first[z], inst.witnesses[z].m, inst.M, ufM) for z in zeros}

    used_p, used_m, Zp = set(), set(), []
    for z in zeros:
        w = inst.witnesses[z]
        if w.p not in used_p and w.m not in used_m:
            Zp.append(z)
            used_p.add(w.p)
            used_m.add(w.m)

    S: set = set()
    trace = []
    clashes = []
    for j, z in enumerate(Zp):
        pp = prevP[z]
        if pp not in S:
            S.add(pp)
            trace.append(1)
            continue
        kk = next(i for i in range(j) if prevP[Zp[i]] == pp)
        if kk == j - 1:
            trace.append(2)
            continue
        add = prevM[Zp[j - 1]]
        if add in S:
            clashes.append(j)
        S.add(add)
        trace.append(3)

    nz = len(inst.Z)
    return CountingReport(
        Z_prime=tuple(Zp),
        S_final=frozenset(S),
        alpha=alpha,
        bound_satisfied=nz <= alpha * k,
        trace=tuple(trace),
        size_Z=nz,
        size_gamma=k,
        max_degree=D,
        density_ratio=Fraction(len(Zp), nz) if nz else None,
        half_ok=2 * len(S) >= len(Zp),
        density_ok=2 * D * len(Zp) >= nz,
        disjointness_violations=tuple(clashes),
        prev_P=prevP,
        prev_M=prevM,
    )


def pinwheel_instance(fg: FiniteGraph | None = None) -> LemmaInstance:
    """Hand-built instance: the 12-cycle around a 3x3 block of unit squares on
    ``Z^2`` with two positive and two negative spokes alternating around it;
    the other eight contour vertices are zeros."""
    from .graph import instantiate_region
    from .lattices import square_lattice

    if fg is None:
        fg = instantiate_region(square_lattice(), 2, "sup-norm-box")
    by_pos = {tuple(int(c) for c in fg.positions[v]): v for v in range(fg.n)}
    pm = planar_map(fg)
    block = {(x, y) for x in range(-1, 2) for y in range(-1, 2)}
    K = set()
    for fc in pm.faces:
        if fc.is_outer:
            continue
        lo = tuple(min(int(fg.positions[v][i]) for v in fc.vertices) for i in (0, 1))
        if lo in block and len(fc) == 4:
            K.add(fc.index)
    contour = outer_contour(fg, K)
    vid = lambda x, y: by_pos[(x - 1, y - 1)]  # noqa: E731  (grid [0,3]^2 shifted to the box)
    P = frozenset({vid(1, 0), vid(1, 1), vid(2, 3), vid(2, 2)})
    M = frozenset({vid(3, 1), vid(2, 1), vid(0, 2), vid(1, 2)})
    zeros = sorted(set(contour.walk) - P - M)
    witnesses = {}
    for z in zeros:
        w = find_witness(fg, z, P, M)
        if w is None:  # pragma: no cover - fixed geometry
            raise RuntimeError(f"pinwheel zero {z} has no witness")
        witnesses[z] = w
    return LemmaInstance(fg, contour, frozenset(witnesses), P, M, witnesses, frozenset(), {"name": "pinwheel"})
