import dataclasses
from collections import deque
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmlab.gallery import crossing_lattice
from harmlab.graph import instantiate_region
from harmlab.harmonic import ScalarField
from harmlab.lattices import square_lattice
from harmlab.levelset import (
    LevelSetError,
    alpha_bound,
    extract_lemma_instance,
    find_witness,
    partition_signs,
    pinwheel_instance,
    run_counting,
    verify_hypotheses,
)
from harmlab.samples import random_separable
from harmlab.topology import planar_map


def components(S, adj):
    comp = {}
    for s in sorted(S):
        if s in comp:
            continue
        comp[s] = s
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w in S and w not in comp:
                    comp[w] = s
                    q.append(w)
    return comp


def replay(inst):
    """Independent replay of the S_j construction: returns (Z', trace, |S|)."""
    g = inst.gamma
    k = len(g)
    adj = inst.graph.adjacent
    cP, cM = components(inst.P, adj), components(inst.M, adj)
    pos = {}
    for i, v in enumerate(g):
        pos.setdefault(v, i)

    def back(i, x, comp):
        for j in range(1, k + 1):
            v = g[(i - j) % k]
            if comp.get(v) == comp[x]:
                return v

    order = sorted(inst.Z, key=pos.get)
    zp, seen_p, seen_m = [], set(), set()
    for z in order:
        w = inst.witnesses[z]
        if w.p in seen_p or w.m in seen_m:
            continue
        zp.append(z)
        seen_p.add(w.p)
        seen_m.add(w.m)
    pp = [back(pos[z], inst.witnesses[z].p, cP) for z in zp]
    pmv = [back(pos[z], inst.witnesses[z].m, cM) for z in zp]
    S, trace = set(), []
    for j in range(len(zp)):
        if pp[j] not in S:
            S.add(pp[j])
            trace.append(1)
        elif pp.index(pp[j]) == j - 1:
            trace.append(2)
        else:
            S.add(pmv[j - 1])
            trace.append(3)
    return tuple(zp), tuple(trace), len(S)


@pytest.fixture(scope="module")
def box11():
    return instantiate_region(square_lattice(), 11)


def quantile_instance(fg, seed, q, m=8):
    f = random_separable(fg, seed)
    vals = sorted(abs(f[v]) for v in fg.ball(m) if f[v] != 0)
    return extract_lemma_instance(fg, f, m, threshold=vals[int(q * len(vals))])


def test_alpha():
    assert alpha_bound(4) == F(16, 17)
    assert alpha_bound(3) == F(12, 13)
    with pytest.raises(ValueError):
        alpha_bound(0)


def test_partition_brute_force(box11):
    f = random_separable(box11, 3)
    region = list(range(box11.n))
    for t in (0, 2, 10):
        Z, P, M = partition_signs(box11, f, region, t)
        assert Z | P | M == set(region)
        for v in region:
            x = f[v]
            assert (v in P) == (x > t) and (v in M) == (x < -t) and (v in Z) == (abs(x) <= t)


class TestExtract:
    def test_linear_field(self):
        fg = instantiate_region(square_lattice(), 20)
        f = ScalarField.from_function(fg, lambda p: p[0])
        inst = extract_lemma_instance(fg, f, 16)
        assert verify_hypotheses(inst).ok
        rep = run_counting(inst)
        assert rep.bound_satisfied and rep.size_Z == 0 and rep.size_gamma == 136

    def test_planarity_required(self):
        fg = instantiate_region(crossing_lattice(1, 2, 3, F(1, 6)), 6)
        f = ScalarField.zeros(fg)
        with pytest.raises(LevelSetError, match="planarity required"):
            extract_lemma_instance(fg, f, 2)

    def test_zero_field(self, box11):
        with pytest.raises(LevelSetError, match="no nonzero vertex"):
            extract_lemma_instance(box11, ScalarField.zeros(box11), 4)

    def test_not_harmonic(self, box11):
        f = ScalarField.from_function(box11, lambda p: p[0] * p[0])
        with pytest.raises(LevelSetError, match="not certified harmonic"):
            extract_lemma_instance(box11, f, 4)

    def test_region_must_contain_ball(self, box11):
        f = ScalarField.from_function(box11, lambda p: p[0])
        with pytest.raises(LevelSetError, match="strictly contain"):
            extract_lemma_instance(box11, f, 11)
        with pytest.raises(LevelSetError, match="region too small"):
            extract_lemma_instance(box11, f, 10)

    def test_bad_x0(self, box11):
        f = ScalarField.from_function(box11, lambda p: p[0])
        with pytest.raises(LevelSetError, match="x0"):
            extract_lemma_instance(box11, f, 4, x0=box11.origin)

    @pytest.mark.parametrize("seed,q", [(0, 0.3), (4, 0.3), (7, 0.5), (2, 0.5)])
    def test_thresholded_separable_nonvacuous(self, box11, seed, q):
        inst = quantile_instance(box11, seed, q)
        assert inst.Z
        assert verify_hypotheses(inst).ok
        rep = run_counting(inst)
        assert rep.bound_satisfied and rep.half_ok and rep.density_ok
        assert not rep.disjointness_violations
        assert replay(inst) == (rep.Z_prime, rep.trace, len(rep.S_final))

    def test_discarded_zeros_lack_witness(self, box11):
        inst = quantile_instance(box11, 4, 0.5)
        assert inst.discarded and not inst.Z
        for z in inst.discarded:
            assert find_witness(inst.graph, z, inst.P, inst.M) is None


class TestPinwheel:
    def test_shape(self):
        inst = pinwheel_instance()
        assert len(inst.gamma) == 12 and len(inst.contour.enclosed) == 4
        assert len(inst.Z) == 8 and not inst.discarded
        assert verify_hypotheses(inst).ok

    def test_counting(self):
        inst = pinwheel_instance()
        rep = run_counting(inst)
        assert len(rep.Z_prime) == 4 and len(rep.S_final) == 2
        assert rep.trace == (1, 2, 1, 2)
        assert replay(inst) == (rep.Z_prime, rep.trace, 2)
        assert rep.bound_satisfied and rep.alpha == F(16, 17)

    def test_witness_paths_run_along_faces(self):
        inst = pinwheel_instance()
        pm = planar_map(inst.graph)
        for z, w in inst.witnesses.items():
            assert w.beta[0] == z
            assert set(w.beta) <= pm.faces[w.face].vertices
            assert not set(w.beta) & (inst.P | inst.M)


class TestHypotheses:
    def test_island_breaks_4(self):
        inst = pinwheel_instance()
        lonely = next(v for v in inst.P if v in inst.contour.enclosed)
        anchor = [v for v in inst.P if v in inst.graph.adjacent[lonely] and v in set(inst.gamma)]
        bad = dataclasses.replace(inst, P=inst.P - frozenset(anchor))
        rep = verify_hypotheses(bad)
        assert rep.by_tag("4")
        with pytest.raises(LevelSetError, match="hypotheses fail"):
            run_counting(bad)

    def test_beta_through_P_breaks_3(self):
        inst = pinwheel_instance()
        z = min(inst.Z)
        w = inst.witnesses[z]
        wit = dict(inst.witnesses)
        wit[z] = dataclasses.replace(w, beta=w.beta + (w.p,))
        rep = verify_hypotheses(dataclasses.replace(inst, witnesses=wit))
        assert any("meets P or M" in msg for _, msg in rep.by_tag("3"))

    def test_missing_witness_breaks_3(self):
        inst = pinwheel_instance()
        wit = dict(inst.witnesses)
        wit.pop(min(inst.Z))
        assert verify_hypotheses(dataclasses.replace(inst, witnesses=wit)).by_tag("3")

    def test_zero_off_contour_breaks_1(self):
        inst = pinwheel_instance()
        off = next(v for v in range(inst.graph.n) if v not in set(inst.gamma) and v not in inst.contour.enclosed)
        rep = verify_hypotheses(dataclasses.replace(inst, Z=inst.Z | {off}))
        assert rep.by_tag("1")

    def test_sign_outside_breaks_2(self):
        inst = pinwheel_instance()
        off = next(v for v in range(inst.graph.n) if v not in set(inst.gamma) and v not in inst.contour.enclosed)
        assert verify_hypotheses(dataclasses.replace(inst, M=inst.M | {off})).by_tag("2")

    def test_overlap_breaks_disjointness(self):
        inst = pinwheel_instance()
        assert verify_hypotheses(dataclasses.replace(inst, Z=inst.Z | {min(inst.P)})).by_tag("disjoint")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0.2, 0.3, 0.4, 0.5]), st.integers(4, 8))
def test_random_thresholded_instances(seed, q, m):
    fg = instantiate_region(square_lattice(), m + 3)
    inst = quantile_instance(fg, seed, q, m)
    assert verify_hypotheses(inst).ok
    rep = run_counting(inst)
    assert rep.bound_satisfied
    assert rep.density_ok and rep.half_ok
    assert replay(inst) == (rep.Z_prime, rep.trace, len(rep.S_final))
