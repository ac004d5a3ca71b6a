from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmlab.gallery import (
    EXP_BASE,
    GALLERY,
    CounterexampleError,
    a3_threshold,
    a4_closed_form,
    build_crossing_lattice,
    diagonal_field,
    diagonal_sequence,
    harmonic_gallery,
    solve_a4,
    z3_box_example,
)
from harmlab.graph import validate_embedding
from harmlab.harmonic import is_harmonic, laplacian_apply


def test_reference_parameters():
    ce = build_crossing_lattice(1, 2, 3)
    assert ce.params.A4 == F(1, 6)
    assert a3_threshold(1, 2) == F(8, 3)


def test_box_41_exactly_harmonic():
    ce = build_crossing_lattice(1, 2, 3)
    fg, h = ce.box(41)
    assert fg.n == 41 * 41
    rep = is_harmonic(h)
    assert rep.certified and rep.max_residual == 0 and rep.checked == len(fg.interior)
    # long diagonal edges reach two steps, so the 37x37 core is certainly interior
    core = [v for v in range(fg.n) if max(abs(c) for c in fg.positions[v]) <= 18]
    assert len(core) == 37 * 37 and set(core) <= fg.interior


def test_diagonal_values():
    seq = diagonal_sequence(1, 2, range(-3, 4))
    assert seq.ratio == -2
    assert [seq[i] for i in range(-3, 4)] == [F(-1, 8), F(1, 4), F(-1, 2), 1, -2, 4, -8]
    for i in range(-2, 3):
        assert 1 * seq[i] + 2 * seq[i - 1] == 0


def test_crossing_is_non_planar():
    assert not validate_embedding(build_crossing_lattice(1, 2, 3).graph).planar


@settings(max_examples=30, deadline=None)
@given(
    st.fractions(F(1, 5), 5, max_denominator=5),
    st.fractions(F(1, 5), 5, max_denominator=5),
    st.fractions(F(1, 5), 20, max_denominator=5),
)
def test_solved_a4_matches_closed_form(a1, a2, a3):
    if a1 == a2:
        with pytest.raises(CounterexampleError, match="A1 != A2"):
            build_crossing_lattice(a1, a2, a3)
        return
    a4 = solve_a4(a1, a2, a3)
    assert a4 == a4_closed_form(a1, a2, a3)
    assert (a4 > 0) == (a3 > a3_threshold(a1, a2))
    if a4 > 0:
        ce = build_crossing_lattice(a1, a2, a3)
        fg, h = ce.box(9)
        assert is_harmonic(h).certified
    else:
        with pytest.raises(CounterexampleError, match="threshold"):
            build_crossing_lattice(a1, a2, a3)


def test_nonpositive_inputs():
    with pytest.raises(CounterexampleError):
        build_crossing_lattice(0, 1, 3)


def test_even_box():
    with pytest.raises(ValueError):
        build_crossing_lattice(1, 2, 3).box(40)


def test_wrong_a4_not_harmonic():
    from harmlab.gallery import crossing_lattice
    from harmlab.graph import instantiate_region

    fg = instantiate_region(crossing_lattice(1, 2, 3, F(1, 5)), 4, "sup-norm-box")
    assert laplacian_apply(diagonal_field(fg, 1, 2))[fg.origin] != 0


def test_z3():
    ex = z3_box_example(11)
    assert ex.graph.n == 1331 and not ex.field.exact
    assert ex.report.certified and ex.report.max_residual < 1e-9 * EXP_BASE**5
    with pytest.raises(ValueError):
        z3_box_example(3)


@pytest.mark.parametrize("name", GALLERY)
def test_gallery_harmonic(name):
    f = harmonic_gallery(name, 8)
    tol = 0 if f.exact else 1e-9 * f.max_abs()
    assert is_harmonic(f, tol).certified


def test_gallery_unknown():
    with pytest.raises(KeyError):
        harmonic_gallery("sine", 4)
